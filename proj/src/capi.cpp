#include "hurwitz/hurwitz.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "hurwitz/core.hpp"
#include "hurwitz/experiment.hpp"
#include "hurwitz/resonant.hpp"

struct hq_experiment {
    hq::ExperimentConfig cfg;
    std::string result = "{}";
};

namespace {

thread_local std::string g_error;

hq_status to_status(hq::Errc c) {
    switch (c) {
        case hq::Errc::ok: return HQ_OK;
        case hq::Errc::invalid_argument: return HQ_INVALID_ARGUMENT;
        case hq::Errc::overflow: return HQ_OVERFLOW;
        case hq::Errc::division_by_zero: return HQ_DIVISION_BY_ZERO;
        case hq::Errc::bound_exceeded: return HQ_BOUND_EXCEEDED;
        case hq::Errc::internal: return HQ_INTERNAL;
        case hq::Errc::io: return HQ_IO;
        case hq::Errc::property_failure: return HQ_PROPERTY_FAILURE;
    }
    return HQ_INTERNAL;
}

template <class Fn>
hq_status guarded(Fn&& fn) {
    try {
        g_error.clear();
        return fn();
    } catch (const hq::Error& e) {
        g_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_error = "out of memory";
        return HQ_INTERNAL;
    } catch (const std::exception& e) {
        g_error = e.what();
        return HQ_INTERNAL;
    } catch (...) {
        g_error = "unknown error";
        return HQ_INTERNAL;
    }
}

hq_status null_arg(const char* what) {
    g_error = std::string("null argument: ") + what;
    return HQ_INVALID_ARGUMENT;
}

hq::HurwitzInt in(const hq_hurwitz& x) { return hq::HurwitzInt::doubled(x.a2, x.b2, x.c2, x.d2); }

hq_hurwitz out(const hq::HurwitzInt& h) { return hq_hurwitz{h[0], h[1], h[2], h[3]}; }

}  // namespace

extern "C" {

const char* hq_last_error(void) { return g_error.c_str(); }

const char* hq_status_name(hq_status s) {
    switch (s) {
        case HQ_OK: return "ok";
        case HQ_INVALID_ARGUMENT: return "invalid_argument";
        case HQ_OVERFLOW: return "overflow";
        case HQ_DIVISION_BY_ZERO: return "division_by_zero";
        case HQ_BOUND_EXCEEDED: return "bound_exceeded";
        case HQ_INTERNAL: return "internal";
        case HQ_IO: return "io";
        case HQ_PROPERTY_FAILURE: return "property_failure";
    }
    return "unknown";
}

const char* hq_version(void) { return hq::kVersion; }

hq_status hq_hurwitz_make(int64_t a2, int64_t b2, int64_t c2, int64_t d2, hq_hurwitz* o) {
    if (!o) return null_arg("out");
    return guarded([&] {
        *o = out(hq::HurwitzInt::doubled(a2, b2, c2, d2));
        return HQ_OK;
    });
}

hq_status hq_hurwitz_parse(const char* text, hq_hurwitz* o) {
    if (!text) return null_arg("text");
    if (!o) return null_arg("out");
    return guarded([&] {
        *o = out(hq::parse_hurwitz(text));
        return HQ_OK;
    });
}

hq_status hq_hurwitz_format(hq_hurwitz x, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        const std::string s = hq::format(in(x));
        if (needed) *needed = s.size() + 1;
        if (!buf || cap < s.size() + 1) {
            if (buf && cap > 0) buf[0] = '\0';
            g_error = "buffer too small";
            return HQ_BOUND_EXCEEDED;
        }
        std::memcpy(buf, s.c_str(), s.size() + 1);
        return HQ_OK;
    });
}

hq_status hq_hurwitz_mul(hq_hurwitz a, hq_hurwitz b, hq_hurwitz* o) {
    if (!o) return null_arg("out");
    return guarded([&] {
        *o = out(in(a) * in(b));
        return HQ_OK;
    });
}

hq_status hq_hurwitz_norm(hq_hurwitz a, int64_t* o) {
    if (!o) return null_arg("out");
    return guarded([&] {
        *o = in(a).norm_sq();
        return HQ_OK;
    });
}

hq_status hq_hurwitz_div_rem_right(hq_hurwitz p, hq_hurwitz q, hq_hurwitz* s, hq_hurwitz* r) {
    if (!s || !r) return null_arg("out");
    return guarded([&] {
        auto d = hq::div_rem_right(in(p), in(q));
        *s = out(d.s);
        *r = out(d.r);
        return HQ_OK;
    });
}

hq_status hq_hurwitz_div_rem_left(hq_hurwitz p, hq_hurwitz q, hq_hurwitz* s, hq_hurwitz* r) {
    if (!s || !r) return null_arg("out");
    return guarded([&] {
        auto d = hq::div_rem_left(in(p), in(q));
        *s = out(d.s);
        *r = out(d.r);
        return HQ_OK;
    });
}

hq_status hq_hurwitz_gcd_right(hq_hurwitz a, hq_hurwitz b, hq_hurwitz* o) {
    if (!o) return null_arg("out");
    return guarded([&] {
        *o = out(hq::gcd_right(in(a), in(b)));
        return HQ_OK;
    });
}

hq_status hq_count_resonant(hq_hurwitz q, int64_t* o) {
    if (!o) return null_arg("out");
    return guarded([&] {
        *o = hq::count_resonant(in(q));
        return HQ_OK;
    });
}

size_t hq_command_count(void) { return hq::experiment_commands().size(); }

const char* hq_command_name(size_t i) {
    const auto& c = hq::experiment_commands();
    return i < c.size() ? c[i].name.c_str() : nullptr;
}

const char* hq_command_help(size_t i) {
    const auto& c = hq::experiment_commands();
    return i < c.size() ? c[i].help.c_str() : nullptr;
}

const char* hq_command_schema(const char* command) {
    static thread_local std::string buf;
    if (!command) return nullptr;
    for (const auto& c : hq::experiment_commands()) {
        if (c.name != command) continue;
        static const char* names[] = {"integer", "real", "text", "integer_list", "real_list", "boolean"};
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : c.params)
            arr.push_back({{"name", p.name},
                           {"type", names[static_cast<int>(p.type)]},
                           {"default", p.default_value},
                           {"help", p.help}});
        buf = arr.dump();
        return buf.c_str();
    }
    g_error = std::string("unknown subcommand '") + command + "'";
    return nullptr;
}

hq_status hq_experiment_create(const char* command, hq_experiment** o) {
    if (!command) return null_arg("command");
    if (!o) return null_arg("out");
    *o = nullptr;
    return guarded([&] {
        hq::command_spec(command);
        auto* e = new hq_experiment;
        e->cfg.command = command;
        *o = e;
        return HQ_OK;
    });
}

void hq_experiment_free(hq_experiment* e) { delete e; }

hq_status hq_experiment_set(hq_experiment* e, const char* key, const char* value) {
    if (!e) return null_arg("experiment");
    if (!key || !value) return null_arg("key/value");
    return guarded([&] {
        if (std::string(key) == "command") hq::fail(hq::Errc::invalid_argument, "the command is fixed at creation");
        e->cfg.set(key, value);
        return HQ_OK;
    });
}

hq_status hq_experiment_load_config(hq_experiment* e, const char* path) {
    if (!e) return null_arg("experiment");
    if (!path) return null_arg("path");
    return guarded([&] {
        hq::ExperimentConfig next = e->cfg;
        next.load_file(path);
        if (next.command != e->cfg.command)
            hq::fail(hq::Errc::invalid_argument,
                     "config file names command '" + next.command + "' but the run is '" + e->cfg.command + "'");
        e->cfg = std::move(next);
        return HQ_OK;
    });
}

hq_status hq_experiment_run(hq_experiment* e) {
    if (!e) return null_arg("experiment");
    return guarded([&] {
        auto r = hq::run_experiment(e->cfg);
        nlohmann::json j = {{"exit_code", r.exit_code},
                            {"files", r.files},
                            {"summary", nlohmann::json::parse(r.summary)},
                            {"failures", r.failures}};
        e->result = j.dump();
        if (r.exit_code == 2) {
            g_error = r.failures.empty() ? "property failure" : r.failures.front();
            return HQ_PROPERTY_FAILURE;
        }
        return HQ_OK;
    });
}

const char* hq_experiment_result(const hq_experiment* e) { return e ? e->result.c_str() : "{}"; }

}  // extern "C"
