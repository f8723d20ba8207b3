#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hurwitz/hurwitz.h"

namespace {

int exit_code_for(hq_status s) {
    switch (s) {
        case HQ_OK: return 0;
        case HQ_PROPERTY_FAILURE: return 2;
        case HQ_INTERNAL: return 3;
        default: return 1;
    }
}

struct Common {
    std::string config;
    std::string seed;
    std::string out;
    std::string format;
    std::string workers;
    std::vector<std::string> sets;
    bool quiet = false;
};

struct Sub {
    CLI::App* app = nullptr;
    std::string name;
    std::map<std::string, std::string> values;  // per-parameter flags
};

const char* env(const char* name) {
    const char* v = std::getenv(name);
    return v && *v ? v : nullptr;
}

int run(const Sub& sub, const Common& c) {
    hq_experiment* e = nullptr;
    hq_status st = hq_experiment_create(sub.name.c_str(), &e);
    auto bail = [&](hq_status s) {
        std::fprintf(stderr, "error (%s): %s\n", hq_status_name(s), hq_last_error());
        hq_experiment_free(e);
        return exit_code_for(s);
    };
    if (st != HQ_OK) return bail(st);

    // lowest to highest precedence: environment, config file, flags
    const std::pair<const char*, const char*> env_keys[] = {
        {"seed", "HURWITZ_SEED"}, {"out", "HURWITZ_OUT"}, {"format", "HURWITZ_FORMAT"}, {"workers", "HURWITZ_WORKERS"}};
    for (const auto& [key, var] : env_keys)
        if (const char* v = env(var))
            if ((st = hq_experiment_set(e, key, v)) != HQ_OK) return bail(st);

    std::string config = c.config;
    if (config.empty())
        if (const char* v = env("HURWITZ_CONFIG")) config = v;
    if (!config.empty())
        if ((st = hq_experiment_load_config(e, config.c_str())) != HQ_OK) return bail(st);

    const std::pair<const char*, const std::string*> flags[] = {
        {"seed", &c.seed}, {"out", &c.out}, {"format", &c.format}, {"workers", &c.workers}};
    for (const auto& [key, v] : flags)
        if (!v->empty())
            if ((st = hq_experiment_set(e, key, v->c_str())) != HQ_OK) return bail(st);
    for (const auto& [key, v] : sub.values)
        if ((st = hq_experiment_set(e, key.c_str(), v.c_str())) != HQ_OK) return bail(st);
    for (const auto& kv : c.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error (invalid_argument): --set expects key=value, got '%s'\n", kv.c_str());
            hq_experiment_free(e);
            return 1;
        }
        if ((st = hq_experiment_set(e, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str())) != HQ_OK)
            return bail(st);
    }

    st = hq_experiment_run(e);
    if (st != HQ_OK && st != HQ_PROPERTY_FAILURE) return bail(st);
    const auto result = nlohmann::json::parse(hq_experiment_result(e));
    if (!c.quiet) std::cout << result.dump(2) << "\n";
    for (const auto& f : result["failures"]) std::fprintf(stderr, "FAIL: %s\n", f.get<std::string>().c_str());
    hq_experiment_free(e);
    return exit_code_for(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hurwitz quaternion Diophantine approximation experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hq_version()));

    Common common;
    std::vector<Sub> subs(hq_command_count());
    for (size_t i = 0; i < subs.size(); ++i) {
        Sub& s = subs[i];
        s.name = hq_command_name(i);
        s.app = app.add_subcommand(s.name, hq_command_help(i));
        s.app->add_option("--config", common.config, "flat key = value file (env HURWITZ_CONFIG)");
        s.app->add_option("--seed", common.seed, "master seed (env HURWITZ_SEED, default 1)");
        s.app->add_option("--out", common.out, "output directory (env HURWITZ_OUT, default out)");
        s.app->add_option("--format", common.format, "csv or json (env HURWITZ_FORMAT)")
            ->check(CLI::IsMember({"csv", "json"}));
        s.app->add_option("--workers", common.workers, "worker threads (env HURWITZ_WORKERS, default 1)");
        s.app->add_option("--set", common.sets, "override a parameter, key=value (repeatable)");
        s.app->add_flag("--quiet", common.quiet, "do not print the result JSON");
        const auto schema = nlohmann::json::parse(hq_command_schema(s.name.c_str()));
        for (const auto& p : schema) {
            const std::string name = p["name"];
            std::string help = p["help"].get<std::string>() + " [" + p["type"].get<std::string>() + ", default " +
                               (p["default"].get<std::string>().empty() ? "none" : p["default"].get<std::string>()) +
                               "]";
            s.app->add_option_function<std::string>(
                "--" + name, [&s, name](const std::string& v) { s.values[name] = v; }, help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    for (const auto& s : subs)
        if (s.app->parsed()) return run(s, common);
    return 1;
}
