#include "hurwitz/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hurwitz/approx.hpp"
#include "hurwitz/core.hpp"
#include "hurwitz/metrical.hpp"
#include "hurwitz/resonant.hpp"
#include "hurwitz/rng.hpp"
#include "hurwitz/suites.hpp"

namespace hq {

using json = nlohmann::json;

// ------------------------------------------------------------ schema

namespace {

using P = ParamSpec;
constexpr auto I = ParamType::integer;
constexpr auto R = ParamType::real;
constexpr auto T = ParamType::text;
constexpr auto IL = ParamType::integer_list;
constexpr auto RL = ParamType::real_list;
constexpr auto B = ParamType::boolean;

}  // namespace

const std::vector<CommandSpec>& experiment_commands() {
    static const std::vector<CommandSpec> specs = {
        {"arith-check",
         "algebraic property suites: ring laws, division, Jacobi counts, separation",
         {P{"triples", I, "10000", "random triples for the ring-law suite"},
          P{"coord_bound", I, "40", "doubled coordinates drawn from [-b, b]"},
          P{"jacobi_max", I, "200", "largest norm for the Jacobi count check"},
          P{"separation_max_norm", I, "16", "largest denominator norm for the separation check"},
          P{"direct_max_norm", I, "8", "largest denominator norm for the pairwise separation check"}}},
        {"dirichlet",
         "best approximant with |q| <= N against the 2/(|q|N) bound",
         {P{"xi", T, "random", "a,b,c,d (reals or fractions) or random"},
          P{"N", I, "0", "denominator bound; 0 draws N from [N_min, N_max]"},
          P{"N_min", I, "2", "lower end for random N"},
          P{"N_max", I, "50", "upper end for random N"},
          P{"trials", I, "1", "number of points"}}},
        {"approximants",
         "all approximants with |xi - p q^-1| < 2|q|^-2 and |q| <= Q_max",
         {P{"xi", T, "random", "a,b,c,d (reals or fractions) or random"}, P{"Q_max", I, "30", "denominator bound"}}},
        {"constants",
         "c_Q = min |xi - p q^-1| |q|^2 over |q| <= Q as Q doubles",
         {P{"xi", T, "random", "a,b,c,d or random"}, P{"Q_start", I, "2", "first Q"}, P{"Q_max", I, "64", "last Q"}}},
        {"bad-construct",
         "nested-ball construction of a badly approximable point",
         {P{"kappa", I, "3", "ratio kappa >= 3"}, P{"depth", I, "4", "number of levels"}}},
        {"resonant-count",
         "resonant counts per right unit class against |q|^4",
         {P{"norm_lo", I, "16", "smallest norm"}, P{"norm_hi", I, "400", "largest norm"},
          P{"C_limit", R, "12", "allowed |count - |q|^4| / |q|^3"}}},
        {"near-volume",
         "Monte Carlo measure of the eps-neighbourhood of a resonant set",
         {P{"q", T, "2", "denominator, e.g. 1+i or 1/2+1/2i+1/2j+1/2k"}, P{"eps", R, "0.01", "ball radius"},
          P{"samples", I, "1000000", "Monte Carlo samples"}}},
        {"ubiquity",
         "covered share of balls by rho-neighbourhoods of resonant points with |q| <= N",
         {P{"center", T, "random", "a,b,c,d or random"}, P{"radius", R, "0.1", "ball radius (fixed center)"},
          P{"radius_min", R, "0.05", "smallest radius for random balls"},
          P{"radius_max", R, "0.1", "largest radius for random balls"}, P{"balls", I, "1", "number of balls"},
          P{"N", IL, "15", "denominator bounds"}, P{"rho", R, "0", "neighbourhood radius; 0 means 2/N^2"},
          P{"varpi", R, "0", "small-denominator cutoff; 0 means eta(N)^{1/4} N for F(m) = 1/m"},
          P{"samples", I, "100000", "Monte Carlo samples per ball"}}},
        {"sums",
         "partial sums of a critical series with verdict",
         {P{"kind", T, "lebesgue", "lebesgue, hausdorff or simultaneous"},
          P{"psi", T, "power:3", "power:v, power_log:v:w, table:x1 x2 ..., table_monotone:x1 x2 ..."},
          P{"f", T, "power:4", "power:s or general:x1 x2 ...;f1 f2 ... (hausdorff only)"},
          P{"M_max", I, "10000", "number of terms"}}},
        {"eta",
         "eta schedule, invariants and rho property suite",
         {P{"F", T, "inverse", "inverse (1/m), power:a (m^-a) or psi (f(psi(m)) m^7)"},
          P{"psi", T, "power:2", "used when F = psi"}, P{"f", T, "power:4", "used when F = psi"},
          P{"M_max", I, "1000000", "schedule range"}, P{"R_max", I, "19", "dyadic range 2^0..2^R_max"},
          P{"breakpoints", IL, "", "inject a schedule instead of building one"},
          P{"kappa", I, "2", "base of the ubiquity sum (F = psi)"}}},
        {"coverage",
         "Monte Carlo share of the domain within psi(|q|) of resonant points with N_min <= |q| <= Q_max",
         {P{"psi", T, "power:2", "approximation function"}, P{"N_min", IL, "1", "smallest |q| (list)"},
          P{"Q_max", IL, "30", "largest |q| (list)"}, P{"samples", I, "100000", "Monte Carlo samples"}}},
        {"dimension-scan",
         "critical exponent of natural-cover tails against 8/v",
         {P{"v", RL, "4", "exponents v (list)"}, P{"s_step", R, "0.05", "grid step"}, P{"s_max", R, "4", "grid end"},
          P{"N_lo", I, "10", "first tail start"}, P{"N_hi", I, "100", "second tail start"},
          P{"M_max", I, "100000", "tail end"}, P{"rule", T, "critical_profile", "critical_profile or tenfold"}}},
        {"simul-r4",
         "simultaneous Dirichlet in R^4 and the quaternion embedding",
         {P{"alpha", T, "random", "a,b,c,d or random"}, P{"N", I, "20", "denominator bound"},
          P{"trials", I, "1000", "random alpha draws"}, P{"embed_trials", I, "100", "random xi for the embedding"},
          P{"v", R, "3", "quaternion exponent for the embedding"},
          P{"Q_max", I, "20", "denominator bound for quaternion approximants"}}},
    };
    return specs;
}

const CommandSpec& command_spec(const std::string& name) {
    for (const auto& c : experiment_commands())
        if (c.name == name) return c;
    fail(Errc::invalid_argument, "unknown subcommand '" + name + "'");
}

// ------------------------------------------------------------ config

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

int64_t parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        // accept integral scientific notation such as 1e5
        char* end = nullptr;
        double d = std::strtod(t.c_str(), &end);
        if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(d) || d != std::floor(d) ||
            std::fabs(d) > 9e15)
            fail(Errc::invalid_argument, "parameter '" + key + "': expected an integer, got '" + text + "'");
        v = static_cast<int64_t>(d);
    }
    return v;
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    double d = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(d))
        fail(Errc::invalid_argument, "parameter '" + key + "': expected a real number, got '" + text + "'");
    return d;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    fail(Errc::invalid_argument, "parameter '" + key + "': expected a boolean, got '" + text + "'");
}

}  // namespace

void ExperimentConfig::set(const std::string& key_raw, const std::string& value_raw) {
    const std::string key = trim(key_raw);
    const std::string value = trim(value_raw);
    if (key.empty()) fail(Errc::invalid_argument, "empty parameter name");
    if (key == "command") {
        command = value;
    } else if (key == "seed") {
        const std::string t = value;
        uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
            fail(Errc::invalid_argument, "parameter 'seed': expected an unsigned 64-bit integer, got '" + value + "'");
        seed = v;
    } else if (key == "out") {
        if (value.empty()) fail(Errc::invalid_argument, "parameter 'out': empty path");
        out_dir = value;
    } else if (key == "format") {
        if (value != "csv" && value != "json")
            fail(Errc::invalid_argument, "parameter 'format': expected csv or json, got '" + value + "'");
        format = value;
    } else if (key == "workers") {
        int64_t w = parse_int("workers", value);
        if (w < 1 || w > 256) fail(Errc::invalid_argument, "parameter 'workers': must be in [1, 256]");
        workers = static_cast<int>(w);
    } else {
        params[key] = value;
    }
}

void ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(Errc::invalid_argument, path + ":" + std::to_string(lineno) + ": expected key = value");
        set(line.substr(0, eq), line.substr(eq + 1));
    }
}

// ------------------------------------------------------------ runner helpers

namespace {

class Params {
public:
    Params(const CommandSpec& spec, const std::map<std::string, std::string>& given) : spec_(spec) {
        for (const auto& [k, v] : given) {
            const ParamSpec* ps = find(k);
            if (ps == nullptr) fail(Errc::invalid_argument, "unknown parameter '" + k + "' for " + spec.name);
            (void)ps;
        }
        for (const auto& p : spec.params) {
            auto it = given.find(p.name);
            values_[p.name] = it != given.end() ? it->second : p.default_value;
            check(p, values_[p.name]);
        }
    }

    int64_t i(const std::string& k) const { return parse_int(k, values_.at(k)); }
    double r(const std::string& k) const { return parse_real(k, values_.at(k)); }
    const std::string& s(const std::string& k) const { return values_.at(k); }
    bool b(const std::string& k) const { return parse_bool(k, values_.at(k)); }
    std::vector<int64_t> il(const std::string& k) const {
        std::vector<int64_t> out;
        for (const auto& t : split(values_.at(k), ','))
            if (!t.empty()) out.push_back(parse_int(k, t));
        return out;
    }
    std::vector<double> rl(const std::string& k) const {
        std::vector<double> out;
        for (const auto& t : split(values_.at(k), ','))
            if (!t.empty()) out.push_back(parse_real(k, t));
        return out;
    }
    json resolved() const {
        json j = json::object();
        for (const auto& [k, v] : values_) j[k] = v;
        return j;
    }
    [[noreturn]] static void bad(const std::string& k, const std::string& why) {
        fail(Errc::invalid_argument, "parameter '" + k + "': " + why);
    }

private:
    const ParamSpec* find(const std::string& k) const {
        for (const auto& p : spec_.params)
            if (p.name == k) return &p;
        return nullptr;
    }
    void check(const ParamSpec& p, const std::string& v) const {
        if (v.empty()) return;
        switch (p.type) {
            case ParamType::integer: parse_int(p.name, v); break;
            case ParamType::real: parse_real(p.name, v); break;
            case ParamType::boolean: parse_bool(p.name, v); break;
            case ParamType::integer_list:
                for (const auto& t : split(v, ',')) parse_int(p.name, t);
                break;
            case ParamType::real_list:
                for (const auto& t : split(v, ',')) parse_real(p.name, t);
                break;
            case ParamType::text: break;
        }
    }
    const CommandSpec& spec_;
    std::map<std::string, std::string> values_;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    void add(std::vector<json> row) {
        if (row.size() != columns.size()) fail(Errc::internal, "table row width mismatch in " + name);
        rows.push_back(std::move(row));
    }
};

struct Outcome {
    std::vector<Table> tables;
    json summary = json::object();
    std::vector<std::string> failures;
};

std::string csv_cell(const json& v) {
    if (v.is_number_integer()) return v.dump();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isnan(d)) return "nan";
        if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        return buf;
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return s;
}

json finite_or_string(double d) {
    if (std::isfinite(d)) return d;
    if (std::isnan(d)) return "nan";
    return d > 0 ? "inf" : "-inf";
}

std::string write_table(const Table& t, const std::filesystem::path& dir, const std::string& format) {
    const auto path = dir / (t.name + "." + format);
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot write '" + path.string() + "'");
    if (format == "csv") {
        for (size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
        out << "\n";
        for (const auto& row : t.rows) {
            for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
            out << "\n";
        }
    } else {
        json arr = json::array();
        for (const auto& row : t.rows) {
            json o = json::object();
            for (size_t c = 0; c < row.size(); ++c)
                o[t.columns[c]] = row[c].is_number_float() ? finite_or_string(row[c].get<double>()) : row[c];
            arr.push_back(o);
        }
        out << arr.dump(2) << "\n";
    }
    if (!out) fail(Errc::io, "write failed for '" + path.string() + "'");
    return path.filename().string();
}

json quat_json(const RealQuaternion& x) { return json::array({x.c[0], x.c[1], x.c[2], x.c[3]}); }

std::string quat_text(const RealQuaternion& x) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", x.c[0], x.c[1], x.c[2], x.c[3]);
    return buf;
}

bool looks_rational(const std::string& s) {
    return !s.empty() && s.find_first_not_of("0123456789-+/") == std::string::npos;
}

Rational parse_fraction(const std::string& key, const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(key, s));
    int64_t n = parse_int(key, s.substr(0, slash));
    int64_t d = parse_int(key, s.substr(slash + 1));
    if (d == 0) Params::bad(key, "zero denominator");
    return Rational(static_cast<i128>(n), static_cast<i128>(d));
}

struct QuatInput {
    RealQuaternion real;
    std::optional<RationalQuaternion> exact;
};

// Comma-separated coordinates; all-fraction input keeps an exact copy.
QuatInput parse_quat(const std::string& key, const std::string& text) {
    auto parts = split(text, ',');
    if (parts.size() != 4) Params::bad(key, "expected four comma-separated coordinates");
    QuatInput q;
    bool exact = std::all_of(parts.begin(), parts.end(), looks_rational);
    if (exact) {
        RationalQuaternion r;
        for (int t = 0; t < 4; ++t) r.c[t] = parse_fraction(key, parts[t]);
        q.exact = r;
        q.real = RealQuaternion::from(r);
    } else {
        for (int t = 0; t < 4; ++t) q.real.c[t] = parse_real(key, parts[t]);
    }
    return q;
}

ApproxFunction parse_psi(const std::string& key, const std::string& text) {
    auto colon = text.find(':');
    const std::string kind = trim(text.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "power") return ApproxFunction::power(parse_real(key, rest));
    if (kind == "power_log") {
        auto p = split(rest, ':');
        if (p.size() != 2) Params::bad(key, "power_log needs v:w");
        return ApproxFunction::power_log(parse_real(key, p[0]), parse_real(key, p[1]));
    }
    if (kind == "table" || kind == "table_monotone") {
        std::vector<double> vals;
        for (const auto& w : split_ws(rest)) vals.push_back(parse_real(key, w));
        return ApproxFunction::table(vals, kind == "table_monotone");
    }
    Params::bad(key, "unknown function kind '" + kind + "'");
}

DimensionFunction parse_f(const std::string& key, const std::string& text) {
    auto colon = text.find(':');
    const std::string kind = trim(text.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "power") return DimensionFunction::power(parse_real(key, rest));
    if (kind == "general") {
        auto halves = split(rest, ';');
        if (halves.size() != 2) Params::bad(key, "general needs x-samples;f-samples");
        std::vector<double> xs, fs;
        for (const auto& w : split_ws(halves[0])) xs.push_back(parse_real(key, w));
        for (const auto& w : split_ws(halves[1])) fs.push_back(parse_real(key, w));
        return DimensionFunction::general(xs, fs);
    }
    Params::bad(key, "unknown dimension function kind '" + kind + "'");
}

void require(bool ok, const std::string& key, const std::string& why) {
    if (!ok) Params::bad(key, why);
}

double sqrt_norm(const HurwitzInt& q) { return std::sqrt(static_cast<double>(q.norm_sq())); }

// ------------------------------------------------------------ commands

Outcome cmd_arith_check(const Params& p, const ExperimentConfig& cfg) {
    Outcome o;
    Table t{"checks", {"suite", "cases", "failures", "witness"}, {}};
    std::vector<SuiteResult> all = arithmetic_suite(p.i("triples"), cfg.seed, p.i("coord_bound"));
    all.push_back(jacobi_suite(p.i("jacobi_max")));
    all.push_back(separation_suite(p.i("separation_max_norm"), cfg.workers));
    all.push_back(separation_direct(p.i("direct_max_norm")));
    json timing = json::object();
    for (const auto& s : all) {
        t.add({s.name, s.cases, s.failures, s.witness});
        timing[s.name] = s.seconds;
        if (!s.ok()) o.failures.push_back(s.name + ": " + s.witness);
    }
    o.summary["seconds"] = timing;
    o.summary["suites"] = all.size();
    o.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_dirichlet(const Params& p, const ExperimentConfig& cfg) {
    Outcome o;
    const int64_t trials = p.i("trials");
    require(trials >= 1 && trials <= 1'000'000, "trials", "must be in [1, 1e6]");
    const int64_t N_fixed = p.i("N");
    const int64_t n_lo = p.i("N_min");
    const int64_t n_hi = p.i("N_max");
    require(N_fixed == 0 || N_fixed >= 1, "N", "must be >= 1 (or 0 for random)");
    require(n_lo >= 1 && n_hi >= n_lo, "N_min", "need 1 <= N_min <= N_max");
    const bool random_xi = p.s("xi") == "random";
    std::optional<QuatInput> fixed;
    if (!random_xi) fixed = parse_quat("xi", p.s("xi"));
    CounterRng rng(cfg.seed, 0);
    Table t{"dirichlet", {"trial", "xi", "N", "p", "q", "q_norm_sq", "err", "bound", "ok"}, {}};
    int64_t ok_count = 0;
    for (int64_t k = 0; k < trials; ++k) {
        QuatInput xi = fixed ? *fixed : QuatInput{sample_delta(rng), std::nullopt};
        const int64_t N = N_fixed > 0 ? N_fixed : n_lo + static_cast<int64_t>(rng.below(static_cast<uint64_t>(n_hi - n_lo + 1)));
        Approximant a = xi.exact ? dirichlet_search(*xi.exact, N) : dirichlet_search(xi.real, N, cfg.workers);
        const double nq = sqrt_norm(a.q);
        const double bound = 2.0 / (nq * static_cast<double>(N));
        const bool ok = nq <= static_cast<double>(N) && a.err < bound;
        ok_count += ok;
        if (!ok) o.failures.push_back("trial " + std::to_string(k) + " misses the bound");
        t.add({k, quat_text(xi.real), N, format(a.p), format(a.q), a.q.norm_sq(), a.err, bound, ok});
    }
    o.summary["trials"] = trials;
    o.summary["success_rate"] = static_cast<double>(ok_count) / static_cast<double>(trials);
    o.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_approximants(const Params& p, const ExperimentConfig& cfg) {
    Outcome o;
    const int64_t Q = p.i("Q_max");
    CounterRng rng(cfg.seed, 0);
    QuatInput xi = p.s("xi") == "random" ? QuatInput{sample_delta(rng), std::nullopt} : parse_quat("xi", p.s("xi"));
    auto list = xi.exact ? good_approximants(*xi.exact, Q) : good_approximants(xi.real, Q);
    Table t{"approximants", {"p", "q", "q_norm_sq", "err", "quality", "exact_err_sq"}, {}};
    for (const auto& a : list)
        t.add({format(a.p), format(a.q), a.q.norm_sq(), a.err, a.quality(), a.err_sq ? json(a.err_sq->str()) : json()});
    o.summary["xi"] = quat_text(xi.real);
    o.summary["count"] = list.size();
    o.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_constants(const Params& p, const ExperimentConfig& cfg) {
    Outcome o;
    const int64_t q0 = p.i("Q_start");
    const int64_t q1 = p.i("Q_max");
    require(q0 >= 1 && q1 >= q0, "Q_start", "need 1 <= Q_start <= Q_max");
    CounterRng rng(cfg.seed, 0);
    QuatInput xi = p.s("xi") == "random" ? QuatInput{sample_delta(rng), std::nullopt} : parse_quat("xi", p.s("xi"));
    Table t{"constants", {"Q", "c", "C", "p", "q"}, {}};
    double prev = std::numeric_limits<double>::infinity();
    for (int64_t Q = q0; Q <= q1; Q *= 2) {
        auto m = markov_constants(xi.real, Q, cfg.workers);
        t.add({Q, m.c, finite_or_string(m.C), format(m.p), format(m.q)});
        if (m.c > prev) o.failures.push_back("c increases at Q = " + std::to_string(Q));
        prev = m.c;
        if (Q > q1 / 2) break;
    }
    o.summary["xi"] = quat_text(xi.real);
    o.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_bad_construct(const Params& p, const ExperimentConfig& cfg) {
    Outcome o;
    BadConstructionConfig bc;
    bc.kappa = p.i("kappa");
    const int64_t depth = p.i("depth");
    require(depth >= 0 && depth <= 16, "depth", "must be in [0, 16]");
    bc.depth = static_cast<int>(depth);
    bc.seed = cfg.seed;
    auto res = construct_badly_approximable(bc, cfg.workers);
    const int64_t need = static_cast<int64_t>(std::ceil(BadConstructionConfig::K1() * bc.nu())) - 1;
    Table t{"levels", {"level", "candidates", "discarded", "survivors", "rationals_in_shrunk_ball", "center"}, {}};
    json surv = json::array();
    for (const auto& l : res.levels) {
        t.add({l.level, l.candidates, l.discarded, l.survivors, l.rationals_in_shrunk_ball, quat_text(l.center)});
        surv.push_back(l.survivors);
        if (l.discarded > 1) o.failures.push_back("level " + std::to_string(l.level) + " discarded more than one ball");
        if (l.survivors < need)
            o.failures.push_back("level " + std::to_string(l.level) + " has fewer than " + std::to_string(need) +
                                 " survivors");
    }
    if (bc.depth > 0 && !(res.certificate > 0.0)) o.failures.push_back("certificate is not positive");
    o.summary["kappa"] = bc.kappa;
    o.summary["depth"] = bc.depth;
    o.summary["seed"] = bc.seed;
    o.summary["point"] = quat_json(res.point);
    o.summary["certificate"] = finite_or_string(res.certificate);
    o.summary["per_level_survivors"] = surv;
    o.summary["survivor_floor"] = need;
    Table c{"certificate", {"kappa", "depth", "seed", "point", "certificate"}, {}};
    c.add({bc.kappa, bc.depth, bc.seed, quat_text(res.point), finite_or_string(res.certificate)});
    o.tables.push_back(std::move(t));
    o.tables.push_back(std::move(c));
    return o;
}

Outcome cmd_resonant_count(const Params& p, const ExperimentConfig&) {
    Outcome o;
    const int64_t lo = p.i("norm_lo");
    const int64_t hi = p.i("norm_hi");
    require(lo >= 1 && hi >= lo && hi <= 100'000, "norm_lo", "need 1 <= norm_lo <= norm_hi <= 1e5");
    const double limit = p.r("C_limit");
    Table t{"resonant_count", {"q", "q_norm_sq", "count", "ratio", "C"}, {}};
    double cmax = 0.0;
    int64_t classes = 0;
    for (int64_t m = lo; m <= hi; ++m) {
        std::set<HurwitzInt> seen;
        for (const auto& q : enumerate_by_norm(m, Order::hurwitz)) seen.insert(right_unit_class(q));
        const double md = static_cast<double>(m);
        for (const auto& q : seen) {
            const int64_t c = count_resonant(q);
            const double C = std::fabs(static_cast<double>(c) - md * md) / std::pow(md, 1.5);
            cmax = std::max(cmax, C);
            ++classes;
            t.add({format(q), m, c, static_cast<double>(c) / (md * md), C});
        }
    }
    if (cmax > limit) o.failures.push_back("fitted C exceeds C_limit");
    o.summary["classes"] = classes;
    o.summary["C_fitted"] = cmax;
    o.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_near_volume(const Params& p, const ExperimentConfig& cfg) {
    Outcome o;
    const HurwitzInt q = parse_hurwitz(p.s("q"));
    auto v = near_resonant_volume(q, p.r("eps"), p.i("samples"), cfg.seed, cfg.workers);
    Table t{"near_volume",
            {"q", "eps", "samples", "hits", "measure", "stderr", "analytic", "analytic_valid", "z"},
            {}};
    const double z = v.std_error > 0.0 ? (v.measure - v.analytic) / v.std_error : 0.0;
    t.add({format(q), p.r("eps"), v.samples, v.hits, v.measure, v.std_error, v.analytic, v.analytic_valid,
           v.analytic_valid ? json(z) : json()});
    o.summary["shards"] = v.shards;
    o.tables.push_back(std::move(t));
    return o;
}

double default_varpi(int64_t N) {
    auto sched = build_eta([](int64_t m) { return 1.0L / static_cast<long double>(m); }, std::max<int64_t>(1000, 4 * N));
    return sched.varpi(N);
}

Outcome cmd_ubiquity(const Params& p, const ExperimentConfig& cfg) {
    Outcome o;
    const int64_t balls = p.i("balls");
    require(balls >= 1 && balls <= 10'000, "balls", "must be in [1, 1e4]");
    const auto Ns = p.il("N");
    require(!Ns.empty(), "N", "needs at least one value");
    const bool random_center = p.s("center") == "random";
    const double rmin = p.r("radius_min");
    const double rmax = p.r("radius_max");
    if (random_center) require(rmin > 0.0 && rmax >= rmin && rmax <= 0.25, "radius_min", "need 0 < min <= max <= 0.25");
    CounterRng rng(cfg.seed, 0);
    Table t{"ubiquity",
            {"ball", "center", "radius", "N", "rho", "varpi", "fraction", "stderr", "EN_estimate", "EN_fraction",
             "EN_stderr", "EN_bound"},
            {}};
    int64_t half_covered = 0;
    for (int64_t b = 0; b < balls; ++b) {
        Ball4 ball;
        if (random_center) {
            ball.radius = rng.uniform(rmin, rmax);
            const double hi[4] = {1.0, 1.0, 1.0, 0.5};
            for (int k = 0; k < 4; ++k) ball.center.c[k] = rng.uniform(ball.radius, hi[k] - ball.radius);
        } else {
            ball.center = parse_quat("center", p.s("center")).real;
            ball.radius = p.r("radius");
        }
        bool all_half = true;
        for (int64_t N : Ns) {
            const double rho = p.r("rho") > 0.0 ? p.r("rho") : 2.0 / static_cast<double>(N * N);
            const double varpi = p.r("varpi") > 0.0 ? p.r("varpi") : default_varpi(N);
            const uint64_t stream_seed = CounterRng(cfg.seed, 1000 + static_cast<uint64_t>(b)).next_u64();
            auto r = ubiquity_check(ball, N, rho, p.i("samples"), stream_seed, varpi, cfg.workers);
            if (r.covered_fraction < 0.5) all_half = false;
            t.add({b, quat_text(ball.center), ball.radius, N, rho, varpi, r.covered_fraction, r.std_error, r.en_measure,
                   r.en_fraction, r.en_std_error, r.en_bound});
        }
        half_covered += all_half;
    }
    o.summary["balls"] = balls;
    o.summary["balls_at_least_half_covered"] = half_covered;
    o.summary["shards"] = kMonteCarloShards;
    o.tables.push_back(std::move(t));
    return o;
}

SumSeries::Kind parse_kind(const std::string& s) {
    if (s == "lebesgue") return SumSeries::Kind::lebesgue;
    if (s == "hausdorff") return SumSeries::Kind::hausdorff;
    if (s == "simultaneous") return SumSeries::Kind::simultaneous;
    Params::bad("kind", "expected lebesgue, hausdorff or simultaneous");
}

std::vector<int64_t> checkpoints(int64_t M) {
    std::vector<int64_t> out;
    for (int64_t d = 1; d <= M; d *= 10) {
        for (int64_t k : {1, 2, 5})
            if (k * d <= M) out.push_back(k * d);
        if (d > M / 10) break;
    }
    if (out.empty() || out.back() != M) out.push_back(M);
    return out;
}

Outcome cmd_sums(const Params& p, const ExperimentConfig&) {
    Outcome o;
    const auto kind = parse_kind(p.s("kind"));
    const ApproxFunction psi = parse_psi("psi", p.s("psi"));
    std::optional<DimensionFunction> f;
    if (kind == SumSeries::Kind::hausdorff) f = parse_f("f", p.s("f"));
    const int64_t M = p.i("M_max");
    auto ser = critical_sum(kind, psi, f ? &*f : nullptr, M);
    const std::string params = psi.describe() + (f ? " " + f->describe() : "");
    Table t{"sums", {"M", "partial_sum", "kind", "params"}, {}};
    for (int64_t m : checkpoints(M)) t.add({m, ser.at(m), to_string(kind), params});
    o.summary["total"] = static_cast<double>(ser.total);
    o.summary["verdict"] = to_string(ser.verdict);
    o.summary["verdict_basis"] = ser.verdict_basis;
    if (ser.tail_estimate) {
        o.summary["tail_estimate"] = *ser.tail_estimate;
        o.summary["tail_bound"] = *ser.tail_bound;
        o.summary["total_with_tail"] = static_cast<double>(ser.total + *ser.tail_estimate);
    }
    o.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_eta(const Params& p, const ExperimentConfig&) {
    Outcome o;
    const int64_t M = p.i("M_max");
    const int64_t R = p.i("R_max");
    const std::string Fspec = p.s("F");
    std::function<long double(int64_t)> F;
    std::optional<ApproxFunction> psi;
    std::optional<DimensionFunction> f;
    if (Fspec == "inverse") {
        F = [](int64_t m) { return 1.0L / static_cast<long double>(m); };
    } else if (Fspec.rfind("power:", 0) == 0) {
        const long double a = parse_real("F", Fspec.substr(6));
        F = [a](int64_t m) { return std::pow(static_cast<long double>(m), -a); };
    } else if (Fspec == "psi") {
        psi = parse_psi("psi", p.s("psi"));
        f = parse_f("f", p.s("f"));
        F = [&](int64_t m) { return (*f)(psi->at(m)) * std::pow(static_cast<long double>(m), 7.0L); };
    } else {
        Params::bad("F", "expected inverse, power:a or psi");
    }
    EtaSchedule sched;
    const auto injected = p.il("breakpoints");
    if (!injected.empty()) {
        require(injected.front() == 1, "breakpoints", "must start at 1");
        require(std::is_sorted(injected.begin(), injected.end()) &&
                    std::adjacent_find(injected.begin(), injected.end()) == injected.end(),
                "breakpoints", "must be strictly increasing");
        sched.breakpoints = injected;
        sched.M_max = M;
        for (size_t i = 0; i + 1 < injected.size(); ++i) {
            KahanSum s;
            for (int64_t m = injected[i]; m < injected[i + 1]; ++m) s.add(F(m));
            sched.block_sums.push_back(static_cast<double>(s.sum));
        }
    } else {
        sched = build_eta(F, M);
    }
    Table bt{"breakpoints", {"i", "m_i", "block_sum"}, {}};
    for (size_t i = 0; i < sched.breakpoints.size(); ++i)
        bt.add({static_cast<int64_t>(i + 1), sched.breakpoints[i],
                i < sched.block_sums.size() ? json(sched.block_sums[i]) : json()});
    auto inv = check_eta_invariants(sched, F);
    for (const auto& v : inv.violations) o.failures.push_back("eta invariant: " + v);
    Table pt{"rho_properties", {"property", "pass", "witness"}, {}};
    require(R >= 1 && R <= 40, "R_max", "must be in [1, 40]");
    auto rp = rho_properties(sched, static_cast<int>(R));
    const std::pair<const char*, const RhoProperty*> props[] = {{"decreasing", &rp.decreasing},
                                                                 {"inverse_square", &rp.inverse_square},
                                                                 {"quasi_monotone", &rp.quasi_monotone},
                                                                 {"dyadic_band", &rp.dyadic_band}};
    for (const auto& [name, prop] : props) {
        pt.add({name, prop->pass, prop->witness});
        if (!prop->pass) o.failures.push_back(std::string("rho property ") + name + ": " + prop->witness);
    }
    o.summary["complete_blocks"] = sched.complete_blocks();
    o.summary["band_equalities"] = rp.band_equalities;
    o.summary["invariants_ok"] = inv.ok;
    o.tables.push_back(std::move(bt));
    o.tables.push_back(std::move(pt));
    if (psi) {
        auto cmp = compare_sums(*psi, *f, sched, M, p.i("kappa"));
        Table ct{"comparison", {"block_end", "standard", "dyadic", "ratio"}, {}};
        for (size_t i = 0; i < cmp.block_ends.size(); ++i)
            ct.add({cmp.block_ends[i], cmp.standard_at_blocks[i], cmp.dyadic_at_blocks[i],
                    cmp.standard_at_blocks[i] / cmp.dyadic_at_blocks[i]});
        o.summary["ratio_min"] = cmp.ratio_min;
        o.summary["ratio_max"] = cmp.ratio_max;
        o.summary["identity_max_rel_error"] = cmp.identity_max_rel_error;
        o.summary["both_increase_at_blocks"] = cmp.both_increase_at_blocks;
        if (!cmp.both_increase_at_blocks) o.failures.push_back("comparison sums stall at a block boundary");
        o.tables.push_back(std::move(ct));
    }
    return o;
}

Outcome cmd_coverage(const Params& p, const ExperimentConfig& cfg) {
    Outcome o;
    const ApproxFunction psi = parse_psi("psi", p.s("psi"));
    const auto nmins = p.il("N_min");
    const auto qmaxs = p.il("Q_max");
    require(!nmins.empty() && !qmaxs.empty(), "Q_max", "needs at least one value");
    Table t{"coverage", {"psi", "N_min", "Q_max", "fraction", "stderr", "seed", "hits", "samples"}, {}};
    for (int64_t nmin : nmins)
        for (int64_t qmax : qmaxs) {
            auto r = measure_estimate(psi, nmin, qmax, p.i("samples"), cfg.seed, cfg.workers);
            t.add({psi.describe(), nmin, qmax, r.fraction, r.std_error, cfg.seed, r.hits, r.samples});
        }
    o.summary["shards"] = kMonteCarloShards;
    o.tables.push_back(std::move(t));
    return o;
}

Outcome cmd_dimension_scan(const Params& p, const ExperimentConfig&) {
    Outcome o;
    const double step = p.r("s_step");
    const double smax = p.r("s_max");
    require(step > 0.0 && smax >= step && smax / step <= 100'000, "s_step", "need 0 < s_step <= s_max");
    std::vector<double> grid;
    for (int64_t k = 1; static_cast<double>(k) * step <= smax * (1.0 + 1e-12); ++k) grid.push_back(static_cast<double>(k) * step);
    TailRule rule;
    if (p.s("rule") == "critical_profile")
        rule = TailRule::critical_profile;
    else if (p.s("rule") == "tenfold")
        rule = TailRule::tenfold;
    else
        Params::bad("rule", "expected critical_profile or tenfold");
    Table t{"scan", {"v", "s", "N", "tail_value", "verdict"}, {}};
    Table tr{"transition", {"v", "s_star", "analytic", "saturated", "rule"}, {}};
    for (double v : p.rl("v")) {
        auto sc = cover_sum_exponent(v, grid, {p.i("N_lo"), p.i("N_hi")}, p.i("M_max"), rule);
        for (size_t k = 0; k < sc.rows.size(); ++k) {
            const auto& row = sc.rows[k];
            t.add({v, row.s, row.N, row.tail, sc.supercritical[k / 2] ? "supercritical" : "subcritical"});
        }
        tr.add({v, finite_or_string(sc.s_star), sc.analytic, sc.saturated, sc.rule});
    }
    o.tables.push_back(std::move(t));
    o.tables.push_back(std::move(tr));
    return o;
}

Outcome cmd_simul_r4(const Params& p, const ExperimentConfig& cfg) {
    Outcome o;
    const int64_t N = p.i("N");
    const int64_t trials = p.i("trials");
    require(trials >= 1 && trials <= 1'000'000, "trials", "must be in [1, 1e6]");
    const bool random_alpha = p.s("alpha") == "random";
    std::array<double, 4> fixed{};
    if (!random_alpha) fixed = parse_quat("alpha", p.s("alpha")).real.c;
    CounterRng rng(cfg.seed, 0);
    Table t{"simultaneous", {"trial", "alpha", "q", "p", "err", "bound", "holds"}, {}};
    int64_t holds = 0;
    for (int64_t k = 0; k < trials; ++k) {
        std::array<double, 4> a = fixed;
        if (random_alpha)
            for (auto& x : a) x = rng.uniform();
        auto r = simultaneous_dirichlet(a, N);
        holds += r.holds;
        std::ostringstream ps;
        ps << r.p[0] << "," << r.p[1] << "," << r.p[2] << "," << r.p[3];
        t.add({k, quat_text(RealQuaternion{a}), r.q, ps.str(), r.err, r.bound, r.holds});
        if (!r.holds) o.failures.push_back("simultaneous bound fails at trial " + std::to_string(k));
    }
    const double v = p.r("v");
    Table e{"embedding",
            {"trial", "xi", "p", "q", "norm", "denominator", "identity_exact", "quaternion_err", "simultaneous_err",
             "exponent_at_norm", "holds"},
            {}};
    int64_t embedded = 0;
    double min_exp = std::numeric_limits<double>::infinity();
    CounterRng erng(cfg.seed, 1);
    for (int64_t k = 0; k < p.i("embed_trials"); ++k) {
        RealQuaternion xi = sample_delta(erng);
        for (const auto& [pp, qq] : power_approximants(xi, v, p.i("Q_max"))) {
            auto c = embed_approximant(xi, pp, qq, v);
            ++embedded;
            if (c.norm > 1) min_exp = std::min(min_exp, c.exponent_at_norm);
            if (!c.identity_exact || !c.holds)
                o.failures.push_back("embedding fails for " + format(pp) + " | " + format(qq));
            e.add({k, quat_text(xi), format(pp), format(qq), c.norm, c.denominator, c.identity_exact, c.quaternion_err,
                   c.simultaneous_err, finite_or_string(c.exponent_at_norm), c.holds});
        }
    }
    Table cs{"critical_exponents", {"v", "quaternion_lebesgue", "simultaneous"}, {}};
    for (double vv : {1.0, 1.25, 1.5, 2.0, 2.5}) {
        auto psi = ApproxFunction::power(vv);
        cs.add({vv, to_string(critical_sum(SumSeries::Kind::lebesgue, psi, nullptr, 10).verdict),
                to_string(critical_sum(SumSeries::Kind::simultaneous, psi, nullptr, 10).verdict)});
    }
    o.summary["dirichlet_success_rate"] = static_cast<double>(holds) / static_cast<double>(trials);
    o.summary["embedded_approximants"] = embedded;
    o.summary["min_exponent_at_norm"] = finite_or_string(min_exp);
    o.tables.push_back(std::move(t));
    o.tables.push_back(std::move(e));
    o.tables.push_back(std::move(cs));
    return o;
}

std::string utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = utc_now();
    if (cfg.command.empty()) fail(Errc::invalid_argument, "no subcommand given");
    const CommandSpec& spec = command_spec(cfg.command);
    Params params(spec, cfg.params);

    using Fn = Outcome (*)(const Params&, const ExperimentConfig&);
    static const std::map<std::string, Fn> table = {
        {"arith-check", cmd_arith_check},   {"dirichlet", cmd_dirichlet},
        {"approximants", cmd_approximants}, {"constants", cmd_constants},
        {"bad-construct", cmd_bad_construct}, {"resonant-count", cmd_resonant_count},
        {"near-volume", cmd_near_volume},   {"ubiquity", cmd_ubiquity},
        {"sums", cmd_sums},                 {"eta", cmd_eta},
        {"coverage", cmd_coverage},         {"dimension-scan", cmd_dimension_scan},
        {"simul-r4", cmd_simul_r4},
    };
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.out_dir))
        fail(Errc::io, "output directory '" + cfg.out_dir + "' is not writable");

    Outcome out = table.at(cfg.command)(params, cfg);

    ExperimentResult res;
    for (const auto& t : out.tables) res.files.push_back(write_table(t, cfg.out_dir, cfg.format));
    res.failures = out.failures;
    res.exit_code = out.failures.empty() ? 0 : 2;
    res.summary = out.summary.dump();

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest = {
        {"command", cfg.command},
        {"version", kVersion},
        {"seed", cfg.seed},
        {"workers", cfg.workers},
        {"shards", kMonteCarloShards},
        {"format", cfg.format},
        {"config", params.resolved()},
        {"files", res.files},
        {"summary", out.summary},
        {"failures", out.failures},
        {"exit_code", res.exit_code},
        {"started_at", started},
        {"wall_time_s", wall},
    };
    const auto mpath = std::filesystem::path(cfg.out_dir) / "manifest.json";
    std::ofstream mf(mpath);
    if (!mf) fail(Errc::io, "cannot write '" + mpath.string() + "'");
    mf << manifest.dump(2) << "\n";
    res.files.push_back("manifest.json");
    return res;
}

}  // namespace hq
