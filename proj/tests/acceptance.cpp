// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <array>
#include <chrono>
#include <cstdarg>
#include <limits>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "hurwitz/approx.hpp"
#include "hurwitz/core.hpp"
#include "hurwitz/metrical.hpp"
#include "hurwitz/resonant.hpp"
#include "hurwitz/rng.hpp"
#include "hurwitz/suites.hpp"

using namespace hq;

namespace {

constexpr uint64_t kSeed = 20240601;
constexpr double kArithSeconds = 10.0;
constexpr double kDirichletSeconds = 120.0;
constexpr double kResonantC = 12.0;
constexpr double kUbiquityShare = 0.5;
constexpr int kUbiquityBallsNeeded = 19;
constexpr long double kZeta5 = 1.036927755143369926331365486457734L;
constexpr long double kEulerGamma = 0.577215664901532860606512090082402L;
constexpr double kZetaTol = 1e-6;
constexpr double kHarmonicTol = 1e-3;
constexpr double kExponentTol = 0.05 + 1e-9;
constexpr double kScanSeconds = 60.0;
constexpr double kCoverageFloor = 0.9;   // v = 2 at Q_max = 30
constexpr double kTailCeiling = 0.05;    // v = 3, N_min = 20, Q_max = 40
constexpr int kMarkovNeeded = 95;

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("criterion %2d %s  %s: %s\n", id, ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

void guard(int id, const char* name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

void c1() {
    auto t0 = std::chrono::steady_clock::now();
    auto suites = arithmetic_suite(10000, kSeed);
    const double t = seconds_since(t0);
    bool ok = t < kArithSeconds;
    std::string bad;
    for (const auto& s : suites)
        if (!s.ok()) {
            ok = false;
            bad += " " + s.name + "(" + s.witness + ")";
        }
    report(1, "arithmetic suite", ok,
           fmt("%zu suites x 10000 triples, %.2f s%s", suites.size(), t, bad.empty() ? "" : bad.c_str()));
}

void c2() {
    auto r = jacobi_suite(200);
    const auto h1 = enumerate_by_norm(1, Order::hurwitz).size();
    report(2, "Jacobi cross-check", r.ok() && h1 == 24,
           fmt("%lld norms checked, %lld mismatches, Hurwitz count at m=1 is %zu", static_cast<long long>(r.cases),
               static_cast<long long>(r.failures), h1));
}

void c3() {
    auto t0 = std::chrono::steady_clock::now();
    auto r = separation_suite(64);
    report(3, "separation lemma", r.ok() && r.cases > 0,
           fmt("%lld class pairs with norms <= 64, %lld violations, %.1f s", static_cast<long long>(r.cases),
               static_cast<long long>(r.failures), seconds_since(t0)));
}

void c4() {
    auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(kSeed, 4);
    int ok = 0;
    for (int k = 0; k < 1000; ++k) {
        const RealQuaternion xi = sample_delta(rng);
        const int64_t N = 2 + static_cast<int64_t>(rng.below(49));
        auto a = dirichlet_search(xi, N);
        const double nq = std::sqrt(static_cast<double>(a.q.norm_sq()));
        const double err = (xi - RealQuaternion::from(to_rational({a.p, a.q}))).norm();
        ok += nq <= static_cast<double>(N) && err < 2.0 / (nq * static_cast<double>(N));
    }
    const double t = seconds_since(t0);
    report(4, "Dirichlet theorem", ok == 1000 && t < kDirichletSeconds,
           fmt("%d/1000 found with |q| <= N and err < 2/(|q|N), %.1f s", ok, t));
}

void c5() {
    auto t0 = std::chrono::steady_clock::now();
    double C = 0.0;
    int64_t classes = 0;
    for (int64_t m = 16; m <= 400; ++m) {
        std::set<HurwitzInt> seen;
        for (const auto& q : enumerate_by_norm(m, Order::hurwitz)) seen.insert(right_unit_class(q));
        const double md = static_cast<double>(m);
        for (const auto& q : seen) {
            C = std::max(C, std::fabs(static_cast<double>(count_resonant(q)) - md * md) / std::pow(md, 1.5));
            ++classes;
        }
    }
    report(5, "resonant counting", C <= kResonantC,
           fmt("fitted C = %.4f over %lld right unit classes with norm 16..400, %.1f s", C,
               static_cast<long long>(classes), seconds_since(t0)));
}

void c6() {
    auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(kSeed, 6);
    const int64_t N = 15;
    const double rho = 2.0 / static_cast<double>(N * N);
    auto sched = build_eta([](int64_t m) { return 1.0L / static_cast<long double>(m); }, 1000);
    int good = 0;
    double worst = 1.0;
    for (int b = 0; b < 20; ++b) {
        Ball4 ball;
        ball.radius = rng.uniform(0.05, 0.1);
        const double hi[4] = {1.0, 1.0, 1.0, 0.5};
        for (int t = 0; t < 4; ++t) ball.center.c[t] = rng.uniform(ball.radius, hi[t] - ball.radius);
        auto r = ubiquity_check(ball, N, rho, 100000, rng.next_u64(), sched.varpi(N));
        good += r.covered_fraction >= kUbiquityShare;
        worst = std::min(worst, r.covered_fraction);
    }
    const Ball4 center{{{0.5, 0.5, 0.5, 0.25}}, 0.1};
    std::string trail;
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (int64_t n : {10, 20, 30, 40}) {
        auto r = ubiquity_check(center, n, 2.0 / static_cast<double>(n * n), 20000, kSeed, sched.varpi(n));
        decreasing = decreasing && r.en_bound < prev;
        prev = r.en_bound;
        trail += fmt(" N=%lld bound=%.3g mc=%.3f", static_cast<long long>(n), r.en_bound, r.en_fraction);
    }
    report(6, "ubiquity", good >= kUbiquityBallsNeeded && decreasing,
           fmt("%d/20 balls >= 0.5 covered (min %.3f); |E(N)|%s; %.1f s", good, worst, trail.c_str(),
               seconds_since(t0)));
}

void c7() {
    auto F = [](int64_t m) { return 1.0L / static_cast<long double>(m); };
    auto s = build_eta(F, 1000000);
    auto inv = check_eta_invariants(s, F);
    auto rp = rho_properties(s, 19);
    std::string why;
    for (const auto* p : {&rp.decreasing, &rp.inverse_square, &rp.quasi_monotone, &rp.dyadic_band})
        if (!p->pass) why += " " + p->witness;
    for (const auto& v : inv.violations) why += " " + v;
    report(7, "eta schedule and rho properties", inv.ok && rp.all_pass(),
           fmt("%d complete blocks, invariants %s, rho properties %s, dyadic band lower bound attained with "
               "equality %d times (non-strict check)%s",
               s.complete_blocks(), inv.ok ? "hold" : "fail", rp.all_pass() ? "pass" : "fail", rp.band_equalities,
               why.c_str()));
}

void c8() {
    auto z = critical_sum(SumSeries::Kind::lebesgue, ApproxFunction::power(3.0), nullptr, 10000);
    const long double with_tail = z.total + z.tail_estimate.value_or(0.0);
    const double ez = std::fabs(static_cast<double>(with_tail - kZeta5));
    auto h = critical_sum(SumSeries::Kind::lebesgue, ApproxFunction::power(2.0), nullptr, 1000000);
    const double eh = std::fabs(static_cast<double>(h.total - (std::log(1e6L) + kEulerGamma)));
    report(8, "critical sums", ez < kZetaTol && eh < kHarmonicTol && z.verdict == Verdict::converges &&
                                   h.verdict == Verdict::diverges,
           fmt("v=3: S(1e4)+tail - zeta(5) = %.2e (tail bound %.1e); v=2: S(1e6) - (ln 1e6 + gamma) = %.2e", ez,
               z.tail_bound.value_or(NAN), eh));
}

void c9() {
    bool ok = true;
    std::string detail;
    for (double v : {3.0, 4.0, 6.0, 8.0}) {
        auto t0 = std::chrono::steady_clock::now();
        auto scan = cover_sum_exponent(v, default_s_grid(), {10, 100}, 100000);
        const double t = seconds_since(t0);
        const bool good = std::fabs(scan.s_star - 8.0 / v) <= kExponentTol && t < kScanSeconds;
        ok = ok && good;
        detail += fmt(" v=%g s*=%.2f (8/v=%.3f, %.1f s)", v, scan.s_star, 8.0 / v, t);
    }
    report(9, "Jarnik-Besicovitch exponent", ok, detail.substr(1));
}

void c10() {
    auto t0 = std::chrono::steady_clock::now();
    const auto psi2 = ApproxFunction::power(2.0);
    bool nested = true;
    int64_t prev_hits = -1;
    double last = 0.0;
    std::string trail;
    for (int64_t Q : {5, 10, 20, 30}) {
        auto r = measure_estimate(psi2, 1, Q, 100000, kSeed);
        nested = nested && r.hits >= prev_hits;
        prev_hits = r.hits;
        last = r.fraction;
        trail += fmt(" Q=%lld:%.4f", static_cast<long long>(Q), r.fraction);
    }
    auto tail = measure_estimate(ApproxFunction::power(3.0), 20, 40, 100000, kSeed);
    report(10, "Khintchine trend", nested && last >= kCoverageFloor && tail.fraction <= kTailCeiling,
           fmt("v=2 coverage%s (non-decreasing: %s); v=3 tail N_min=20 Q_max=40: %.5f +- %.5f; %.1f s",
               trail.c_str(), nested ? "yes" : "no", tail.fraction, tail.std_error, seconds_since(t0)));
}

void c11() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double min_cert = std::numeric_limits<double>::infinity();
    int min_surv = 1 << 30;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        BadConstructionConfig cfg;
        cfg.kappa = 3;
        cfg.depth = 4;
        cfg.seed = seed;
        auto r = construct_badly_approximable(cfg);
        ok = ok && r.certificate > 0.0 && static_cast<int>(r.levels.size()) == cfg.depth;
        min_cert = std::min(min_cert, r.certificate);
        for (const auto& l : r.levels) {
            ok = ok && l.survivors >= 2 && l.discarded <= 1;
            min_surv = std::min(min_surv, l.survivors);
        }
    }
    CounterRng rng(kSeed, 11);
    const double bound = std::sqrt(2.0 / 5.0);
    int below = 0;
    for (int k = 0; k < 100; ++k) below += markov_constants(sample_delta(rng), 50).c < bound;
    ok = ok && below >= kMarkovNeeded;
    report(11, "badly approximable construction", ok,
           fmt("5 seeds: min certificate %.4f, min survivors per level %d; c_50 < sqrt(2/5) for %d/100; %.1f s",
               min_cert, min_surv, below, seconds_since(t0)));
}

void c12() {
    CounterRng rng(kSeed, 12);
    int holds = 0;
    for (int k = 0; k < 1000; ++k) {
        std::array<double, 4> a{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        holds += simultaneous_dirichlet(a, 20).holds;
    }
    int64_t embedded = 0, bad = 0;
    double min_exp = std::numeric_limits<double>::infinity();
    CounterRng xr(kSeed, 120);
    for (int k = 0; k < 100; ++k) {
        const RealQuaternion xi = sample_delta(xr);
        for (const auto& [p, q] : power_approximants(xi, 3.0, 20)) {
            auto e = embed_approximant(xi, p, q, 3.0);
            ++embedded;
            if (!e.identity_exact || !e.holds || (e.norm > 1 && e.exponent_at_norm < 1.5)) ++bad;
            if (e.norm > 1) min_exp = std::min(min_exp, e.exponent_at_norm);
        }
    }
    report(12, "simultaneous comparison", holds == 1000 && bad == 0 && embedded > 0,
           fmt("Dirichlet in R^4 at N=20: %d/1000; embedding: %lld approximants, %lld failures, min exponent at "
               "the normed denominator %.3f",
               holds, static_cast<long long>(embedded), static_cast<long long>(bad), min_exp));
}

}  // namespace

int main() {
    const std::pair<const char*, void (*)()> all[] = {
        {"arithmetic suite", c1}, {"Jacobi cross-check", c2}, {"separation lemma", c3},
        {"Dirichlet theorem", c4}, {"resonant counting", c5}, {"ubiquity", c6},
        {"eta schedule and rho properties", c7}, {"critical sums", c8}, {"Jarnik-Besicovitch exponent", c9},
        {"Khintchine trend", c10}, {"badly approximable construction", c11}, {"simultaneous comparison", c12},
    };
    int id = 0;
    for (const auto& [name, fn] : all) guard(++id, name, fn);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
