#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gen.hpp"
#include "hurwitz/approx.hpp"
#include "hurwitz/metrical.hpp"

using namespace hq;

namespace {

constexpr long double kZeta5 = 1.036927755143369926331365486457734L;
constexpr long double kEulerGamma = 0.577215664901532860606512090082402L;

long double inverse(int64_t m) { return 1.0L / static_cast<long double>(m); }

// Greedy breakpoints written out directly: next breakpoint is the first m >= 2 m_i after which the block sum tops 1.
std::vector<int64_t> greedy_breakpoints(int64_t M_max) {
    std::vector<int64_t> out{1};
    long double acc = 0.0L;
    for (int64_t m = 1; m < M_max; ++m) {
        acc += 1.0L / static_cast<long double>(m);
        if (m + 1 >= 2 * out.back() && acc > 1.0L) {
            out.push_back(m + 1);
            acc = 0.0L;
        }
    }
    return out;
}

}  // namespace

TEST(MetricalExamples, ZetaFive) {
    auto s = critical_sum(SumSeries::Kind::lebesgue, ApproxFunction::power(3.0), nullptr, 10000);
    EXPECT_EQ(s.verdict, Verdict::converges);
    EXPECT_EQ(s.verdict_basis, "analytic");
    ASSERT_TRUE(s.tail_estimate && s.tail_bound);
    const long double total = s.total + *s.tail_estimate;
    EXPECT_LT(std::fabs(static_cast<double>(total - kZeta5)), 1e-6);
    EXPECT_LT(std::fabs(static_cast<double>(total - kZeta5)), *s.tail_bound + 1e-15);
}

TEST(MetricalExamples, HarmonicSeries) {
    auto s = critical_sum(SumSeries::Kind::lebesgue, ApproxFunction::power(2.0), nullptr, 1000000);
    EXPECT_EQ(s.verdict, Verdict::diverges);
    const long double want = std::log(1e6L) + kEulerGamma;
    EXPECT_LT(std::fabs(static_cast<double>(s.total - want)), 1e-3);
    EXPECT_NEAR(s.at(1000000), 14.392727, 1e-6);
    long double h = 0.0L;
    for (int64_t m = 1; m <= 1000; ++m) h += 1.0L / static_cast<long double>(m);
    EXPECT_NEAR(s.at(1000), static_cast<double>(h), 1e-12);
}

TEST(MetricalExamples, HausdorffThresholdAtTwo) {
    const auto psi = ApproxFunction::power(4.0);
    auto below = DimensionFunction::power(1.95);
    auto at = DimensionFunction::power(2.0);
    auto above = DimensionFunction::power(2.05);
    EXPECT_EQ(critical_sum(SumSeries::Kind::hausdorff, psi, &below, 100).verdict, Verdict::diverges);
    EXPECT_EQ(critical_sum(SumSeries::Kind::hausdorff, psi, &at, 100).verdict, Verdict::diverges);
    EXPECT_EQ(critical_sum(SumSeries::Kind::hausdorff, psi, &above, 100).verdict, Verdict::converges);
    EXPECT_THROW(critical_sum(SumSeries::Kind::hausdorff, psi, nullptr, 100), Error);
}

TEST(MetricalExamples, SimultaneousThresholdDiffers) {
    auto sim = [](double v) {
        return critical_sum(SumSeries::Kind::simultaneous, ApproxFunction::power(v), nullptr, 10).verdict;
    };
    auto quat = [](double v) {
        return critical_sum(SumSeries::Kind::lebesgue, ApproxFunction::power(v), nullptr, 10).verdict;
    };
    EXPECT_EQ(sim(1.2), Verdict::diverges);
    EXPECT_EQ(sim(1.25), Verdict::diverges);
    EXPECT_EQ(sim(1.3), Verdict::converges);
    EXPECT_EQ(quat(1.5), Verdict::diverges);
    EXPECT_EQ(quat(2.0), Verdict::diverges);
    EXPECT_EQ(quat(2.05), Verdict::converges);
}

TEST(MetricalExamples, TableVerdictIsUndetermined) {
    std::vector<double> vals;
    for (int m = 1; m <= 50; ++m) vals.push_back(std::pow(m, -3.0));
    auto s = critical_sum(SumSeries::Kind::lebesgue, ApproxFunction::table(vals, true), nullptr, 50);
    EXPECT_EQ(s.verdict, Verdict::undetermined);
    EXPECT_EQ(s.verdict_basis, "undetermined at scale M_max");
    vals[10] = 1.0;
    EXPECT_THROW(ApproxFunction::table(vals, true), Error);
    EXPECT_NO_THROW(ApproxFunction::table(vals, false));
}

TEST(MetricalExamples, ApproxFunctionStepRule) {
    auto psi = ApproxFunction::power(2.0);
    EXPECT_EQ(psi(3.7), psi(3.0));
    EXPECT_DOUBLE_EQ(psi(3.0), 1.0 / 9.0);
    EXPECT_THROW(psi(0.5), Error);
    EXPECT_THROW(ApproxFunction::power(-1.0), Error);
}

TEST(MetricalExamples, EtaScheduleForInverse) {
    auto s = build_eta(inverse, 1000000);
    const std::vector<int64_t> frozen{1, 3, 8, 21, 57, 155, 421, 1144, 3109, 8451, 22972, 62444, 169740, 461401};
    EXPECT_EQ(s.breakpoints, frozen);
    EXPECT_EQ(s.breakpoints, greedy_breakpoints(1000000));
    for (size_t i = 0; i < s.block_sums.size(); ++i) {
        EXPECT_GT(s.block_sums[i], 1.0);
        EXPECT_LE(s.block_sums[i], 1.0 + 1.0 / static_cast<double>(s.breakpoints[i]));
    }
    EXPECT_TRUE(check_eta_invariants(s, inverse).ok);
    EXPECT_EQ(s.eta(1), 1.0);
    EXPECT_EQ(s.eta(3), 0.5);
    EXPECT_DOUBLE_EQ(s.rho(3), 2.0 / (std::pow(0.5, 0.25) * 9.0));
}

TEST(MetricalExamples, EtaRejectsSummableInput) {
    EXPECT_THROW(build_eta([](int64_t m) { return 1.0L / (static_cast<long double>(m) * m); }, 1000000), Error);
    EXPECT_THROW(build_eta(inverse, 1), Error);
}

TEST(MetricalExamples, RhoPropertiesPass) {
    auto s = build_eta(inverse, int64_t{1} << 21);
    auto r = rho_properties(s, 20);
    EXPECT_TRUE(r.all_pass()) << r.decreasing.witness << r.inverse_square.witness << r.quasi_monotone.witness
                              << r.dyadic_band.witness;
    auto r19 = rho_properties(build_eta(inverse, 1000000), 19);
    EXPECT_TRUE(r19.all_pass());
    EXPECT_EQ(r19.band_equalities, 6);
    EXPECT_THROW(rho_properties(build_eta(inverse, 1000000), 20), Error);
}

TEST(MetricalExamples, ConstantEta) {
    EtaSchedule s;
    s.breakpoints = {1};
    s.M_max = 1 << 12;
    for (int r = 0; r < 12; ++r) {
        const int64_t m = int64_t{1} << r;
        EXPECT_DOUBLE_EQ(s.rho(m), 2.0 / static_cast<double>(m * m));
        EXPECT_EQ(s.rho(2 * m) / s.rho(m), 0.25);
    }
    auto rep = rho_properties(s, 12);
    EXPECT_TRUE(rep.decreasing.pass);
    EXPECT_TRUE(rep.quasi_monotone.pass);
    EXPECT_TRUE(rep.dyadic_band.pass);
    // a constant eta never lets rho^-1 m^-2 fall
    EXPECT_FALSE(rep.inverse_square.pass);
    EXPECT_EQ(rep.band_equalities, 12);
}

TEST(MetricalExamples, TamperedScheduleFailsQuasiMonotone) {
    EtaSchedule s;
    s.breakpoints = {1, 1000, 1001, 1002};
    s.block_sums = {7.485, 0.001, 0.001};
    s.M_max = 2048;
    auto inv = check_eta_invariants(s, inverse);
    EXPECT_FALSE(inv.ok);
    auto rep = rho_properties(s, 11);
    EXPECT_FALSE(rep.quasi_monotone.pass);
    EXPECT_FALSE(rep.quasi_monotone.witness.empty());
}

TEST(MetricalExamples, CompareSumsAtVTwo) {
    const auto psi = ApproxFunction::power(2.0);
    const auto f = DimensionFunction::power(4.0);
    auto F = [&](int64_t m) { return f(psi.at(m)) * std::pow(static_cast<long double>(m), 7.0L); };
    auto s = build_eta(F, 100000);
    auto c = compare_sums(psi, f, s, 100000);
    EXPECT_TRUE(c.both_increase_at_blocks);
    EXPECT_LT(c.identity_max_rel_error, 1e-12);
    EXPECT_GT(c.ratio_min, 0.0);
    EXPECT_LT(c.ratio_max / c.ratio_min, 2.0);
    for (size_t i = 1; i < c.block_ends.size(); ++i) {
        EXPECT_GT(c.standard_at_blocks[i], c.standard_at_blocks[i - 1]);
        EXPECT_GT(c.dyadic_at_blocks[i], c.dyadic_at_blocks[i - 1]);
    }
    // the convergent case has no schedule to compare against
    const auto psi3 = ApproxFunction::power(3.0);
    EXPECT_THROW(build_eta([&](int64_t m) { return f(psi3.at(m)) * std::pow(static_cast<long double>(m), 7.0L); },
                           100000),
                 Error);
    EXPECT_THROW(compare_sums(psi, f, build_eta([](int64_t m) { return std::pow(static_cast<long double>(m), -0.5L); }, 100000), 100000),
                 Error);
}

TEST(MetricalExamples, CoverageEdgeCases) {
    auto everything = measure_estimate(ApproxFunction::table(std::vector<double>(30, 10.0), true), 1, 30, 2000, 1);
    EXPECT_EQ(everything.fraction, 1.0);
    EXPECT_THROW(measure_estimate(ApproxFunction::power(2.0), 5, 4, 100, 1), Error);
}

TEST(MetricalExamples, CoverSumExponent) {
    for (auto [v, want] : {std::pair{4.0, 2.0}, std::pair{8.0, 1.0}}) {
        auto scan = cover_sum_exponent(v, default_s_grid(), {10, 100}, 100000);
        EXPECT_NEAR(scan.s_star, want, 0.05 + 1e-9) << v;
        EXPECT_DOUBLE_EQ(scan.analytic, want);
    }
    auto sat = cover_sum_exponent(2.0, default_s_grid(), {10, 100}, 100000);
    EXPECT_TRUE(sat.saturated);
    EXPECT_EQ(sat.s_star, 4.0);
    auto tenfold = cover_sum_exponent(3.0, default_s_grid(), {10, 100}, 100000, TailRule::tenfold);
    EXPECT_NEAR(tenfold.s_star, 3.0, 0.05 + 1e-9);
}

TEST(MetricalExamples, BallRescale) {
    const RealQuaternion c{{0.5, 0.5, 0.5, 0.25}};
    EXPECT_DOUBLE_EQ(ball_rescale(c, 0.3, DimensionFunction::power(4.0)).radius, 0.3);
    EXPECT_NEAR(ball_rescale(c, 0.01, DimensionFunction::power(2.0)).radius, 0.1, 1e-15);
    auto g = DimensionFunction::general({0.5, 1.0, 2.0}, {0.1, 0.3, 0.9});
    EXPECT_NEAR(ball_rescale(c, 1.0, g).radius, std::pow(0.3, 0.25), 1e-15);
    EXPECT_EQ(ball_rescale(c, 1.0, g).center.c, c.c);
}

TEST(MetricalExamples, SimultaneousDirichlet) {
    auto r = simultaneous_dirichlet({0.25, 0.5, 0.75, 0.125}, 8);
    EXPECT_EQ(r.err, 0.0);
    EXPECT_EQ(r.q, 8);
    EXPECT_THROW(simultaneous_dirichlet({0.1, 0.2, 0.3, 0.4}, 1), Error);
}

TEST(MetricalExamples, DomainMeasure) { EXPECT_DOUBLE_EQ(domain_hausdorff_measure(), 16.0 / (M_PI * M_PI)); }

// ------------------------------------------------------------- properties

TEST(MetricalProperties, PartialSumsNonDecreasingAndAccurate) {
    CounterRng r(12);
    for (int k = 0; k < 20; ++k) {
        const double v = r.uniform(1.0, 4.0), w = r.uniform(0.0, 2.0);
        auto s = critical_sum(SumSeries::Kind::lebesgue, ApproxFunction::power_log(v, w), nullptr, 20000);
        long double ref = 0.0L;
        for (int64_t m = 1; m <= 20000; ++m) {
            const long double lm = static_cast<long double>(m);
            ref += std::pow(lm, 7.0L - 4.0L * v) * std::pow(1.0L + std::log(lm), -4.0L * w);
            if (m > 1) ASSERT_GE(s.at(m), s.at(m - 1));
        }
        ASSERT_LT(std::fabs(static_cast<double>((s.total - ref) / ref)), 1e-12);
    }
}

TEST(MetricalProperties, EtaInvariantsForPowerSeries) {
    for (long double a : {1.0L, 0.9L, 0.75L, 0.5L}) {
        auto F = [a](int64_t m) { return std::pow(static_cast<long double>(m), -a); };
        auto s = build_eta(F, 200000);
        auto inv = check_eta_invariants(s, F);
        ASSERT_TRUE(inv.ok) << (inv.violations.empty() ? "" : inv.violations.front());
        for (size_t i = 0; i + 1 < s.breakpoints.size(); ++i) ASSERT_GE(s.breakpoints[i + 1], 2 * s.breakpoints[i]);
        for (int64_t m = 2; m <= 200000; m = m * 3 / 2 + 1) ASSERT_LE(s.eta(m), s.eta(m - 1));
        ASSERT_TRUE(rho_properties(s, 17).all_pass());
    }
}

TEST(MetricalProperties, CoverageNestedInQmax) {
    const auto psi = ApproxFunction::power(2.5);
    int64_t prev = -1;
    for (int64_t Q : {2, 4, 8, 12}) {
        auto r = measure_estimate(psi, 1, Q, 4000, 77);
        ASSERT_GE(r.hits, prev);
        prev = r.hits;
    }
    const auto psi3 = ApproxFunction::power(3.0);
    auto tail5 = measure_estimate(psi3, 5, 20, 20000, 9);
    auto tail10 = measure_estimate(psi3, 10, 20, 20000, 9);
    EXPECT_LE(tail10.hits, tail5.hits);
}

TEST(MetricalProperties, PsiCloseAgreesWithDirectCheck) {
    CounterRng r(5);
    const auto psi = ApproxFunction::power(4.0);
    int agree_hits = 0;
    for (int k = 0; k < 40; ++k) {
        auto xi = gen::point(r);
        bool direct = false;
        for (int64_t m = 4; m <= 16 && !direct; ++m) {
            const double radius = psi(std::sqrt(static_cast<double>(m)));
            for (const auto& q : enumerate_by_norm(m, Order::hurwitz)) {
                auto y = xi * q;
                std::array<int64_t, 4> lo{};
                for (int t = 0; t < 4; ++t) lo[t] = static_cast<int64_t>(std::floor(2.0 * y.c[t])) - 2;
                for (int64_t a = lo[0]; a <= lo[0] + 5; ++a)
                    for (int64_t b = lo[1]; b <= lo[1] + 5; ++b)
                        for (int64_t c = lo[2]; c <= lo[2] + 5; ++c)
                            for (int64_t d = lo[3]; d <= lo[3] + 5; ++d) {
                                if (((a - b) | (a - c) | (a - d)) & 1) continue;
                                auto p = HurwitzInt::doubled(a, b, c, d);
                                const double err =
                                    (y - RealQuaternion::from(p)).norm() / std::sqrt(static_cast<double>(m));
                                if (err < radius && in_delta_closure({p, q})) direct = true;
                            }
            }
        }
        agree_hits += direct;
        ASSERT_EQ(psi_close(xi, psi, 2, 4), direct) << k;
    }
    EXPECT_GT(agree_hits, 0);
    EXPECT_LT(agree_hits, 40);
}

TEST(MetricalProperties, SimultaneousBoundAgainstExhaustiveSearch) {
    CounterRng r(6);
    for (int k = 0; k < 300; ++k) {
        std::array<double, 4> a{r.uniform(), r.uniform(), r.uniform(), r.uniform()};
        auto s = simultaneous_dirichlet(a, 20);
        ASSERT_TRUE(s.holds);
        double best = std::numeric_limits<double>::infinity();
        for (int64_t q = 1; q <= 20; ++q) {
            double err = 0.0;
            for (double x : a) err = std::max(err, std::fabs(x * q - std::round(x * q)) / q);
            best = std::min(best, q * err);
        }
        ASSERT_NEAR(best, s.q * s.err, 1e-12);
    }
}

TEST(MetricalProperties, EmbeddingIdentity) {
    CounterRng r(10);
    for (int k = 0; k < 10; ++k) {
        auto xi = gen::point(r);
        for (const auto& [p, q] : power_approximants(xi, 3.0, 15)) {
            auto e = embed_approximant(xi, p, q, 3.0);
            ASSERT_TRUE(e.identity_exact);
            ASSERT_TRUE(e.holds);
            ASSERT_EQ(e.norm, q.norm_sq());
            ASSERT_TRUE(e.denominator == e.norm || e.denominator == 2 * e.norm);
            ASSERT_LE(e.simultaneous_err, e.quaternion_err + 1e-15);
            if (e.norm > 1) ASSERT_GE(e.exponent_at_norm, 1.5);
        }
    }
}
