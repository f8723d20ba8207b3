#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <set>

#include "gen.hpp"
#include "hurwitz/core.hpp"
#include "hurwitz/metrical.hpp"
#include "hurwitz/resonant.hpp"

using namespace hq;

namespace {

// Counts p with p conj(q) / n in [0,1]^3 x [0,1/2] by scanning a box of doubled coordinates.
int64_t brute_count(const HurwitzInt& q) {
    const int64_t n = q.norm_sq();
    const int64_t b = static_cast<int64_t>(std::ceil(2.0 * 1.81 * std::sqrt(static_cast<double>(n)))) + 1;
    const i128 qa = q[0], qb = -q[1], qc = -q[2], qd = -q[3];
    int64_t count = 0;
    for (int64_t A = -b; A <= b; ++A)
        for (int64_t B = -b; B <= b; ++B)
            for (int64_t C = -b; C <= b; ++C)
                for (int64_t D = -b; D <= b; ++D) {
                    if (((A - B) | (A - C) | (A - D)) & 1) continue;
                    // 4 * (p conj q), each coordinate compared with 4n times the box bound
                    const i128 x0 = A * qa - B * qb - C * qc - D * qd;
                    const i128 x1 = A * qb + B * qa + C * qd - D * qc;
                    const i128 x2 = A * qc - B * qd + C * qa + D * qb;
                    const i128 x3 = A * qd + B * qc - C * qb + D * qa;
                    const i128 n4 = 4 * static_cast<i128>(n);
                    if (x0 < 0 || x0 > n4 || x1 < 0 || x1 > n4 || x2 < 0 || x2 > n4 || x3 < 0 || 2 * x3 > n4) continue;
                    ++count;
                }
    return count;
}

}  // namespace

TEST(ResonantExamples, SmallCounts) {
    EXPECT_EQ(enumerate_resonant(HurwitzInt::one()).count, 9);
    EXPECT_EQ(count_resonant(HurwitzInt::one()), 9);
    const char* qs[] = {"2", "1+i", "1/2+1/2i+1/2j+1/2k", "3+i+j", "2+i", "3/2+1/2i-1/2j+3/2k", "2+2k"};
    for (const char* s : qs) {
        auto q = parse_hurwitz(s);
        const int64_t want = brute_count(q);
        EXPECT_EQ(enumerate_resonant(q).count, want) << s;
        EXPECT_EQ(count_resonant(q), want) << s;
    }
    EXPECT_EQ(count_resonant(parse_hurwitz("2")), 62);
    EXPECT_EQ(count_resonant(parse_hurwitz("3+i+j")), 154);
    EXPECT_THROW(enumerate_resonant(HurwitzInt()), Error);
}

TEST(ResonantExamples, NormTwentyFive) {
    double worst = 0.0;
    for (const auto& q : enumerate_by_norm(25, Order::hurwitz)) {
        const double ratio = static_cast<double>(count_resonant(q)) / 625.0;
        worst = std::max(worst, std::fabs(ratio - 1.0) * 5.0);
    }
    EXPECT_LE(worst, 12.0);
}

TEST(ResonantExamples, NearVolumeEdgeCases) {
    auto q = parse_hurwitz("1+i");
    EXPECT_EQ(near_resonant_volume(q, 0.0, 1000, 1).measure, 0.0);
    auto full = near_resonant_volume(q, 2.0, 1000, 1);
    EXPECT_EQ(full.measure, 0.5);
    EXPECT_THROW(near_resonant_volume(q, -1.0, 1000, 1), Error);
}

TEST(ResonantExamples, NearVolumeMatchesBallSum) {
    auto q = parse_hurwitz("2");
    auto v = near_resonant_volume(q, 0.05, 400000, 21);
    ASSERT_TRUE(v.analytic_valid);
    EXPECT_LT(std::fabs(v.measure - v.analytic), 3.0 * v.std_error);
    auto small = near_resonant_volume(q, 0.01, 10000000, 22);
    ASSERT_TRUE(small.analytic_valid);
    EXPECT_LT(std::fabs(small.measure - small.analytic), 3.0 * small.std_error);
}

TEST(ResonantExamples, Ubiquity) {
    const Ball4 center{{{0.5, 0.5, 0.5, 0.25}}, 0.1};
    auto r = ubiquity_check(center, 15, 2.0 / 225.0, 20000, 5, 2.0);
    EXPECT_GE(r.covered_fraction, 0.5);
    auto all = ubiquity_check(center, 3, 0.25, 5000, 5, 2.0);
    EXPECT_EQ(all.covered_fraction, 1.0);
    EXPECT_THROW(ubiquity_check({{{0.5, 0.5, 0.5, 0.25}}, 0.4}, 15, 0.01, 100, 1, 2.0), Error);
    EXPECT_THROW(ubiquity_check(center, 15, -1.0, 100, 1, 2.0), Error);
}

TEST(ResonantExamples, SmallDenominatorBoundDecreases) {
    const Ball4 ball{{{0.5, 0.5, 0.5, 0.25}}, 0.1};
    auto sched = build_eta([](int64_t m) { return 1.0L / static_cast<long double>(m); }, 1000);
    double prev = std::numeric_limits<double>::infinity();
    for (int64_t N = 10; N <= 40; N += 5) {
        auto r = ubiquity_check(ball, N, 2.0 / static_cast<double>(N * N), 200, 1, sched.varpi(N));
        EXPECT_LT(r.en_bound, prev) << N;
        prev = r.en_bound;
    }
}

// ------------------------------------------------------------- properties

TEST(ResonantProperties, PointsAreInClosedDomainAndDistinct) {
    CounterRng r(44);
    for (int k = 0; k < 12; ++k) {
        auto q = gen::nonzero(r, 6);
        auto lat = enumerate_resonant(q);
        ASSERT_EQ(static_cast<int64_t>(lat.points.size()), lat.count);
        std::set<std::array<int64_t, 4>> values;
        for (const auto& x : lat.points) {
            auto v = to_rational(x);
            for (int t = 0; t < 3; ++t) {
                ASSERT_GE(v.c[t], Rational(0));
                ASSERT_LE(v.c[t], Rational(1));
            }
            ASSERT_GE(v.c[3], Rational(0));
            ASSERT_LE(v.c[3], Rational(1, 2));
            values.insert(scaled_value(x));
        }
        ASSERT_EQ(static_cast<int64_t>(values.size()), lat.count);
        for (size_t a = 0; a < lat.points.size(); ++a)
            for (size_t b = a + 1; b < lat.points.size(); ++b)
                ASSERT_TRUE(separation_gap(lat.points[a], lat.points[b]).holds);
    }
}

TEST(ResonantProperties, CountGrowsLikeFourthPower) {
    double C = 0.0;
    for (int64_t m = 4; m <= 100; ++m)
        for (const auto& q : enumerate_by_norm(m, Order::hurwitz)) {
            if (right_unit_class(q) != q) continue;
            const double md = static_cast<double>(m);
            C = std::max(C, std::fabs(static_cast<double>(count_resonant(q)) - md * md) / std::pow(md, 1.5));
        }
    EXPECT_LE(C, 12.0);
}

TEST(ResonantProperties, CountDependsOnRightClassOnly) {
    CounterRng r(9);
    for (int k = 0; k < 40; ++k) {
        auto q = gen::nonzero(r, 10);
        const auto& u = units()[r.below(24)];
        ASSERT_EQ(right_unit_class(q * u), right_unit_class(q));
        ASSERT_EQ(count_resonant(q * u), count_resonant(q));
    }
}

TEST(ResonantProperties, MonteCarloSeedsAgree) {
    auto q = parse_hurwitz("1+i+j");
    auto a = near_resonant_volume(q, 0.08, 200000, 101);
    auto b = near_resonant_volume(q, 0.08, 200000, 202);
    EXPECT_LT(std::fabs(a.measure - b.measure), 4.0 * std::hypot(a.std_error, b.std_error));
}

TEST(ResonantProperties, WorkerCountDoesNotChangeResults) {
    auto q = parse_hurwitz("2+i");
    auto a = near_resonant_volume(q, 0.05, 50000, 3, 1);
    auto b = near_resonant_volume(q, 0.05, 50000, 3, 4);
    EXPECT_EQ(a.hits, b.hits);
    const Ball4 ball{{{0.4, 0.6, 0.5, 0.2}}, 0.07};
    auto u1 = ubiquity_check(ball, 12, 2.0 / 144.0, 4000, 8, 3.0, 1);
    auto u3 = ubiquity_check(ball, 12, 2.0 / 144.0, 4000, 8, 3.0, 3);
    EXPECT_EQ(u1.covered_fraction, u3.covered_fraction);
    EXPECT_EQ(u1.en_fraction, u3.en_fraction);
}

TEST(ResonantProperties, BallVolume) {
    EXPECT_DOUBLE_EQ(ball_volume(1.0), M_PI * M_PI / 2.0);
    EXPECT_DOUBLE_EQ(ball_volume(0.5), M_PI * M_PI / 32.0);
}
