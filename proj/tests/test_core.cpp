#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "gen.hpp"
#include "hurwitz/core.hpp"
#include "hurwitz/suites.hpp"

using namespace hq;

namespace {

HurwitzInt H(const char* s) { return parse_hurwitz(s); }

// Hamilton product on doubled coordinates, written out independently of the library.
std::array<i128, 4> naive_doubled_product(const HurwitzInt& x, const HurwitzInt& y) {
    const i128 a1 = x[0], b1 = x[1], c1 = x[2], d1 = x[3];
    const i128 a2 = y[0], b2 = y[1], c2 = y[2], d2 = y[3];
    std::array<i128, 4> q4 = {a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2, a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                              a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2, a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2};
    for (auto& v : q4) v /= 2;
    return q4;
}

bool same_up_to_unit(const HurwitzInt& a, const HurwitzInt& b) {
    for (const auto& u : units())
        if (u * a == b || a * u == b) return true;
    return false;
}

}  // namespace

TEST(CoreExamples, DefiningRelations) {
    EXPECT_EQ(HurwitzInt::i() * HurwitzInt::j(), HurwitzInt::k());
    EXPECT_EQ(HurwitzInt::j() * HurwitzInt::i(), -HurwitzInt::k());
    EXPECT_EQ(HurwitzInt::omega() * HurwitzInt::omega(), HurwitzInt::omega() - HurwitzInt::one());
    EXPECT_EQ(H("1+i") * H("1-i"), H("2"));
    EXPECT_EQ(HurwitzInt::i() * HurwitzInt::j() * HurwitzInt::k(), -HurwitzInt::one());
}

TEST(CoreExamples, Norms) {
    for (const auto& u : units()) EXPECT_EQ(u.norm_sq(), 1);
    EXPECT_EQ(units().size(), 24u);
    EXPECT_EQ(H("1+i+j+k").norm_sq(), 4);
    EXPECT_EQ((H("1+i") * H("1+j")).norm_sq(), 4);
}

TEST(CoreExamples, DivisionWithRemainder) {
    auto d = div_rem_right(H("3+3i-j+k"), H("3+k"));
    EXPECT_EQ(d.s, H("1+i"));
    EXPECT_TRUE(d.r.is_zero());
    d = div_rem_right(HurwitzInt::omega(), HurwitzInt::one());
    EXPECT_EQ(d.s, HurwitzInt::omega());
    EXPECT_TRUE(d.r.is_zero());
    d = div_rem_right(H("7"), H("2+i"));
    EXPECT_EQ(d.s, H("3-i"));
    EXPECT_EQ(d.r, H("-i"));
    EXPECT_THROW(div_rem_right(H("1"), HurwitzInt()), Error);
}

TEST(CoreExamples, Gcd) {
    auto q = H("3+2j-k");
    EXPECT_TRUE(same_up_to_unit(gcd_right(q, HurwitzInt()), q));
    auto g = gcd_right(H("1+i"), H("2"));
    EXPECT_EQ(g.norm_sq(), 2);
    EXPECT_TRUE(right_divides(g, H("1+i")));
    EXPECT_TRUE(right_divides(g, H("2")));
    EXPECT_EQ(gcd_right(H("2+i"), H("3")).norm_sq(), 1);
}

TEST(CoreExamples, Primality) {
    EXPECT_TRUE(is_prime(H("1+i")));
    EXPECT_FALSE(is_prime(H("2")));
    EXPECT_FALSE(is_prime(HurwitzInt::omega()));
    EXPECT_TRUE(is_prime(H("2+i")));
    EXPECT_FALSE(is_prime(H("3")));
}

TEST(CoreExamples, EnumerationCounts) {
    EXPECT_EQ(enumerate_by_norm(1, Order::hurwitz).size(), 24u);
    EXPECT_EQ(enumerate_by_norm(1, Order::lipschitz).size(), 8u);
    EXPECT_EQ(enumerate_by_norm(2, Order::hurwitz).size(), 24u);
}

TEST(CoreExamples, FractionalPart) {
    auto f = fractional_part({{0.3, 0.3, 0.3, 0.2}});
    EXPECT_EQ(f.frac.c, (std::array<double, 4>{0.3, 0.3, 0.3, 0.2}));
    EXPECT_TRUE(f.lattice.is_zero());
    f = fractional_part({{1.25, 0.5, 0.75, 0.6}});
    EXPECT_EQ(f.lattice, HurwitzInt::omega());
    const std::array<double, 4> want{0.75, 0.0, 0.25, 0.1};
    for (int t = 0; t < 4; ++t) EXPECT_NEAR(f.frac.c[t], want[t], 1e-15);
    f = fractional_part({{1.0, 0.0, 0.0, 0.0}});
    EXPECT_EQ(f.lattice, HurwitzInt::one());
    EXPECT_EQ(f.frac.norm_sq(), 0.0);
    EXPECT_THROW(fractional_part({{std::nan(""), 0, 0, 0}}), Error);
}

TEST(CoreExamples, Separation) {
    auto s = separation_gap({H("0"), H("1")}, {H("1"), H("1")});
    EXPECT_EQ(s.gap_sq, Rational(1));
    EXPECT_TRUE(s.holds);
    s = separation_gap({H("1+i"), H("2")}, {H("1"), H("1+i")});
    EXPECT_EQ(s.gap_sq, Rational(1));
    EXPECT_EQ(s.bound, Rational(1, 8));
    auto q = H("2+i+j");
    for (const auto& u : units()) {
        s = separation_gap({H("0"), H("1")}, {u, q});
        EXPECT_EQ(s.gap_sq, Rational(1, q.norm_sq()));
        EXPECT_EQ(s.gap_sq, s.bound);
    }
}

TEST(CoreExamples, ToRational) {
    auto r = to_rational({H("1+i"), H("1+j")});
    EXPECT_EQ(r.c[0], Rational(1, 2));
    EXPECT_EQ(r.c[1], Rational(1, 2));
    EXPECT_EQ(r.c[2], Rational(-1, 2));
    EXPECT_EQ(r.c[3], Rational(-1, 2));
    r = to_rational({H("6+i+j-k"), H("5")});
    EXPECT_EQ(r.c[0], Rational(6, 5));
    EXPECT_EQ(r.c[3], Rational(-1, 5));
}

TEST(CoreTypes, ParityAndOverflow) {
    EXPECT_THROW(HurwitzInt::doubled(1, 0, 0, 0), Error);
    const int64_t big = int64_t{1} << 40;
    auto x = HurwitzInt::doubled(big, big, big, big);
    try {
        (void)(x * x * x);
        FAIL() << "expected overflow";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::overflow);
    }
    EXPECT_THROW(Rational(1, 0), Error);
    EXPECT_EQ(Rational(6, -4), Rational(-3, 2));
    EXPECT_EQ(Rational(6, -4).den(), 2);
}

TEST(CoreTypes, TextRoundTrip) {
    CounterRng r(11);
    for (int k = 0; k < 2000; ++k) {
        auto h = gen::hurwitz(r, 60);
        EXPECT_EQ(parse_hurwitz(format(h)), h);
    }
    EXPECT_EQ(parse_hurwitz("1/2+1/2i+1/2j+1/2k"), HurwitzInt::omega());
    EXPECT_THROW(parse_hurwitz("1/2+i"), Error);
    EXPECT_THROW(parse_hurwitz("x"), Error);
    EXPECT_THROW(parse_hurwitz(""), Error);
}

// ------------------------------------------------------------- properties

TEST(CoreProperties, RingLawsAgainstNaiveProduct) {
    CounterRng r(2024);
    const auto one = HurwitzInt::one();
    for (int k = 0; k < 10000; ++k) {
        auto a = gen::hurwitz(r, 40), b = gen::hurwitz(r, 40), c = gen::hurwitz(r, 40);
        auto ab = a * b;
        auto want = naive_doubled_product(a, b);
        for (int t = 0; t < 4; ++t) ASSERT_EQ(static_cast<i128>(ab[t]), want[t]);
        ASSERT_EQ(ab * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ((a + b) * c, a * c + b * c);
        ASSERT_EQ(a * one, a);
        ASSERT_EQ(one * a, a);
        ASSERT_EQ(ab.norm_sq(), a.norm_sq() * b.norm_sq());
        ASSERT_EQ((a * a.conj()), HurwitzInt::integer(a.norm_sq(), 0, 0, 0));
    }
    const auto i = HurwitzInt::i(), j = HurwitzInt::j(), k = HurwitzInt::k();
    EXPECT_EQ(j * k, -(k * j));
    EXPECT_EQ(i * k, -(k * i));
}

TEST(CoreProperties, DivisionReconstruction) {
    CounterRng r(7);
    int checked = 0;
    while (checked < 10000) {
        auto p = gen::hurwitz(r, 400);
        auto q = gen::nonzero(r, 200);
        if (q.norm_sq() > 10000) continue;
        ++checked;
        auto d = div_rem_right(p, q);
        ASSERT_EQ(d.s * q + d.r, p);
        ASSERT_LT(d.r.norm_sq(), q.norm_sq());
        auto l = div_rem_left(p, q);
        ASSERT_EQ(q * l.s + l.r, p);
        ASSERT_LT(l.r.norm_sq(), q.norm_sq());
    }
}

TEST(CoreProperties, GcdDividesAndIsSymmetric) {
    CounterRng r(99);
    for (int k = 0; k < 2000; ++k) {
        auto c = gen::nonzero(r, 8);
        auto a = gen::nonzero(r, 12) * c;
        auto b = gen::nonzero(r, 12) * c;
        auto g = gcd_right(a, b);
        ASSERT_TRUE(right_divides(g, a));
        ASSERT_TRUE(right_divides(g, b));
        ASSERT_TRUE(right_divides(c, g));  // common right factor divides the gcd
        ASSERT_EQ(std::gcd(a.norm_sq(), b.norm_sq()) % g.norm_sq(), 0);
        ASSERT_TRUE(same_up_to_unit(gcd_right(b, a), g));
        const auto& u = units()[r.below(24)];
        ASSERT_EQ(gcd_right(u * a, u * b), g);
    }
}

TEST(CoreProperties, JacobiCountAgainstBruteForce) {
    for (int64_t m = 1; m <= 200; ++m) {
        int64_t lip = 0, hur = 0;
        const int64_t b = static_cast<int64_t>(std::sqrt(4.0 * m)) + 1;
        for (int64_t A = -b; A <= b; ++A)
            for (int64_t B = -b; B <= b; ++B)
                for (int64_t C = -b; C <= b; ++C)
                    for (int64_t D = -b; D <= b; ++D) {
                        if (A * A + B * B + C * C + D * D != 4 * m) continue;
                        if ((A - B) % 2 || (A - C) % 2 || (A - D) % 2) continue;
                        ++hur;
                        lip += (A % 2 == 0);
                    }
        ASSERT_EQ(static_cast<int64_t>(enumerate_by_norm(m, Order::lipschitz).size()), lip) << m;
        ASSERT_EQ(static_cast<int64_t>(enumerate_by_norm(m, Order::hurwitz).size()), hur) << m;
        ASSERT_EQ(jacobi_r4(m), lip) << m;
    }
}

TEST(CoreProperties, FractionalPartLandsInDomain) {
    CounterRng r(5);
    for (int k = 0; k < 20000; ++k) {
        auto xi = gen::wide_point(r, 1e3);
        auto f = fractional_part(xi);
        ASSERT_TRUE(in_delta(f.frac));
        ASSERT_LE(f.frac.norm(), delta_closure_max_norm());
        auto back = f.frac + RealQuaternion::from(f.lattice);
        for (int t = 0; t < 4; ++t) ASSERT_NEAR(back.c[t], xi.c[t], 1e-9);
    }
}

TEST(CoreProperties, SeparationExhaustiveDirect) {
    auto r = separation_direct(16);
    EXPECT_GT(r.cases, 0);
    EXPECT_EQ(r.failures, 0) << r.witness;
}

TEST(CoreProperties, SeparationExhaustiveTo100) {
    auto r = separation_suite(100);
    EXPECT_GT(r.cases, 0);
    EXPECT_EQ(r.failures, 0) << r.witness;
}

TEST(CoreProperties, NormOfQuotient) {
    CounterRng r(3);
    for (int k = 0; k < 2000; ++k) {
        auto p = gen::hurwitz(r, 30);
        auto q = gen::nonzero(r, 30);
        ASSERT_EQ(to_rational({p, q}).norm_sq(), Rational(static_cast<i128>(p.norm_sq()), q.norm_sq()));
    }
}

TEST(CoreProperties, PrimalityMatchesNorm) {
    CounterRng r(17);
    for (int k = 0; k < 3000; ++k) {
        auto a = gen::nonzero(r, 30);
        ASSERT_EQ(is_prime(a), is_prime_u64(static_cast<uint64_t>(a.norm_sq())));
    }
}
