#include "hurwitz/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace hq {

void fail(Errc code, const std::string& what) { throw Error(code, what); }

i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) fail(Errc::overflow, "integer overflow in multiplication");
    return r;
}

i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) fail(Errc::overflow, "integer overflow in addition");
    return r;
}

i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) fail(Errc::overflow, "integer overflow in subtraction");
    return r;
}

int64_t narrow(i128 v) {
    if (v > std::numeric_limits<int64_t>::max() || v < std::numeric_limits<int64_t>::min())
        fail(Errc::overflow, "value does not fit in 64 bits");
    return static_cast<int64_t>(v);
}

std::string to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

namespace {

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i128 sq(i128 v) { return checked_mul(v, v); }

}  // namespace

// ---------------------------------------------------------------- Rational

Rational::Rational(i128 n, i128 d) {
    if (d == 0) fail(Errc::division_by_zero, "rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n);
    den_ = narrow(d);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    i128 n = checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_));
    return Rational(n, checked_mul(a.den_, b.den_));
}

Rational operator-(const Rational& a, const Rational& b) {
    i128 n = checked_sub(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_));
    return Rational(n, checked_mul(a.den_, b.den_));
}

Rational operator*(const Rational& a, const Rational& b) {
    i128 g1 = gcd128(a.num_, b.den_);
    i128 g2 = gcd128(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) fail(Errc::division_by_zero, "rational division by zero");
    return a * Rational(static_cast<i128>(b.den_), static_cast<i128>(b.num_));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    i128 l = static_cast<i128>(a.num_) * b.den_;
    i128 r = static_cast<i128>(b.num_) * a.den_;
    return l <=> r;
}

// -------------------------------------------------------------- HurwitzInt

HurwitzInt HurwitzInt::doubled(int64_t A, int64_t B, int64_t C, int64_t D) {
    if (((A ^ B) & 1) || ((A ^ C) & 1) || ((A ^ D) & 1))
        fail(Errc::invalid_argument, "doubled coordinates must share parity");
    return HurwitzInt(A, B, C, D);
}

HurwitzInt HurwitzInt::integer(int64_t a, int64_t b, int64_t c, int64_t d) {
    return HurwitzInt(narrow(checked_mul(a, 2)), narrow(checked_mul(b, 2)), narrow(checked_mul(c, 2)),
                      narrow(checked_mul(d, 2)));
}

int64_t HurwitzInt::norm_sq() const {
    i128 s = 0;
    for (auto v : c_) s = checked_add(s, sq(v));
    return narrow(s / 4);
}

HurwitzInt operator+(const HurwitzInt& a, const HurwitzInt& b) {
    HurwitzInt r;
    for (int t = 0; t < 4; ++t) r.c_[t] = narrow(checked_add(a.c_[t], b.c_[t]));
    return r;
}

HurwitzInt operator-(const HurwitzInt& a, const HurwitzInt& b) {
    HurwitzInt r;
    for (int t = 0; t < 4; ++t) r.c_[t] = narrow(checked_sub(a.c_[t], b.c_[t]));
    return r;
}

HurwitzInt HurwitzInt::operator-() const {
    HurwitzInt r;
    for (int t = 0; t < 4; ++t) r.c_[t] = narrow(checked_sub(0, c_[t]));
    return r;
}

HurwitzInt HurwitzInt::scaled(int64_t m) const {
    HurwitzInt r;
    for (int t = 0; t < 4; ++t) r.c_[t] = narrow(checked_mul(c_[t], m));
    return r;
}

std::array<i128, 4> doubled_product(const std::array<int64_t, 4>& A, const std::array<int64_t, 4>& B) {
    auto m = [](int64_t x, int64_t y) { return checked_mul(x, y); };
    i128 r0 = checked_sub(checked_sub(checked_sub(m(A[0], B[0]), m(A[1], B[1])), m(A[2], B[2])), m(A[3], B[3]));
    i128 r1 = checked_sub(checked_add(checked_add(m(A[0], B[1]), m(A[1], B[0])), m(A[2], B[3])), m(A[3], B[2]));
    i128 r2 = checked_add(checked_add(checked_sub(m(A[0], B[2]), m(A[1], B[3])), m(A[2], B[0])), m(A[3], B[1]));
    i128 r3 = checked_add(checked_sub(checked_add(m(A[0], B[3]), m(A[1], B[2])), m(A[2], B[1])), m(A[3], B[0]));
    return {r0 / 2, r1 / 2, r2 / 2, r3 / 2};
}

HurwitzInt operator*(const HurwitzInt& a, const HurwitzInt& b) {
    auto p = doubled_product(a.c_, b.c_);
    return HurwitzInt::doubled(narrow(p[0]), narrow(p[1]), narrow(p[2]), narrow(p[3]));
}

const std::array<HurwitzInt, 24>& units() {
    static const std::array<HurwitzInt, 24> list = [] {
        std::array<HurwitzInt, 24> u{};
        int n = 0;
        for (int t = 0; t < 4; ++t)
            for (int s : {-2, 2}) {
                std::array<int64_t, 4> v{0, 0, 0, 0};
                v[t] = s;
                u[n++] = HurwitzInt::doubled(v[0], v[1], v[2], v[3]);
            }
        for (int mask = 0; mask < 16; ++mask)
            u[n++] = HurwitzInt::doubled(mask & 1 ? -1 : 1, mask & 2 ? -1 : 1, mask & 4 ? -1 : 1,
                                         mask & 8 ? -1 : 1);
        std::sort(u.begin(), u.end());
        return u;
    }();
    return list;
}

// ------------------------------------------------------------- quaternions

RationalQuaternion RationalQuaternion::from(const HurwitzInt& h) {
    RationalQuaternion r;
    for (int t = 0; t < 4; ++t) r.c[t] = Rational(static_cast<i128>(h[t]), 2);
    return r;
}

Rational RationalQuaternion::norm_sq() const {
    Rational s(0);
    for (const auto& v : c) s = s + v * v;
    return s;
}

RationalQuaternion operator+(const RationalQuaternion& a, const RationalQuaternion& b) {
    RationalQuaternion r;
    for (int t = 0; t < 4; ++t) r.c[t] = a.c[t] + b.c[t];
    return r;
}

RationalQuaternion operator-(const RationalQuaternion& a, const RationalQuaternion& b) {
    RationalQuaternion r;
    for (int t = 0; t < 4; ++t) r.c[t] = a.c[t] - b.c[t];
    return r;
}

RationalQuaternion operator*(const RationalQuaternion& a, const RationalQuaternion& b) {
    const auto& x = a.c;
    const auto& y = b.c;
    RationalQuaternion r;
    r.c[0] = x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3];
    r.c[1] = x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2];
    r.c[2] = x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1];
    r.c[3] = x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0];
    return r;
}

RealQuaternion RealQuaternion::from(const HurwitzInt& h) {
    return RealQuaternion{{h.coord(0), h.coord(1), h.coord(2), h.coord(3)}};
}

RealQuaternion RealQuaternion::from(const RationalQuaternion& r) {
    return RealQuaternion{{r.c[0].to_double(), r.c[1].to_double(), r.c[2].to_double(), r.c[3].to_double()}};
}

bool RealQuaternion::finite() const {
    return std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); });
}

double RealQuaternion::norm() const { return std::sqrt(norm_sq()); }

RealQuaternion operator+(const RealQuaternion& a, const RealQuaternion& b) {
    return RealQuaternion{{a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2], a.c[3] + b.c[3]}};
}

RealQuaternion operator-(const RealQuaternion& a, const RealQuaternion& b) {
    return RealQuaternion{{a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2], a.c[3] - b.c[3]}};
}

RealQuaternion operator*(const RealQuaternion& a, const RealQuaternion& b) {
    const auto& x = a.c;
    const auto& y = b.c;
    return RealQuaternion{{x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3],
                           x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2],
                           x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1],
                           x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0]}};
}

RealQuaternion operator*(const RealQuaternion& a, const HurwitzInt& b) { return a * RealQuaternion::from(b); }

HurwitzRational::HurwitzRational(const HurwitzInt& p_, const HurwitzInt& q_) : p(p_), q(q_) {
    if (q.is_zero()) fail(Errc::division_by_zero, "Hurwitz rational with zero denominator");
}

// ---------------------------------------------------------------- rounding

HurwitzInt nearest_hurwitz_exact(const std::array<i128, 4>& num, i128 den) {
    if (den <= 0) fail(Errc::invalid_argument, "rounding denominator must be positive");
    std::array<int64_t, 4> best[2];
    i128 cost[2] = {0, 0};
    for (int parity = 0; parity < 2; ++parity) {
        for (int t = 0; t < 4; ++t) {
            i128 f = floor_div(num[t], den);
            i128 chosen = 0;
            i128 chosen_cost = -1;
            for (i128 cand = f - 1; cand <= f + 2; ++cand) {
                if (((cand % 2) + 2) % 2 != parity) continue;
                i128 diff = checked_sub(checked_mul(den, cand), num[t]);
                i128 c = sq(diff);
                if (chosen_cost < 0 || c < chosen_cost) {
                    chosen_cost = c;
                    chosen = cand;
                }
            }
            best[parity][t] = narrow(chosen);
            cost[parity] = checked_add(cost[parity], chosen_cost);
        }
    }
    int pick = 0;
    if (cost[1] < cost[0] || (cost[1] == cost[0] && best[1] < best[0])) pick = 1;
    return HurwitzInt::doubled(best[pick][0], best[pick][1], best[pick][2], best[pick][3]);
}

HurwitzInt nearest_hurwitz(const RationalQuaternion& x) {
    i128 L = 1;
    for (const auto& v : x.c) L = checked_mul(L / gcd128(L, v.den()), v.den());
    std::array<i128, 4> num{};
    for (int t = 0; t < 4; ++t) num[t] = checked_mul(checked_mul(x.c[t].num(), 2), L / x.c[t].den());
    return nearest_hurwitz_exact(num, L);
}

namespace {

// Two closest integers of the given parity to t, nearer first.
std::array<double, 2> parity_bracket(double t, int parity) {
    double g = 2.0 * std::floor((t - parity) / 2.0) + parity;
    double h = g + 2.0;
    if (t - g <= h - t) return {g, h};
    return {h, g};
}

void check_roundable(const RealQuaternion& x) {
    if (!x.finite()) fail(Errc::invalid_argument, "non-finite quaternion");
    for (double v : x.c)
        if (std::fabs(v) > 1e15) fail(Errc::overflow, "coordinate too large for rounding");
}

}  // namespace

HurwitzInt nearest_hurwitz(const RealQuaternion& x) {
    check_roundable(x);
    std::array<int64_t, 4> best[2];
    double cost[2] = {0.0, 0.0};
    for (int parity = 0; parity < 2; ++parity) {
        for (int t = 0; t < 4; ++t) {
            double target = 2.0 * x.c[t];
            auto br = parity_bracket(target, parity);
            double d0 = std::fabs(target - br[0]);
            double d1 = std::fabs(target - br[1]);
            double pick = br[0];
            if (d0 == d1) pick = std::min(br[0], br[1]);
            best[parity][t] = static_cast<int64_t>(pick);
            cost[parity] += (target - pick) * (target - pick);
        }
    }
    int pick = 0;
    if (cost[1] < cost[0] || (cost[1] == cost[0] && best[1] < best[0])) pick = 1;
    return HurwitzInt::doubled(best[pick][0], best[pick][1], best[pick][2], best[pick][3]);
}

std::vector<HurwitzInt> nearest_candidates(const RealQuaternion& x, double tol) {
    check_roundable(x);
    struct Cand {
        std::array<int64_t, 4> d;
        double dist;
    };
    std::vector<Cand> all;
    all.reserve(32);
    for (int parity = 0; parity < 2; ++parity) {
        std::array<std::array<double, 2>, 4> br;
        for (int t = 0; t < 4; ++t) br[t] = parity_bracket(2.0 * x.c[t], parity);
        for (int mask = 0; mask < 16; ++mask) {
            Cand c{};
            double s = 0.0;
            for (int t = 0; t < 4; ++t) {
                double v = br[t][(mask >> t) & 1];
                c.d[t] = static_cast<int64_t>(v);
                double diff = x.c[t] - 0.5 * v;
                s += diff * diff;
            }
            c.dist = std::sqrt(s);
            all.push_back(c);
        }
    }
    double best = all[0].dist;
    for (const auto& c : all) best = std::min(best, c.dist);
    std::vector<HurwitzInt> out;
    for (const auto& c : all)
        if (c.dist <= best + tol) out.push_back(HurwitzInt::doubled(c.d[0], c.d[1], c.d[2], c.d[3]));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------- division

DivRem div_rem_right(const HurwitzInt& p, const HurwitzInt& q) {
    if (q.is_zero()) fail(Errc::division_by_zero, "division by zero quaternion");
    auto num = doubled_product(p.d(), q.conj().d());
    HurwitzInt s = nearest_hurwitz_exact(num, q.norm_sq());
    return {s, p - s * q};
}

DivRem div_rem_left(const HurwitzInt& p, const HurwitzInt& q) {
    if (q.is_zero()) fail(Errc::division_by_zero, "division by zero quaternion");
    auto num = doubled_product(q.conj().d(), p.d());
    HurwitzInt s = nearest_hurwitz_exact(num, q.norm_sq());
    return {s, p - q * s};
}

bool right_divides(const HurwitzInt& d, const HurwitzInt& a) {
    if (d.is_zero()) return a.is_zero();
    return div_rem_right(a, d).r.is_zero();
}

bool left_divides(const HurwitzInt& d, const HurwitzInt& a) {
    if (d.is_zero()) return a.is_zero();
    return div_rem_left(a, d).r.is_zero();
}

HurwitzInt canonical_left_associate(const HurwitzInt& d) {
    HurwitzInt best = units()[0] * d;
    for (const auto& u : units()) best = std::max(best, u * d);
    return best;
}

HurwitzInt canonical_right_associate(const HurwitzInt& d) {
    HurwitzInt best = d * units()[0];
    for (const auto& u : units()) best = std::max(best, d * u);
    return best;
}

HurwitzInt gcd_right(HurwitzInt a, HurwitzInt b) {
    if (a.is_zero() && b.is_zero()) fail(Errc::invalid_argument, "gcd of two zeros");
    while (!b.is_zero()) {
        HurwitzInt r = div_rem_right(a, b).r;
        a = b;
        b = r;
    }
    return canonical_left_associate(a);
}

HurwitzInt gcd_left(HurwitzInt a, HurwitzInt b) {
    if (a.is_zero() && b.is_zero()) fail(Errc::invalid_argument, "gcd of two zeros");
    while (!b.is_zero()) {
        HurwitzInt r = div_rem_left(a, b).r;
        a = b;
        b = r;
    }
    return canonical_right_associate(a);
}

bool coprime_right(const HurwitzInt& a, const HurwitzInt& b) { return gcd_right(a, b).norm_sq() == 1; }

// --------------------------------------------------------------- primality

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    static const uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (uint64_t p : small) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : small) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_prime(const HurwitzInt& a) { return is_prime_u64(static_cast<uint64_t>(a.norm_sq())); }

// ------------------------------------------------------------- enumeration

namespace {

int64_t isqrt64(int64_t v) {
    if (v <= 0) return 0;
    auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && static_cast<i128>(r) * r > v) --r;
    while (static_cast<i128>(r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace

std::vector<HurwitzInt> enumerate_by_norm(int64_t m, Order order, int64_t bound) {
    if (m < 1) fail(Errc::invalid_argument, "norm must be positive");
    if (m > bound) fail(Errc::bound_exceeded, "norm " + std::to_string(m) + " exceeds enumeration bound");
    const int64_t T = 4 * m;
    const int64_t R = isqrt64(T);
    std::vector<HurwitzInt> out;
    for (int64_t A = -R; A <= R; ++A) {
        int parity = static_cast<int>(A & 1);
        if (order == Order::lipschitz && parity) continue;
        int64_t ra = T - A * A;
        int64_t rb = isqrt64(ra);
        for (int64_t B = -rb; B <= rb; ++B) {
            if ((B & 1) != parity) continue;
            int64_t rc = ra - B * B;
            int64_t rcm = isqrt64(rc);
            for (int64_t C = -rcm; C <= rcm; ++C) {
                if ((C & 1) != parity) continue;
                int64_t rest = rc - C * C;
                int64_t D = isqrt64(rest);
                if (D * D != rest || (D & 1) != parity) continue;
                if (D == 0) {
                    out.push_back(HurwitzInt::doubled(A, B, C, 0));
                } else {
                    out.push_back(HurwitzInt::doubled(A, B, C, -D));
                    out.push_back(HurwitzInt::doubled(A, B, C, D));
                }
            }
        }
    }
    return out;
}

int64_t jacobi_r4(int64_t m) {
    if (m < 1) fail(Errc::invalid_argument, "norm must be positive");
    int64_t s = 0;
    for (int64_t d = 1; d * d <= m; ++d) {
        if (m % d) continue;
        int64_t e = m / d;
        if (d % 4) s += d;
        if (e != d && e % 4) s += e;
    }
    return 8 * s;
}

// ------------------------------------------------------ fundamental domain

bool in_delta(const RealQuaternion& x) {
    return x.c[0] >= 0.0 && x.c[0] < 1.0 && x.c[1] >= 0.0 && x.c[1] < 1.0 && x.c[2] >= 0.0 && x.c[2] < 1.0 &&
           x.c[3] >= 0.0 && x.c[3] < 0.5;
}

double delta_closure_max_norm() { return std::sqrt(13.0) / 2.0; }

FractionalPart fractional_part(const RealQuaternion& xi) {
    if (!xi.finite()) fail(Errc::invalid_argument, "non-finite quaternion");
    for (double v : xi.c)
        if (std::fabs(v) > 4e15) fail(Errc::overflow, "coordinate too large for reduction");
    std::array<int64_t, 4> L{};
    for (int t = 0; t < 4; ++t) L[t] = 2 * static_cast<int64_t>(std::floor(xi.c[t]));
    auto frac = [&] {
        RealQuaternion f;
        for (int t = 0; t < 4; ++t) f.c[t] = xi.c[t] - 0.5 * static_cast<double>(L[t]);
        return f;
    };
    RealQuaternion f = frac();
    for (int iter = 0; iter < 8 && !in_delta(f); ++iter) {
        if (f.c[3] >= 0.5) {
            for (auto& v : L) v += 1;
        } else if (f.c[3] < 0.0) {
            for (auto& v : L) v -= 1;
        }
        f = frac();
        for (int t = 0; t < 3; ++t) {
            if (f.c[t] < 0.0) L[t] -= 2;
            if (f.c[t] >= 1.0) L[t] += 2;
        }
        f = frac();
    }
    if (!in_delta(f)) {
        for (int t = 0; t < 4; ++t) {
            double hi = t < 3 ? 1.0 : 0.5;
            f.c[t] = std::min(std::max(f.c[t], 0.0), std::nextafter(hi, 0.0));
        }
    }
    return {f, HurwitzInt::doubled(L[0], L[1], L[2], L[3])};
}

// -------------------------------------------------------- Hurwitz rationals

std::array<int64_t, 4> scaled_value(const HurwitzRational& x) {
    auto P = doubled_product(x.p.d(), x.q.conj().d());
    return {narrow(P[0]), narrow(P[1]), narrow(P[2]), narrow(P[3])};
}

RationalQuaternion to_rational(const HurwitzRational& x) {
    auto P = scaled_value(x);
    i128 den = checked_mul(2, x.q.norm_sq());
    RationalQuaternion r;
    for (int t = 0; t < 4; ++t) r.c[t] = Rational(static_cast<i128>(P[t]), den);
    return r;
}

bool in_delta_closure(const HurwitzRational& x) {
    auto P = scaled_value(x);
    int64_t n = x.q.norm_sq();
    for (int t = 0; t < 3; ++t)
        if (P[t] < 0 || P[t] > 2 * n) return false;
    return P[3] >= 0 && P[3] <= n;
}

SeparationResult separation_gap(const HurwitzRational& x, const HurwitzRational& y) {
    auto P = scaled_value(x);
    auto R = scaled_value(y);
    int64_t nq = x.q.norm_sq();
    int64_t ns = y.q.norm_sq();
    i128 w2 = 0;
    for (int t = 0; t < 4; ++t) {
        i128 w = checked_sub(checked_mul(P[t], ns), checked_mul(R[t], nq));
        w2 = checked_add(w2, sq(w));
    }
    if (w2 == 0) fail(Errc::invalid_argument, "separation of equal Hurwitz rationals");
    i128 nn = checked_mul(nq, ns);
    Rational gap(w2 / 4, sq(nn));
    Rational bound(1, nn);
    return {gap, bound, gap >= bound};
}

// --------------------------------------------------------------- text form

namespace {

std::string coord_text(int64_t D) {
    if ((D & 1) == 0) return std::to_string(D / 2);
    return std::to_string(D) + "/2";
}

}  // namespace

std::string format(const HurwitzInt& h) {
    std::string s = coord_text(h[0]);
    const char* names = "ijk";
    for (int t = 1; t < 4; ++t) {
        int64_t v = h[t];
        if (v < 0) {
            s += "-";
            s += coord_text(-v);
        } else {
            s += "+";
            s += coord_text(v);
        }
        s += names[t - 1];
    }
    return s;
}

std::string format(const HurwitzRational& x) { return format(x.p) + " | " + format(x.q); }

HurwitzInt parse_hurwitz(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) fail(Errc::invalid_argument, "empty quaternion text");
    std::array<i128, 4> D{0, 0, 0, 0};
    std::array<bool, 4> seen{false, false, false, false};
    size_t pos = 0;
    const i128 limit = static_cast<i128>(1) << 100;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (pos != 0) {
            fail(Errc::invalid_argument, "expected sign in '" + text + "'");
        }
        i128 num = 0;
        bool digits = false;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            num = num * 10 + (s[pos] - '0');
            if (num > limit) fail(Errc::overflow, "coordinate too large in '" + text + "'");
            digits = true;
            ++pos;
        }
        i128 den = 1;
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            den = 0;
            bool dd = false;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                den = den * 10 + (s[pos] - '0');
                if (den > limit) fail(Errc::overflow, "denominator too large");
                dd = true;
                ++pos;
            }
            if (!digits || !dd) fail(Errc::invalid_argument, "malformed fraction in '" + text + "'");
        }
        int slot = 0;
        if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j' || s[pos] == 'k')) {
            slot = 1 + (s[pos] - 'i');
            ++pos;
        } else if (!digits) {
            fail(Errc::invalid_argument, "empty term in '" + text + "'");
        }
        if (!digits) num = 1;
        if (den != 1 && den != 2) fail(Errc::invalid_argument, "coordinate denominator must be 1 or 2");
        i128 dbl = (2 * num) / den;
        if ((2 * num) % den != 0) fail(Errc::invalid_argument, "coordinate is not a half-integer");
        if (seen[slot]) fail(Errc::invalid_argument, "repeated component in '" + text + "'");
        seen[slot] = true;
        D[slot] = sign * dbl;
    }
    return HurwitzInt::doubled(narrow(D[0]), narrow(D[1]), narrow(D[2]), narrow(D[3]));
}

HurwitzRational parse_hurwitz_rational(const std::string& text) {
    auto bar = text.find('|');
    if (bar == std::string::npos || text.find('|', bar + 1) != std::string::npos)
        fail(Errc::invalid_argument, "Hurwitz rational must have the form 'p | q'");
    return HurwitzRational(parse_hurwitz(text.substr(0, bar)), parse_hurwitz(text.substr(bar + 1)));
}

}  // namespace hq
