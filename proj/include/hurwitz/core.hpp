#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hq {

using i128 = __int128;

enum class Errc : int {
    ok = 0,
    invalid_argument = 1,
    overflow = 2,
    division_by_zero = 3,
    bound_exceeded = 4,
    internal = 5,
    io = 6,
    property_failure = 7,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

i128 checked_mul(i128 a, i128 b);
i128 checked_add(i128 a, i128 b);
i128 checked_sub(i128 a, i128 b);
int64_t narrow(i128 v);
std::string to_string(i128 v);

/// Exact rational with int64 storage and 128-bit intermediates.
class Rational {
public:
    Rational() = default;
    Rational(int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integers is intended
    Rational(i128 n, i128 d);

    int64_t num() const { return num_; }
    int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    long double to_long_double() const {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }
    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational(-static_cast<i128>(num_), den_); }
    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    int64_t num_ = 0;
    int64_t den_ = 1;
};

/// Element of the Hurwitz order, stored as doubled coordinates of common parity.
class HurwitzInt {
public:
    HurwitzInt() = default;
    static HurwitzInt doubled(int64_t A, int64_t B, int64_t C, int64_t D);
    static HurwitzInt integer(int64_t a, int64_t b, int64_t c, int64_t d);
    static HurwitzInt one() { return HurwitzInt(2, 0, 0, 0); }
    static HurwitzInt i() { return HurwitzInt(0, 2, 0, 0); }
    static HurwitzInt j() { return HurwitzInt(0, 0, 2, 0); }
    static HurwitzInt k() { return HurwitzInt(0, 0, 0, 2); }
    static HurwitzInt omega() { return HurwitzInt(1, 1, 1, 1); }

    const std::array<int64_t, 4>& d() const { return c_; }
    int64_t operator[](int idx) const { return c_[idx]; }
    double coord(int idx) const { return 0.5 * static_cast<double>(c_[idx]); }

    bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }
    bool is_lipschitz() const { return (c_[0] & 1) == 0; }
    int64_t norm_sq() const;
    HurwitzInt conj() const { return HurwitzInt(c_[0], -c_[1], -c_[2], -c_[3]); }

    friend HurwitzInt operator+(const HurwitzInt& a, const HurwitzInt& b);
    friend HurwitzInt operator-(const HurwitzInt& a, const HurwitzInt& b);
    friend HurwitzInt operator*(const HurwitzInt& a, const HurwitzInt& b);
    HurwitzInt operator-() const;
    HurwitzInt scaled(int64_t m) const;

    friend bool operator==(const HurwitzInt& a, const HurwitzInt& b) = default;
    friend auto operator<=>(const HurwitzInt& a, const HurwitzInt& b) = default;

private:
    HurwitzInt(int64_t A, int64_t B, int64_t C, int64_t D) : c_{A, B, C, D} {}
    std::array<int64_t, 4> c_{0, 0, 0, 0};
};

/// The 24 units of the order, in ascending lexicographic order of doubled coordinates.
const std::array<HurwitzInt, 24>& units();

struct RationalQuaternion {
    std::array<Rational, 4> c{};

    static RationalQuaternion from(const HurwitzInt& h);
    Rational norm_sq() const;
    friend RationalQuaternion operator+(const RationalQuaternion& a, const RationalQuaternion& b);
    friend RationalQuaternion operator-(const RationalQuaternion& a, const RationalQuaternion& b);
    friend RationalQuaternion operator*(const RationalQuaternion& a, const RationalQuaternion& b);
    friend bool operator==(const RationalQuaternion& a, const RationalQuaternion& b) = default;
};

struct RealQuaternion {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    static RealQuaternion from(const HurwitzInt& h);
    static RealQuaternion from(const RationalQuaternion& r);
    bool finite() const;
    double norm_sq() const { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]; }
    double norm() const;
    friend RealQuaternion operator+(const RealQuaternion& a, const RealQuaternion& b);
    friend RealQuaternion operator-(const RealQuaternion& a, const RealQuaternion& b);
    friend RealQuaternion operator*(const RealQuaternion& a, const RealQuaternion& b);
    friend RealQuaternion operator*(const RealQuaternion& a, const HurwitzInt& b);
};

struct HurwitzRational {
    HurwitzInt p;
    HurwitzInt q;

    HurwitzRational(const HurwitzInt& p_, const HurwitzInt& q_);
};

struct DivRem {
    HurwitzInt s;
    HurwitzInt r;
};

enum class Order { hurwitz, lipschitz };

struct FractionalPart {
    RealQuaternion frac;
    HurwitzInt lattice;
};

struct SeparationResult {
    Rational gap_sq;
    Rational bound;
    bool holds;
};

inline constexpr int64_t kEnumerationBound = 1'000'000;

// Doubled coordinates of a*b, i.e. (2a)(2b)/2, for integer 4-vectors.
std::array<i128, 4> doubled_product(const std::array<int64_t, 4>& A, const std::array<int64_t, 4>& B);

HurwitzInt nearest_hurwitz_exact(const std::array<i128, 4>& num, i128 den);
HurwitzInt nearest_hurwitz(const RationalQuaternion& x);
HurwitzInt nearest_hurwitz(const RealQuaternion& x);
/// Every Hurwitz integer whose distance to x is within tol of the minimum.
std::vector<HurwitzInt> nearest_candidates(const RealQuaternion& x, double tol = 1e-9);

DivRem div_rem_right(const HurwitzInt& p, const HurwitzInt& q);
DivRem div_rem_left(const HurwitzInt& p, const HurwitzInt& q);
bool right_divides(const HurwitzInt& d, const HurwitzInt& a);
bool left_divides(const HurwitzInt& d, const HurwitzInt& a);

HurwitzInt canonical_left_associate(const HurwitzInt& d);
HurwitzInt canonical_right_associate(const HurwitzInt& d);
HurwitzInt gcd_right(HurwitzInt a, HurwitzInt b);
HurwitzInt gcd_left(HurwitzInt a, HurwitzInt b);
bool coprime_right(const HurwitzInt& a, const HurwitzInt& b);

bool is_prime_u64(uint64_t n);
bool is_prime(const HurwitzInt& a);

std::vector<HurwitzInt> enumerate_by_norm(int64_t m, Order order, int64_t bound = kEnumerationBound);
int64_t jacobi_r4(int64_t m);

bool in_delta(const RealQuaternion& x);
FractionalPart fractional_part(const RealQuaternion& xi);
double delta_closure_max_norm();

RationalQuaternion to_rational(const HurwitzRational& x);
/// Doubled coordinates of p*conj(q); the value of p/q is this divided by 2*norm_sq(q).
std::array<int64_t, 4> scaled_value(const HurwitzRational& x);
bool in_delta_closure(const HurwitzRational& x);
SeparationResult separation_gap(const HurwitzRational& x, const HurwitzRational& y);

std::string format(const HurwitzInt& h);
std::string format(const HurwitzRational& x);
HurwitzInt parse_hurwitz(const std::string& text);
HurwitzRational parse_hurwitz_rational(const std::string& text);

}  // namespace hq
