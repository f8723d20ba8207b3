#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hurwitz/core.hpp"
#include "hurwitz/resonant.hpp"

namespace hq {

/// Psi(x) = Psi(floor(x)) on x >= 1.
struct ApproxFunction {
    enum class Kind { power, power_log, table };
    Kind kind = Kind::power;
    double v = 2.0;
    double w = 0.0;                 // power_log: m^-v (1 + ln m)^-w
    std::vector<double> values;     // table: values[m - 1]
    bool marked_monotone = false;   // table only

    static ApproxFunction power(double v);
    static ApproxFunction power_log(double v, double w);
    static ApproxFunction table(std::vector<double> values, bool monotone);

    long double at(int64_t m) const;
    double operator()(double x) const;
    void validate() const;
    bool is_power_law() const { return kind != Kind::table; }
    std::string describe() const;
};

struct DimensionFunction {
    enum class Kind { power, general };
    Kind kind = Kind::power;
    double s = 4.0;
    std::vector<double> xs;   // general: increasing sample abscissae, linear interpolation in log-log
    std::vector<double> fs;
    bool ratio_nonincreasing = false;  // f(x)/x^4 on the samples
    bool ratio_nondecreasing = false;

    static DimensionFunction power(double s);
    static DimensionFunction general(std::vector<double> xs, std::vector<double> fs);

    long double operator()(long double x) const;
    void validate() const;
    std::string describe() const;
};

enum class Verdict { converges, diverges, undetermined };
std::string to_string(Verdict v);

struct SumSeries {
    enum class Kind { lebesgue, hausdorff, simultaneous, ubiquity };
    Kind kind = Kind::lebesgue;
    int64_t M_max = 0;
    std::vector<double> partial;  // partial[M - 1] = S(M)
    long double total = 0.0L;
    Verdict verdict = Verdict::undetermined;
    std::string verdict_basis;    // "analytic" or "undetermined at scale M_max"
    std::optional<double> tail_estimate;  // Euler-Maclaurin tail beyond M_max
    std::optional<double> tail_bound;     // |tail - estimate| bound

    double at(int64_t M) const;
};
std::string to_string(SumSeries::Kind k);

/// Partial sums of Psi(m)^4 m^7 (lebesgue), m^7 f(Psi(m)) (hausdorff) or m^4 Psi(m)^4 (simultaneous).
SumSeries critical_sum(SumSeries::Kind kind, const ApproxFunction& psi, const DimensionFunction* f, int64_t M_max);

/// Kahan summation in long double.
struct KahanSum {
    long double sum = 0.0L;
    long double comp = 0.0L;
    void add(long double x) {
        long double y = x - comp;
        long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct EtaSchedule {
    std::vector<int64_t> breakpoints;   // m_1 = 1 < m_2 < ...; the last block may be incomplete
    std::vector<double> block_sums;     // sum of F over each complete block
    int64_t M_max = 0;

    int64_t block_index(int64_t m) const;  // i with m in [m_i, m_{i+1})
    double eta(int64_t m) const;           // 1 / i
    double rho(int64_t m) const;           // 2 / (eta^{1/4} m^2)
    double varpi(int64_t m) const;         // eta^{1/4} m
    int complete_blocks() const { return static_cast<int>(block_sums.size()); }
};

struct InvariantReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Greedy breakpoints: smallest m_{i+1} >= 2 m_i whose block sum exceeds 1.
EtaSchedule build_eta(const std::function<long double(int64_t)>& F, int64_t M_max);
/// Rechecks doubling, block sums > 1, and eta(2^r) <= 2 eta(2^{r+1}).
InvariantReport check_eta_invariants(const EtaSchedule& s, const std::function<long double(int64_t)>& F);

struct RhoProperty {
    bool pass = true;
    std::string witness;
};

struct RhoReport {
    int R_max = 0;
    RhoProperty decreasing;      // rho(2^{r+1}) < rho(2^r)
    RhoProperty inverse_square;  // rho(m)^-1 m^-2 = eta^{1/4}/2, non-increasing along 2^r
    RhoProperty quasi_monotone;  // rho(m') <= 2^{1/4} rho(m) for m <= m' <= 2^R_max
    RhoProperty dyadic_band;     // rho(2^r)/4 <= rho(2^{r+1}) <= 2^{1/4} rho(2^r)/4
    int band_equalities = 0;     // r with rho(2^{r+1}) exactly rho(2^r)/4
    bool all_pass() const {
        return decreasing.pass && inverse_square.pass && quasi_monotone.pass && dyadic_band.pass;
    }
};

/// Exact checks on fourth powers rho^4 = 16 i / m^8. Requires 2^R_max <= M_max.
RhoReport rho_properties(const EtaSchedule& s, int R_max);

struct ComparisonReport {
    SumSeries standard;   // sum f(Psi(m)) m^7 eta(m)
    SumSeries dyadic;     // sum_r f(Psi(kappa^r)) / rho(kappa^r)^4
    std::vector<int64_t> block_ends;
    std::vector<double> standard_at_blocks;
    std::vector<double> dyadic_at_blocks;
    bool both_increase_at_blocks = true;
    double ratio_min = 0.0;   // standard / dyadic at block ends
    double ratio_max = 0.0;
    double identity_max_rel_error = 0.0;  // f m^7 eta vs 16 (1/m) f / rho^4, termwise
};

ComparisonReport compare_sums(const ApproxFunction& psi, const DimensionFunction& f, const EtaSchedule& s,
                              int64_t M_max, int64_t kappa = 2);

struct CoverageReport {
    int64_t N_min = 0;
    int64_t Q_max = 0;
    double fraction = 0.0;
    double std_error = 0.0;
    int64_t samples = 0;
    int64_t hits = 0;
    uint64_t seed = 0;
    int shards = kMonteCarloShards;
};

/// Share of the domain within Psi(|q|) of a resonant point with N_min <= |q| <= Q_max.
CoverageReport measure_estimate(const ApproxFunction& psi, int64_t N_min, int64_t Q_max, int64_t samples,
                                uint64_t seed, int workers = 1);
/// Single-point test behind measure_estimate.
bool psi_close(const RealQuaternion& xi, const ApproxFunction& psi, int64_t N_min, int64_t Q_max);

struct ExponentRow {
    double s = 0.0;
    int64_t N = 0;
    double tail = 0.0;
};

struct ExponentScan {
    double v = 0.0;
    bool saturated = false;         // v <= 2: dimension 4, nothing estimated
    double s_star = 4.0;
    double analytic = 4.0;          // min(4, 8/v)
    std::string rule;
    std::vector<ExponentRow> rows;
    std::vector<double> s_values;
    std::vector<bool> supercritical;
};

enum class TailRule { critical_profile, tenfold };

/// Natural-cover tails T(N, s) = sum_{m=N}^{M_max} m^7 (2 m^-v)^s. With the critical-profile rule s is
/// supercritical when T(N_lo)/T(N_hi) exceeds ln(M/N_lo)/ln(M/N_hi), the ratio of the borderline tail m^-1.
ExponentScan cover_sum_exponent(double v, const std::vector<double>& s_grid, const std::vector<int64_t>& N_grid,
                                int64_t M_max, TailRule rule = TailRule::critical_profile);
std::vector<double> default_s_grid();

Ball4 ball_rescale(const RealQuaternion& center, double r, const DimensionFunction& f);

struct SimultaneousApproximant {
    std::array<int64_t, 4> p{};
    int64_t q = 0;
    double err = 0.0;     // max_m |alpha_m - p_m / q|
    double bound = 0.0;   // 1 / (q N^{1/4})
    bool holds = false;
};

SimultaneousApproximant simultaneous_dirichlet(const std::array<double, 4>& alpha, int64_t N);

struct EmbeddingCheck {
    HurwitzInt p;
    HurwitzInt q;
    int64_t norm = 0;            // n = norm_sq(q)
    int64_t denominator = 0;     // n, or 2n when p conj(q) has half-integer coordinates
    std::array<int64_t, 4> numerators{};
    bool identity_exact = false; // p q^-1 == numerators / denominator as rationals
    double quaternion_err = 0.0;
    double simultaneous_err = 0.0;
    double exponent_at_norm = 0.0;  // -ln(simultaneous_err) / ln(n)
    bool holds = false;             // simultaneous_err < n^{-v/2}
};

EmbeddingCheck embed_approximant(const RealQuaternion& xi, const HurwitzInt& p, const HurwitzInt& q, double v);
/// Pairs with 1 <= |q| <= Q_max and |xi - p q^-1| < |q|^-v.
std::vector<std::pair<HurwitzInt, HurwitzInt>> power_approximants(const RealQuaternion& xi, double v, int64_t Q_max);

/// 2^4 |B(0,1)|^-1 |closed domain| = 16 / pi^2.
double domain_hausdorff_measure();

}  // namespace hq
