#include "hurwitz/metrical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "lattice.hpp"
#include "montecarlo.hpp"

namespace hq {

// ------------------------------------------------------------ functions

ApproxFunction ApproxFunction::power(double v) {
    ApproxFunction f;
    f.kind = Kind::power;
    f.v = v;
    f.validate();
    return f;
}

ApproxFunction ApproxFunction::power_log(double v, double w) {
    ApproxFunction f;
    f.kind = Kind::power_log;
    f.v = v;
    f.w = w;
    f.validate();
    return f;
}

ApproxFunction ApproxFunction::table(std::vector<double> values, bool monotone) {
    ApproxFunction f;
    f.kind = Kind::table;
    f.values = std::move(values);
    f.marked_monotone = monotone;
    f.validate();
    return f;
}

void ApproxFunction::validate() const {
    switch (kind) {
        case Kind::power:
        case Kind::power_log:
            if (!std::isfinite(v) || v < 0.0) fail(Errc::invalid_argument, "psi exponent v must be finite and >= 0");
            if (!std::isfinite(w) || w < 0.0) fail(Errc::invalid_argument, "psi log exponent w must be finite and >= 0");
            break;
        case Kind::table:
            if (values.empty()) fail(Errc::invalid_argument, "psi table is empty");
            for (double x : values)
                if (!(x > 0.0) || !std::isfinite(x)) fail(Errc::invalid_argument, "psi table values must be positive");
            if (marked_monotone)
                for (size_t i = 1; i < values.size(); ++i)
                    if (values[i] > values[i - 1])
                        fail(Errc::invalid_argument, "psi table marked monotone but increases at m = " +
                                                         std::to_string(i + 1));
            break;
    }
}

long double ApproxFunction::at(int64_t m) const {
    if (m < 1) fail(Errc::invalid_argument, "psi is defined for m >= 1");
    const long double lm = std::log(static_cast<long double>(m));
    switch (kind) {
        case Kind::power:
            return std::exp(-static_cast<long double>(v) * lm);
        case Kind::power_log:
            return std::exp(-static_cast<long double>(v) * lm - static_cast<long double>(w) * std::log1p(lm));
        case Kind::table:
            if (static_cast<size_t>(m) > values.size()) fail(Errc::bound_exceeded, "psi table too short");
            return values[static_cast<size_t>(m - 1)];
    }
    return 0.0L;
}

double ApproxFunction::operator()(double x) const {
    if (!(x >= 1.0)) fail(Errc::invalid_argument, "psi is defined for x >= 1");
    return static_cast<double>(at(static_cast<int64_t>(std::floor(x))));
}

std::string ApproxFunction::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::power: os << "power(v=" << v << ")"; break;
        case Kind::power_log: os << "power_log(v=" << v << ",w=" << w << ")"; break;
        case Kind::table: os << "table(" << values.size() << (marked_monotone ? ",monotone)" : ")"); break;
    }
    return os.str();
}

DimensionFunction DimensionFunction::power(double s) {
    DimensionFunction f;
    f.kind = Kind::power;
    f.s = s;
    f.validate();
    f.ratio_nonincreasing = s <= 4.0;
    f.ratio_nondecreasing = s >= 4.0;
    return f;
}

DimensionFunction DimensionFunction::general(std::vector<double> xs, std::vector<double> fs) {
    DimensionFunction f;
    f.kind = Kind::general;
    f.xs = std::move(xs);
    f.fs = std::move(fs);
    f.validate();
    f.ratio_nonincreasing = f.ratio_nondecreasing = true;
    for (size_t i = 1; i < f.xs.size(); ++i) {
        double a = f.fs[i - 1] / std::pow(f.xs[i - 1], 4.0);
        double b = f.fs[i] / std::pow(f.xs[i], 4.0);
        if (b > a) f.ratio_nonincreasing = false;
        if (b < a) f.ratio_nondecreasing = false;
    }
    return f;
}

void DimensionFunction::validate() const {
    if (kind == Kind::power) {
        if (!(s > 0.0) || !std::isfinite(s)) fail(Errc::invalid_argument, "dimension exponent s must be positive");
        return;
    }
    if (xs.size() < 2 || xs.size() != fs.size())
        fail(Errc::invalid_argument, "dimension function needs matching samples (at least two)");
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(fs[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(fs[i]))
            fail(Errc::invalid_argument, "dimension function samples must be positive");
        if (i > 0 && (xs[i] <= xs[i - 1] || fs[i] <= fs[i - 1]))
            fail(Errc::invalid_argument, "dimension function must be increasing");
    }
}

long double DimensionFunction::operator()(long double x) const {
    if (x <= 0.0L) return 0.0L;
    if (kind == Kind::power) return std::pow(x, static_cast<long double>(s));
    if (x < xs.front()) return fs.front() * x / xs.front();
    if (x > xs.back()) fail(Errc::bound_exceeded, "dimension function evaluated beyond its samples");
    auto it = std::upper_bound(xs.begin(), xs.end(), static_cast<double>(x));
    size_t j = static_cast<size_t>(it - xs.begin());
    if (j >= xs.size()) return fs.back();
    size_t i = j - 1;
    long double t = (std::log(x) - std::log(static_cast<long double>(xs[i]))) /
                    (std::log(static_cast<long double>(xs[j])) - std::log(static_cast<long double>(xs[i])));
    return std::exp(std::log(static_cast<long double>(fs[i])) +
                    t * (std::log(static_cast<long double>(fs[j])) - std::log(static_cast<long double>(fs[i]))));
}

std::string DimensionFunction::describe() const {
    std::ostringstream os;
    if (kind == Kind::power)
        os << "power(s=" << s << ")";
    else
        os << "general(" << xs.size() << ")";
    return os.str();
}

// ------------------------------------------------------------ critical sums

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::converges: return "converges";
        case Verdict::diverges: return "diverges";
        case Verdict::undetermined: return "undetermined";
    }
    return "?";
}

std::string to_string(SumSeries::Kind k) {
    switch (k) {
        case SumSeries::Kind::lebesgue: return "lebesgue";
        case SumSeries::Kind::hausdorff: return "hausdorff";
        case SumSeries::Kind::simultaneous: return "simultaneous";
        case SumSeries::Kind::ubiquity: return "ubiquity";
    }
    return "?";
}

double SumSeries::at(int64_t M) const {
    if (M < 1 || M > M_max) fail(Errc::invalid_argument, "partial sum index out of range");
    return partial[static_cast<size_t>(M - 1)];
}

namespace {

// Term m^-a (1 + ln m)^-b converges iff a > 1, or a = 1 and b > 1.
Verdict power_log_verdict(double a, double b) {
    const double tol = 1e-12;
    if (a > 1.0 + tol) return Verdict::converges;
    if (a < 1.0 - tol) return Verdict::diverges;
    if (b > 1.0 + tol) return Verdict::converges;
    if (b < 1.0 - tol) return Verdict::diverges;
    return Verdict::diverges;  // m^-1 (ln m)^-1
}

}  // namespace

SumSeries critical_sum(SumSeries::Kind kind, const ApproxFunction& psi, const DimensionFunction* f, int64_t M_max) {
    psi.validate();
    if (M_max < 1) fail(Errc::invalid_argument, "M_max must be positive");
    if (M_max > 100'000'000) fail(Errc::bound_exceeded, "M_max too large");
    if (kind == SumSeries::Kind::ubiquity) fail(Errc::invalid_argument, "ubiquity sums come from compare_sums");
    if (kind == SumSeries::Kind::hausdorff) {
        if (f == nullptr) fail(Errc::invalid_argument, "hausdorff sum needs a dimension function");
        f->validate();
    }
    SumSeries out;
    out.kind = kind;
    out.M_max = M_max;
    out.partial.resize(static_cast<size_t>(M_max));
    KahanSum acc;
    for (int64_t m = 1; m <= M_max; ++m) {
        const long double p = psi.at(m);
        const long double lm = std::log(static_cast<long double>(m));
        long double term = 0.0L;
        switch (kind) {
            case SumSeries::Kind::lebesgue: term = std::exp(7.0L * lm) * p * p * p * p; break;
            case SumSeries::Kind::hausdorff: term = std::exp(7.0L * lm) * (*f)(p); break;
            case SumSeries::Kind::simultaneous: term = std::exp(4.0L * lm) * p * p * p * p; break;
            case SumSeries::Kind::ubiquity: break;
        }
        if (!(term > 0.0L) || !std::isfinite(static_cast<double>(term)))
            fail(Errc::invalid_argument, "non-positive or non-finite term at m = " + std::to_string(m));
        acc.add(term);
        out.partial[static_cast<size_t>(m - 1)] = static_cast<double>(acc.sum);
    }
    out.total = acc.sum;

    // Exponents a, b of the term m^-a (1 + ln m)^-b.
    std::optional<std::pair<double, double>> ab;
    if (psi.is_power_law()) {
        switch (kind) {
            case SumSeries::Kind::lebesgue: ab = {{4.0 * psi.v - 7.0, 4.0 * psi.w}}; break;
            case SumSeries::Kind::simultaneous: ab = {{4.0 * psi.v - 4.0, 4.0 * psi.w}}; break;
            case SumSeries::Kind::hausdorff:
                if (f->kind == DimensionFunction::Kind::power) ab = {{psi.v * f->s - 7.0, psi.w * f->s}};
                break;
            case SumSeries::Kind::ubiquity: break;
        }
    }
    if (ab) {
        out.verdict = power_log_verdict(ab->first, ab->second);
        out.verdict_basis = "analytic";
        const double a = ab->first;
        if (psi.kind == ApproxFunction::Kind::power && a > 1.0) {
            // Euler-Maclaurin for sum_{m > M} m^-a.
            const long double M = static_cast<long double>(M_max);
            const long double la = a;
            long double tail = std::pow(M, 1.0L - la) / (la - 1.0L) - std::pow(M, -la) / 2.0L +
                               la * std::pow(M, -la - 1.0L) / 12.0L;
            out.tail_estimate = static_cast<double>(tail);
            out.tail_bound = static_cast<double>(la * (la + 1.0L) * (la + 2.0L) * std::pow(M, -la - 3.0L) / 720.0L);
        }
    } else {
        out.verdict = Verdict::undetermined;
        out.verdict_basis = "undetermined at scale M_max";
    }
    return out;
}

// ------------------------------------------------------------ eta schedule

int64_t EtaSchedule::block_index(int64_t m) const {
    if (m < 1) fail(Errc::invalid_argument, "eta is defined for m >= 1");
    if (m > M_max) fail(Errc::bound_exceeded, "eta evaluated beyond the schedule range");
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), m);
    return static_cast<int64_t>(it - breakpoints.begin());
}

double EtaSchedule::eta(int64_t m) const { return 1.0 / static_cast<double>(block_index(m)); }

double EtaSchedule::rho(int64_t m) const {
    const double md = static_cast<double>(m);
    return 2.0 / (std::pow(eta(m), 0.25) * md * md);
}

double EtaSchedule::varpi(int64_t m) const { return std::pow(eta(m), 0.25) * static_cast<double>(m); }

EtaSchedule build_eta(const std::function<long double(int64_t)>& F, int64_t M_max) {
    if (M_max < 2) fail(Errc::invalid_argument, "M_max must be at least 2");
    if (M_max > 100'000'000) fail(Errc::bound_exceeded, "M_max too large");
    EtaSchedule s;
    s.M_max = M_max;
    s.breakpoints.push_back(1);
    int64_t start = 1;
    KahanSum block;
    for (int64_t m = 1; m < M_max; ++m) {
        long double x = F(m);
        if (!(x > 0.0L)) fail(Errc::invalid_argument, "F must be positive");
        block.add(x);
        const int64_t next = m + 1;
        if (next >= 2 * start && block.sum > 1.0L) {
            s.breakpoints.push_back(next);
            s.block_sums.push_back(static_cast<double>(block.sum));
            start = next;
            block = KahanSum{};
        }
    }
    if (s.complete_blocks() < 2)
        fail(Errc::invalid_argument, "cannot certify divergence: fewer than 2 blocks up to M_max");
    return s;
}

InvariantReport check_eta_invariants(const EtaSchedule& s, const std::function<long double(int64_t)>& F) {
    InvariantReport rep;
    auto violate = [&](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    if (s.breakpoints.empty() || s.breakpoints[0] != 1) violate("m_1 != 1");
    for (size_t i = 1; i < s.breakpoints.size(); ++i) {
        if (s.breakpoints[i] < 2 * s.breakpoints[i - 1])
            violate("m_" + std::to_string(i + 1) + " = " + std::to_string(s.breakpoints[i]) + " < 2 m_" +
                    std::to_string(i));
        KahanSum block;
        for (int64_t m = s.breakpoints[i - 1]; m < s.breakpoints[i]; ++m) block.add(F(m));
        if (!(block.sum > 1.0L)) violate("block " + std::to_string(i) + " sum <= 1");
    }
    for (int64_t r = 0; (int64_t{2} << r) <= s.M_max; ++r) {
        const int64_t a = s.block_index(int64_t{1} << r);
        const int64_t b = s.block_index(int64_t{2} << r);
        if (b < a) violate("eta increases at 2^" + std::to_string(r + 1));
        if (b > 2 * a) violate("eta(2^" + std::to_string(r) + ") > 2 eta(2^" + std::to_string(r + 1) + ")");
    }
    return rep;
}

// ------------------------------------------------------------ rho properties

namespace {

using boost::multiprecision::cpp_int;

// Is i1 / m1^8 <= c * i0 / m0^8 ?  (rho(m1)^4 <= c rho(m0)^4)
bool rho4_le(int64_t i1, int64_t m1, int64_t c, int64_t i0, int64_t m0) {
    const long double lhs = std::log(static_cast<long double>(i1)) - 8.0L * std::log(static_cast<long double>(m1));
    const long double rhs = std::log(static_cast<long double>(c) * i0) - 8.0L * std::log(static_cast<long double>(m0));
    if (lhs < rhs - 1e-9L) return true;
    if (lhs > rhs + 1e-9L) return false;
    cpp_int a = m0;
    cpp_int b = m1;
    a = a * a;
    a = a * a;
    a = a * a;
    b = b * b;
    b = b * b;
    b = b * b;
    return cpp_int(i1) * a <= cpp_int(c) * cpp_int(i0) * b;
}

}  // namespace

RhoReport rho_properties(const EtaSchedule& s, int R_max) {
    if (R_max < 1 || R_max > 40) fail(Errc::invalid_argument, "R_max must be in [1, 40]");
    if ((int64_t{1} << R_max) > s.M_max) fail(Errc::invalid_argument, "2^R_max exceeds the schedule range");
    RhoReport rep;
    rep.R_max = R_max;
    std::vector<int64_t> idx(static_cast<size_t>(R_max) + 1);
    for (int r = 0; r <= R_max; ++r) idx[static_cast<size_t>(r)] = s.block_index(int64_t{1} << r);

    // 1. rho^4(2^{r+1}) = 16 i' / 2^{8r+8} < 16 i / 2^{8r}  <=>  i' < 256 i
    for (int r = 0; r < R_max && rep.decreasing.pass; ++r)
        if (!(idx[static_cast<size_t>(r) + 1] < 256 * idx[static_cast<size_t>(r)])) {
            rep.decreasing.pass = false;
            rep.decreasing.witness = "rho(2^" + std::to_string(r + 1) + ") >= rho(2^" + std::to_string(r) + ")";
        }

    // 2. rho(m)^-1 m^-2 = eta^{1/4} / 2, and eta^{1/4}/2 falls along 2^r
    for (int r = 0; r <= R_max && rep.inverse_square.pass; ++r) {
        const int64_t m = int64_t{1} << r;
        const double md = static_cast<double>(m);
        const double lhs = 1.0 / (s.rho(m) * md * md);
        const double rhs = std::pow(s.eta(m), 0.25) / 2.0;
        if (std::fabs(lhs - rhs) > 1e-12 * rhs) {
            rep.inverse_square.pass = false;
            rep.inverse_square.witness = "identity off at m = " + std::to_string(m);
        }
        if (r > 0 && idx[static_cast<size_t>(r)] < idx[static_cast<size_t>(r) - 1]) {
            rep.inverse_square.pass = false;
            rep.inverse_square.witness = "eta increases at 2^" + std::to_string(r);
        }
    }
    if (rep.inverse_square.pass && !(idx.back() > idx.front())) {
        rep.inverse_square.pass = false;
        rep.inverse_square.witness = "eta constant on [1, 2^R_max]";
    }

    // 3. max_{m <= m' <= L} rho(m') <= 2^{1/4} rho(m). Inside a block rho falls, so the suffix maximum
    // is rho(m) itself or rho at a later block start.
    const int64_t L = int64_t{1} << R_max;
    std::vector<int64_t> starts;
    for (int64_t b : s.breakpoints)
        if (b <= L) starts.push_back(b);
    // suffix argmax over block starts
    std::vector<size_t> best(starts.size());
    for (size_t k = starts.size(); k-- > 0;) {
        best[k] = k;
        if (k + 1 < starts.size()) {
            size_t j = best[k + 1];
            const int64_t ik = static_cast<int64_t>(k) + 1;
            const int64_t ij = static_cast<int64_t>(j) + 1;
            if (!rho4_le(ij, starts[j], 1, ik, starts[k])) best[k] = j;
        }
    }
    for (int64_t m = 1; m <= L && rep.quasi_monotone.pass; ++m) {
        const int64_t i = s.block_index(m);
        // first block start strictly after m
        size_t k = static_cast<size_t>(i);  // starts[i] is m_{i+1}
        if (k >= starts.size()) continue;
        const size_t j = best[k];
        const int64_t ij = static_cast<int64_t>(j) + 1;
        if (!rho4_le(ij, starts[j], 2, i, m)) {
            rep.quasi_monotone.pass = false;
            rep.quasi_monotone.witness = "rho(" + std::to_string(starts[j]) + ") > 2^{1/4} rho(" + std::to_string(m) + ")";
        }
    }

    // 4. ratio rho(2^{r+1}) / rho(2^r) = (i'/i)^{1/4} / 4
    for (int r = 0; r < R_max; ++r) {
        const int64_t i0 = idx[static_cast<size_t>(r)];
        const int64_t i1 = idx[static_cast<size_t>(r) + 1];
        if (i1 == i0) ++rep.band_equalities;
        if (rep.dyadic_band.pass && (i1 < i0 || i1 > 2 * i0)) {
            rep.dyadic_band.pass = false;
            rep.dyadic_band.witness = "band violated at r = " + std::to_string(r);
        }
    }
    return rep;
}

// ------------------------------------------------------------ comparison

ComparisonReport compare_sums(const ApproxFunction& psi, const DimensionFunction& f, const EtaSchedule& s,
                              int64_t M_max, int64_t kappa) {
    psi.validate();
    f.validate();
    if (kappa < 2) fail(Errc::invalid_argument, "kappa must be at least 2");
    if (M_max < 1 || M_max > s.M_max) fail(Errc::invalid_argument, "M_max outside the schedule range");
    auto F = [&](int64_t m) { return f(psi.at(m)) * std::exp(7.0L * std::log(static_cast<long double>(m))); };
    for (size_t i = 0; i + 1 < s.breakpoints.size(); ++i) {
        KahanSum block;
        for (int64_t m = s.breakpoints[i]; m < s.breakpoints[i + 1]; ++m) block.add(F(m));
        const long double stored = s.block_sums[i];
        if (!(block.sum > 1.0L) || std::fabs(static_cast<double>(block.sum - stored)) > 1e-9 * static_cast<double>(stored))
            fail(Errc::invalid_argument, "schedule was not built from f(psi(m)) m^7");
    }

    ComparisonReport rep;
    rep.standard.kind = SumSeries::Kind::hausdorff;
    rep.dyadic.kind = SumSeries::Kind::ubiquity;
    for (auto* ser : {&rep.standard, &rep.dyadic}) {
        ser->M_max = M_max;
        ser->partial.resize(static_cast<size_t>(M_max));
        ser->verdict = Verdict::undetermined;
        ser->verdict_basis = "undetermined at scale M_max";
    }
    KahanSum st;
    KahanSum dy;
    int64_t next_power = 1;
    for (int64_t m = 1; m <= M_max; ++m) {
        const long double eta = 1.0L / static_cast<long double>(s.block_index(m));
        const long double Fm = F(m);
        const long double term = Fm * eta;
        st.add(term);
        // rho^4 = 16 / (eta m^8)
        const long double lm = std::log(static_cast<long double>(m));
        const long double rho4 = 16.0L / (eta * std::exp(8.0L * lm));
        const long double fm = f(psi.at(m));
        const long double alt = 16.0L * fm / (static_cast<long double>(m) * rho4);
        rep.identity_max_rel_error =
            std::max(rep.identity_max_rel_error, static_cast<double>(std::fabs(alt - term) / term));
        if (m == next_power) {
            dy.add(fm / rho4);
            next_power = (next_power > M_max / kappa) ? M_max + 1 : next_power * kappa;
        }
        rep.standard.partial[static_cast<size_t>(m - 1)] = static_cast<double>(st.sum);
        rep.dyadic.partial[static_cast<size_t>(m - 1)] = static_cast<double>(dy.sum);
    }
    rep.standard.total = st.sum;
    rep.dyadic.total = dy.sum;

    rep.ratio_min = std::numeric_limits<double>::infinity();
    rep.ratio_max = 0.0;
    for (size_t i = 1; i < s.breakpoints.size(); ++i) {
        const int64_t end = s.breakpoints[i] - 1;
        if (end > M_max) break;
        rep.block_ends.push_back(end);
        const double a = rep.standard.at(end);
        const double b = rep.dyadic.at(end);
        if (!rep.standard_at_blocks.empty() &&
            !(a > rep.standard_at_blocks.back() && b > rep.dyadic_at_blocks.back()))
            rep.both_increase_at_blocks = false;
        rep.standard_at_blocks.push_back(a);
        rep.dyadic_at_blocks.push_back(b);
        rep.ratio_min = std::min(rep.ratio_min, a / b);
        rep.ratio_max = std::max(rep.ratio_max, a / b);
    }
    if (rep.block_ends.empty()) rep.ratio_min = 0.0;
    return rep;
}

// ------------------------------------------------------------ coverage

namespace {

int64_t isqrt(int64_t n) {
    auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

struct Shell {
    double qlo;
    double qhi;
    double err_max;
};

// Dyadic shells of |q| covering [N_min, Q_max], each with the largest admissible |xi q - p|.
std::vector<Shell> shells_for(const std::function<double(int64_t)>& radius_times_q_bound, int64_t N_min,
                              int64_t Q_max) {
    std::vector<Shell> out;
    double lo = static_cast<double>(N_min);
    while (lo <= static_cast<double>(Q_max)) {
        double hi = std::min(static_cast<double>(Q_max), 2.0 * lo);
        double err = 0.0;
        for (auto m = static_cast<int64_t>(std::floor(lo)); m <= static_cast<int64_t>(std::floor(hi)); ++m)
            err = std::max(err, radius_times_q_bound(m) * std::min(static_cast<double>(m + 1), hi));
        out.push_back({lo, hi, err});
        if (hi >= static_cast<double>(Q_max)) break;
        lo = hi;
    }
    return out;
}

}  // namespace

bool psi_close(const RealQuaternion& xi, const ApproxFunction& psi, int64_t N_min, int64_t Q_max) {
    auto shells = shells_for([&](int64_t m) { return static_cast<double>(psi.at(m)); }, N_min, Q_max);
    const int64_t nlo = N_min * N_min;
    const int64_t nhi = Q_max * Q_max;
    for (const auto& sh : shells) {
        bool hit = detail::search_pairs(xi, sh.qhi, sh.err_max, [&](const HurwitzInt& q, const HurwitzInt& p) {
            const int64_t n = q.norm_sq();
            if (n < nlo || n > nhi) return false;
            const double nq = std::sqrt(static_cast<double>(n));
            const double rad = static_cast<double>(psi.at(isqrt(n)));
            if (!((xi * q - RealQuaternion::from(p)).norm() < rad * nq)) return false;
            return in_delta_closure(HurwitzRational(p, q));
        });
        if (hit) return true;
    }
    return false;
}

CoverageReport measure_estimate(const ApproxFunction& psi, int64_t N_min, int64_t Q_max, int64_t samples,
                                uint64_t seed, int workers) {
    psi.validate();
    if (N_min < 1 || Q_max < N_min) fail(Errc::invalid_argument, "need 1 <= N_min <= Q_max");
    if (Q_max > 100'000) fail(Errc::bound_exceeded, "Q_max too large");
    if (samples <= 0) fail(Errc::invalid_argument, "samples must be positive");
    if (psi.kind == ApproxFunction::Kind::table && static_cast<size_t>(Q_max) > psi.values.size())
        fail(Errc::invalid_argument, "psi table shorter than Q_max");
    CoverageReport rep;
    rep.N_min = N_min;
    rep.Q_max = Q_max;
    rep.samples = samples;
    rep.seed = seed;
    auto totals = detail::run_shards(samples, seed, rep.shards, workers, [&](CounterRng& rng) -> unsigned {
        return psi_close(sample_delta(rng), psi, N_min, Q_max) ? 1u : 0u;
    });
    rep.hits = totals[0];
    const double ns = static_cast<double>(samples);
    rep.fraction = static_cast<double>(rep.hits) / ns;
    rep.std_error = std::sqrt(rep.fraction * (1.0 - rep.fraction) / ns);
    return rep;
}

// ------------------------------------------------------------ exponent scan

std::vector<double> default_s_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 80; ++k) g.push_back(0.05 * k);
    return g;
}

ExponentScan cover_sum_exponent(double v, const std::vector<double>& s_grid, const std::vector<int64_t>& N_grid,
                                int64_t M_max, TailRule rule) {
    ExponentScan scan;
    scan.v = v;
    scan.rule = rule == TailRule::critical_profile ? "critical_profile" : "tenfold";
    if (!std::isfinite(v)) fail(Errc::invalid_argument, "v must be finite");
    if (v <= 2.0) {
        scan.saturated = true;
        scan.s_star = 4.0;
        scan.analytic = 4.0;
        return scan;
    }
    scan.analytic = std::min(4.0, 8.0 / v);
    if (s_grid.empty()) fail(Errc::invalid_argument, "s_grid is empty");
    if (N_grid.size() < 2) fail(Errc::invalid_argument, "N_grid needs two values");
    if (!std::is_sorted(s_grid.begin(), s_grid.end())) fail(Errc::invalid_argument, "s_grid must be ascending");
    const int64_t n_lo = N_grid.front();
    const int64_t n_hi = N_grid.back();
    if (n_lo < 1 || n_hi <= n_lo || M_max <= n_hi) fail(Errc::invalid_argument, "need 1 <= N_lo < N_hi < M_max");
    if (M_max > 10'000'000) fail(Errc::bound_exceeded, "M_max too large");

    const long double crit = std::log(static_cast<long double>(M_max) / n_lo) /
                             std::log(static_cast<long double>(M_max) / n_hi);
    for (double s : s_grid) {
        if (!(s > 0.0)) fail(Errc::invalid_argument, "s values must be positive");
        // T(N, s) = sum_{m=N}^{M} m^7 (2 m^-v)^s, accumulated from the top so small terms come first.
        KahanSum hi_part;
        KahanSum all;
        const long double c = static_cast<long double>(s) * std::log(2.0L);
        const long double e = 7.0L - static_cast<long double>(v) * s;
        for (int64_t m = M_max; m >= n_lo; --m) {
            const long double term = std::exp(c + e * std::log(static_cast<long double>(m)));
            all.add(term);
            if (m == n_hi) hi_part = all;
        }
        const long double t_lo = all.sum;
        const long double t_hi = hi_part.sum;
        scan.rows.push_back({s, n_lo, static_cast<double>(t_lo)});
        scan.rows.push_back({s, n_hi, static_cast<double>(t_hi)});
        const long double ratio = t_lo / t_hi;
        const bool super = rule == TailRule::critical_profile ? ratio > crit : ratio >= 10.0L;
        scan.s_values.push_back(s);
        scan.supercritical.push_back(super);
    }
    // smallest grid value from which every larger value is supercritical
    scan.s_star = std::numeric_limits<double>::quiet_NaN();
    for (size_t k = scan.s_values.size(); k-- > 0;) {
        if (!scan.supercritical[k]) break;
        scan.s_star = scan.s_values[k];
    }
    return scan;
}

Ball4 ball_rescale(const RealQuaternion& center, double r, const DimensionFunction& f) {
    f.validate();
    if (!(r > 0.0) || !std::isfinite(r)) fail(Errc::invalid_argument, "radius must be positive");
    return Ball4{center, static_cast<double>(std::pow(f(r), 0.25L))};
}

// ------------------------------------------------------------ simultaneous

SimultaneousApproximant simultaneous_dirichlet(const std::array<double, 4>& alpha, int64_t N) {
    if (N < 2) fail(Errc::invalid_argument, "N must be at least 2");
    if (N > 100'000'000) fail(Errc::bound_exceeded, "N too large");
    for (double a : alpha)
        if (!std::isfinite(a)) fail(Errc::invalid_argument, "alpha must be finite");
    SimultaneousApproximant best;
    double best_key = std::numeric_limits<double>::infinity();
    for (int64_t q = 1; q <= N; ++q) {
        const double qd = static_cast<double>(q);
        std::array<int64_t, 4> p{};
        double err = 0.0;
        for (int t = 0; t < 4; ++t) {
            p[t] = std::llround(qd * alpha[t]);
            err = std::max(err, std::fabs(alpha[t] - static_cast<double>(p[t]) / qd));
        }
        if (qd * err < best_key) {
            best_key = qd * err;
            best.p = p;
            best.q = q;
            best.err = err;
        }
    }
    best.bound = 1.0 / (static_cast<double>(best.q) * std::pow(static_cast<double>(N), 0.25));
    best.holds = best.err < best.bound;
    return best;
}

EmbeddingCheck embed_approximant(const RealQuaternion& xi, const HurwitzInt& p, const HurwitzInt& q, double v) {
    if (q.is_zero()) fail(Errc::invalid_argument, "denominator must be nonzero");
    EmbeddingCheck e;
    e.p = p;
    e.q = q;
    e.norm = q.norm_sq();
    auto X = doubled_product(p.d(), q.conj().d());
    const bool integral = ((X[0] | X[1] | X[2] | X[3]) & 1) == 0;
    e.denominator = integral ? e.norm : 2 * e.norm;
    for (int t = 0; t < 4; ++t) e.numerators[t] = narrow(integral ? X[t] / 2 : X[t]);
    const RationalQuaternion exact = to_rational(HurwitzRational(p, q));
    e.identity_exact = true;
    for (int t = 0; t < 4; ++t)
        if (!(exact.c[t] == Rational(e.numerators[t], e.denominator))) e.identity_exact = false;
    e.quaternion_err = (xi - RealQuaternion::from(exact)).norm();
    for (int t = 0; t < 4; ++t)
        e.simultaneous_err =
            std::max(e.simultaneous_err, std::fabs(xi.c[t] - static_cast<double>(e.numerators[t]) /
                                                                 static_cast<double>(e.denominator)));
    const double n = static_cast<double>(e.norm);
    e.exponent_at_norm = e.norm > 1 ? -std::log(e.simultaneous_err) / std::log(n) : std::numeric_limits<double>::infinity();
    e.holds = e.simultaneous_err < std::pow(n, -v / 2.0);
    return e;
}

std::vector<std::pair<HurwitzInt, HurwitzInt>> power_approximants(const RealQuaternion& xi, double v, int64_t Q_max) {
    if (!(v > 0.0)) fail(Errc::invalid_argument, "v must be positive");
    if (Q_max < 1 || Q_max > 10'000) fail(Errc::invalid_argument, "Q_max must be in [1, 10000]");
    // |xi - p q^-1| < |q|^-v  <=>  |xi q - p| < |q|^{1-v}
    auto shells = shells_for([&](int64_t m) { return std::pow(static_cast<double>(m), -v); }, 1, Q_max);
    std::set<std::pair<HurwitzInt, HurwitzInt>> found;
    for (const auto& sh : shells) {
        const double err_max = std::max(sh.err_max, std::pow(sh.qlo, 1.0 - v));
        detail::search_pairs(xi, sh.qhi, err_max, [&](const HurwitzInt& q, const HurwitzInt& p) {
            const int64_t n = q.norm_sq();
            if (n > Q_max * Q_max) return false;
            const double nq = std::sqrt(static_cast<double>(n));
            if ((xi * q - RealQuaternion::from(p)).norm() < std::pow(nq, 1.0 - v)) found.insert({p, q});
            return false;
        });
    }
    return {found.begin(), found.end()};
}

double domain_hausdorff_measure() { return 16.0 / (M_PI * M_PI); }

}  // namespace hq
