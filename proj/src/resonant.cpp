#include "hurwitz/resonant.hpp"

#include <algorithm>
#include <cmath>

#include "hurwitz/approx.hpp"
#include "lattice.hpp"
#include "montecarlo.hpp"

namespace hq {

namespace {

using detail::Vec4;

// Doubled coordinates of p * conj(q) for p running over the generators of H.
std::vector<Vec4> image_generators(const HurwitzInt& q) {
    static const std::array<Vec4, 4> gens = {{{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {1, 1, 1, 1}}};
    std::vector<Vec4> out;
    for (const auto& g : gens) {
        auto X = doubled_product(g, q.conj().d());
        out.push_back({narrow(X[0]), narrow(X[1]), narrow(X[2]), narrow(X[3])});
    }
    return out;
}

detail::BoxWalk best_walk(const std::vector<Vec4>& gens, const std::vector<int>& free_cols, const std::array<int, 4>& head,
                          size_t head_len, const Vec4& lo, const Vec4& hi) {
    std::vector<int> perm = free_cols;
    std::sort(perm.begin(), perm.end());
    detail::BoxWalk best;
    double best_cost = -1.0;
    do {
        std::array<int, 4> order{};
        size_t k = 0;
        for (size_t h = 0; h < head_len; ++h) order[k++] = head[h];
        for (int c : perm) order[k++] = c;
        auto rows = detail::echelon(gens, order);
        detail::BoxWalk w;
        w.basis.assign(rows.begin() + static_cast<long>(head_len), rows.end());
        w.dims = static_cast<int>(perm.size());
        for (size_t i = 0; i < perm.size(); ++i) w.order[i] = perm[i];
        w.lo = lo;
        w.hi = hi;
        double cost = w.prefix_cost();
        if (best_cost < 0.0 || cost < best_cost) {
            best_cost = cost;
            best = w;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

HurwitzInt right_unit_class(const HurwitzInt& q) { return canonical_right_associate(q); }

ResonantLattice enumerate_resonant(const HurwitzInt& q, int64_t bound) {
    if (q.is_zero()) fail(Errc::invalid_argument, "resonant set needs a nonzero denominator");
    const int64_t n = q.norm_sq();
    if (n > bound) fail(Errc::bound_exceeded, "denominator norm exceeds the listing bound");
    const Vec4 lo{0, 0, 0, 0};
    const Vec4 hi{2 * n, 2 * n, 2 * n, n};
    auto walk = best_walk(image_generators(q), {0, 1, 2, 3}, {}, 0, lo, hi);
    ResonantLattice out;
    out.q = q;
    const i128 den = 2 * static_cast<i128>(n);
    walk.visit({0, 0, 0, 0}, [&](const Vec4& X) {
        // p = y q with y = X / (2n); doubled(p) = X * Q / (2n)
        auto raw = doubled_product(X, q.d());
        std::array<int64_t, 4> P{};
        for (int t = 0; t < 4; ++t) {
            i128 twice = raw[t] * 2;
            if (twice % den != 0) fail(Errc::internal, "resonant point is not a Hurwitz multiple");
            P[t] = narrow(twice / den);
        }
        out.points.emplace_back(HurwitzInt::doubled(P[0], P[1], P[2], P[3]), q);
    });
    std::sort(out.points.begin(), out.points.end(),
              [](const HurwitzRational& a, const HurwitzRational& b) { return a.p < b.p; });
    out.count = static_cast<int64_t>(out.points.size());
    return out;
}

int64_t count_resonant(const HurwitzInt& q, int64_t bound) {
    if (q.is_zero()) fail(Errc::invalid_argument, "resonant set needs a nonzero denominator");
    const int64_t n = q.norm_sq();
    if (n > bound) fail(Errc::bound_exceeded, "denominator norm exceeds the counting bound");
    const Vec4 u{2 * n, 2 * n, 2 * n, n};
    auto gens = image_generators(q);
    // The lattice H conj(q) / n contains H with index n^2, so the half-open domain holds n^2 points.
    int64_t total = n * n;
    for (int f = 0; f < 4; ++f) {
        Vec4 lo{0, 0, 0, 0};
        Vec4 hi{};
        std::vector<int> others;
        for (int g = 0; g < 4; ++g) {
            if (g == f) continue;
            others.push_back(g);
            hi[g] = g < f ? u[g] - 1 : u[g];
        }
        lo[f] = hi[f] = u[f];
        Vec4 x0 = f < 3 ? Vec4{0, 0, 0, 0} : Vec4{n, n, n, n};
        if (f < 3) x0[f] = 2 * n;
        auto walk = best_walk(gens, others, {f, 0, 0, 0}, 1, lo, hi);
        total += walk.count(x0);
    }
    return total;
}

double ball_volume(double r) { return M_PI * M_PI * r * r * r * r / 2.0; }

void for_each_hurwitz_in_ball(const RealQuaternion& x, double r, const std::function<bool(const HurwitzInt&)>& fn) {
    std::array<int64_t, 4> lo{};
    std::array<int64_t, 4> hi{};
    for (int t = 0; t < 4; ++t) {
        lo[t] = static_cast<int64_t>(std::ceil(2.0 * (x.c[t] - r)));
        hi[t] = static_cast<int64_t>(std::floor(2.0 * (x.c[t] + r)));
    }
    const double r2 = r * r;
    for (int parity = 0; parity < 2; ++parity) {
        auto first = [&](int t) { return lo[t] + (((lo[t] & 1) != parity) ? 1 : 0); };
        for (int64_t A = first(0); A <= hi[0]; A += 2) {
            double da = 0.5 * static_cast<double>(A) - x.c[0];
            double s0 = da * da;
            if (s0 > r2) continue;
            for (int64_t B = first(1); B <= hi[1]; B += 2) {
                double db = 0.5 * static_cast<double>(B) - x.c[1];
                double s1 = s0 + db * db;
                if (s1 > r2) continue;
                for (int64_t C = first(2); C <= hi[2]; C += 2) {
                    double dc = 0.5 * static_cast<double>(C) - x.c[2];
                    double s2 = s1 + dc * dc;
                    if (s2 > r2) continue;
                    for (int64_t D = first(3); D <= hi[3]; D += 2) {
                        double dd = 0.5 * static_cast<double>(D) - x.c[3];
                        if (s2 + dd * dd > r2) continue;
                        if (fn(HurwitzInt::doubled(A, B, C, D))) return;
                    }
                }
            }
        }
    }
}

// ------------------------------------------------------------ near-resonant

namespace {

// Is there p with p q^-1 in the closed domain and |xi - p q^-1| < eps?
bool near_resonant(const RealQuaternion& xi, const HurwitzInt& q, double eps) {
    const double nq = std::sqrt(static_cast<double>(q.norm_sq()));
    const RealQuaternion x = xi * q;
    const double r = eps * nq;
    if (r < 0.5) {
        HurwitzInt p = nearest_hurwitz(x);
        if ((x - RealQuaternion::from(p)).norm() >= r) return false;
        return in_delta_closure(HurwitzRational(p, q));
    }
    bool hit = false;
    for_each_hurwitz_in_ball(x, r, [&](const HurwitzInt& p) {
        if ((x - RealQuaternion::from(p)).norm() < r && in_delta_closure(HurwitzRational(p, q))) hit = true;
        return hit;
    });
    return hit;
}

}  // namespace

VolumeEstimate near_resonant_volume(const HurwitzInt& q, double eps, int64_t samples, uint64_t seed, int workers) {
    if (q.is_zero()) fail(Errc::invalid_argument, "resonant set needs a nonzero denominator");
    if (!(eps >= 0.0) || !std::isfinite(eps)) fail(Errc::invalid_argument, "eps must be non-negative");
    if (samples <= 0) fail(Errc::invalid_argument, "samples must be positive");
    if (eps == 0.0) {
        VolumeEstimate empty;
        empty.samples = samples;
        empty.seed = seed;
        empty.analytic_valid = true;
        return empty;
    }
    const double nq = std::sqrt(static_cast<double>(q.norm_sq()));
    if (eps * nq > 64.0) fail(Errc::bound_exceeded, "eps too large for ball enumeration");
    VolumeEstimate est;
    est.samples = samples;
    est.seed = seed;

    auto lattice = enumerate_resonant(q);
    // Disjoint balls whose centers sit on faces or stay eps away from them clip by 2^-k.
    const double n = static_cast<double>(q.norm_sq());
    est.analytic_valid = eps < 1.0 / (2.0 * n) && q.norm_sq() <= kResonantListBound;
    double sum = 0.0;
    for (const auto& hr : lattice.points) {
        auto X = scaled_value(hr);
        const double u[4] = {2 * n, 2 * n, 2 * n, n};
        int k = 0;
        for (int t = 0; t < 4; ++t) {
            double y = static_cast<double>(X[t]) / (2 * n);
            double top = u[t] / (2 * n);
            if (X[t] == 0 || static_cast<double>(X[t]) == u[t]) {
                ++k;
            } else if (y < eps || top - y < eps) {
                est.analytic_valid = false;
            }
        }
        sum += std::ldexp(1.0, -k);
    }
    est.analytic = sum * ball_volume(eps);

    auto totals = detail::run_shards(samples, seed, est.shards, workers, [&](CounterRng& rng) -> unsigned {
        RealQuaternion xi = sample_delta(rng);
        return near_resonant(xi, q, eps) ? 1u : 0u;
    });
    est.hits = totals[0];
    const double f = static_cast<double>(est.hits) / static_cast<double>(samples);
    est.measure = 0.5 * f;
    est.std_error = 0.5 * std::sqrt(f * (1.0 - f) / static_cast<double>(samples));
    return est;
}

// ----------------------------------------------------------------- ubiquity

namespace {

// Is there a resonant point p q^-1 in the closed domain with |q| <= qmax and |x - p q^-1| < radius_of(|q|)?
// Uses |x - p q^-1| = |x q - p| / |q|, so every hit has |x q - p| < err_max.
template <class RadiusFn>
bool near_some_rational(const RealQuaternion& x, double qmax, double err_max, RadiusFn radius_of) {
    return detail::search_pairs(x, qmax, err_max, [&](const HurwitzInt& q, const HurwitzInt& p) {
        const double nq = std::sqrt(static_cast<double>(q.norm_sq()));
        if (nq > qmax * (1.0 + 1e-12)) return false;
        if ((x * q - RealQuaternion::from(p)).norm() >= radius_of(nq) * nq) return false;
        return in_delta_closure(HurwitzRational(p, q));
    });
}

bool ball_in_closed_delta(const Ball4& b) {
    const double hi[4] = {1.0, 1.0, 1.0, 0.5};
    for (int t = 0; t < 4; ++t)
        if (b.center.c[t] - b.radius < 0.0 || b.center.c[t] + b.radius > hi[t]) return false;
    return true;
}

}  // namespace

UbiquityReport ubiquity_check(const Ball4& b0, int64_t N, double rho, int64_t samples, uint64_t seed, double varpi,
                              int workers) {
    if (!(b0.radius > 0.0) || !b0.center.finite()) fail(Errc::invalid_argument, "ball radius must be positive");
    if (!ball_in_closed_delta(b0)) fail(Errc::invalid_argument, "ball must lie inside the fundamental domain");
    if (N < 2) fail(Errc::invalid_argument, "N must be at least 2");
    if (!(rho > 0.0)) fail(Errc::invalid_argument, "rho must be positive");
    if (samples <= 0) fail(Errc::invalid_argument, "samples must be positive");
    if (N > 1000000) fail(Errc::bound_exceeded, "N too large");
    UbiquityReport rep;
    rep.ball = b0;
    rep.N = N;
    rep.rho = rho;
    rep.varpi = varpi;
    rep.samples = samples;
    rep.seed = seed;

    const double dn = static_cast<double>(N);
    // |q| < varpi, i.e. norm_sq(q) <= ceil(varpi^2) - 1
    const double small_qmax = std::sqrt(std::max(0.0, std::ceil(varpi * varpi) - 1.0));
    auto totals = detail::run_shards(samples, seed, rep.shards, workers, [&](CounterRng& rng) -> unsigned {
        RealQuaternion x = sample_ball(b0, rng);
        unsigned mask = near_some_rational(x, dn, rho * dn, [&](double) { return rho; }) ? 1u : 0u;
        if (small_qmax >= 1.0 &&
            near_some_rational(x, small_qmax, 2.0 / dn, [&](double nq) { return 2.0 / (nq * dn); }))
            mask |= 2u;
        return mask;
    });
    const double ns = static_cast<double>(samples);
    rep.covered_fraction = static_cast<double>(totals[0]) / ns;
    rep.std_error = std::sqrt(rep.covered_fraction * (1.0 - rep.covered_fraction) / ns);
    rep.en_fraction = static_cast<double>(totals[1]) / ns;
    rep.en_std_error = std::sqrt(rep.en_fraction * (1.0 - rep.en_fraction) / ns);
    rep.en_measure = rep.en_fraction * ball_volume(b0.radius);
    // Each right unit class splits into three Q8 classes; every class contributes |q|^4 (2/(|q|N))^4 pi^2/2.
    int64_t reps = 0;
    const auto small_norm_hi = static_cast<int64_t>(std::ceil(varpi * varpi)) - 1;
    if (small_norm_hi >= 1) for_each_q_representative(1, small_norm_hi, [&](const HurwitzInt&) { ++reps; });
    rep.en_bound = static_cast<double>(reps) / 3.0 * ball_volume(2.0 / dn);
    return rep;
}

}  // namespace hq
