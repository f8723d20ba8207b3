#include "hurwitz/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hurwitz/rng.hpp"
#include "parallel.hpp"

namespace hq {

namespace {

int64_t isqrt(int64_t v) {
    if (v <= 0) return 0;
    auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Representatives with a fixed doubled real part A.
template <class F>
void reps_with_real_part(int64_t A, int64_t norm_lo, int64_t norm_hi, F&& fn) {
    const int64_t T_lo = 4 * norm_lo;
    const int64_t T_hi = 4 * norm_hi;
    const int64_t parity = A & 1;
    const int64_t ra = T_hi - A * A;
    if (ra < 0) return;
    for (int64_t B = -A; B <= A; ++B) {
        if ((B & 1) != parity) continue;
        const int64_t rb = ra - B * B;
        if (rb < 0) continue;
        for (int64_t C = -A; C <= A; ++C) {
            if ((C & 1) != parity) continue;
            const int64_t rc = rb - C * C;
            if (rc < 0) continue;
            const int64_t dmax = std::min(A, isqrt(rc));
            int64_t start = -dmax;
            if ((start & 1) != parity) ++start;
            for (int64_t D = start; D <= dmax; D += 2) {
                const int64_t T = A * A + B * B + C * C + D * D;
                if (T < T_lo) continue;
                fn(A, B, C, D);
            }
        }
    }
}

int64_t max_real_part(int64_t norm_hi) { return isqrt(4 * norm_hi); }

// Squared distance from x to the nearest Hurwitz integer.
inline double nearest_dist2(const double x[4]) {
    double di = 0.0;
    double dh = 0.0;
    for (int t = 0; t < 4; ++t) {
        double r = std::nearbyint(x[t]);
        double e = x[t] - r;
        di += e * e;
        double h = std::floor(x[t]) + 0.5;
        double f = x[t] - h;
        dh += f * f;
    }
    return std::min(di, dh);
}

// x = xi * q with q given by doubled coordinates.
inline void times_doubled(const RealQuaternion& xi, int64_t A, int64_t B, int64_t C, int64_t D, double x[4]) {
    const double a = 0.5 * static_cast<double>(A);
    const double b = 0.5 * static_cast<double>(B);
    const double c = 0.5 * static_cast<double>(C);
    const double d = 0.5 * static_cast<double>(D);
    const auto& s = xi.c;
    x[0] = s[0] * a - s[1] * b - s[2] * c - s[3] * d;
    x[1] = s[0] * b + s[1] * a + s[2] * d - s[3] * c;
    x[2] = s[0] * c - s[1] * d + s[2] * a + s[3] * b;
    x[3] = s[0] * d + s[1] * c - s[2] * b + s[3] * a;
}

double pair_error(const RealQuaternion& xi, const HurwitzInt& p, const HurwitzInt& q) {
    RealQuaternion diff = xi * q - RealQuaternion::from(p);
    return diff.norm() / std::sqrt(static_cast<double>(q.norm_sq()));
}

struct Best {
    double key = std::numeric_limits<double>::infinity();
    int64_t norm = 0;
    HurwitzInt q;
    bool set = false;

    void offer(double k, int64_t n, const HurwitzInt& cand) {
        if (!set || k < key || (k == key && (n < norm || (n == norm && cand < q)))) {
            key = k;
            norm = n;
            q = cand;
            set = true;
        }
    }
    void merge(const Best& o) {
        if (o.set) offer(o.key, o.norm, o.q);
    }
};

// Minimizes weight(norm) * dist2(xi q) over representatives; weight(n) = 1 or n.
Best minimize_over_reps(const RealQuaternion& xi, int64_t norm_lo, int64_t norm_hi, bool scale_by_norm,
                        int workers) {
    const int64_t amax = max_real_part(norm_hi);
    std::vector<Best> partial(static_cast<size_t>(amax));
    detail::parallel_for(static_cast<size_t>(amax), workers, [&](size_t task) {
        const int64_t A = static_cast<int64_t>(task) + 1;
        Best local;
        reps_with_real_part(A, norm_lo, norm_hi, [&](int64_t a, int64_t b, int64_t c, int64_t d) {
            double x[4];
            times_doubled(xi, a, b, c, d, x);
            const int64_t n = (a * a + b * b + c * c + d * d) / 4;
            double k = nearest_dist2(x);
            if (scale_by_norm) k *= static_cast<double>(n);
            if (!local.set || k <= local.key) local.offer(k, n, HurwitzInt::doubled(a, b, c, d));
        });
        partial[task] = local;
    });
    Best best;
    for (const auto& b : partial) best.merge(b);
    return best;
}

// Exact rational target as integer numerators over a common positive denominator.
struct ExactTarget {
    std::array<i128, 4> X{};
    i128 L = 1;
};

ExactTarget exact_target(const RationalQuaternion& xi) {
    ExactTarget t;
    for (const auto& v : xi.c) t.L = checked_mul(t.L / std::gcd(static_cast<int64_t>(t.L), v.den()), v.den());
    for (int k = 0; k < 4; ++k) t.X[k] = checked_mul(xi.c[k].num(), t.L / xi.c[k].den());
    return t;
}

std::array<i128, 4> raw_product(const std::array<i128, 4>& x, const std::array<int64_t, 4>& y) {
    auto m = [](i128 a, int64_t b) { return checked_mul(a, b); };
    return {checked_sub(checked_sub(checked_sub(m(x[0], y[0]), m(x[1], y[1])), m(x[2], y[2])), m(x[3], y[3])),
            checked_sub(checked_add(checked_add(m(x[0], y[1]), m(x[1], y[0])), m(x[2], y[3])), m(x[3], y[2])),
            checked_add(checked_add(checked_sub(m(x[0], y[2]), m(x[1], y[3])), m(x[2], y[0])), m(x[3], y[1])),
            checked_add(checked_sub(checked_add(m(x[0], y[3]), m(x[1], y[2])), m(x[2], y[1])), m(x[3], y[0]))};
}

// Nearest p to xi q and 4 L^2 |xi q - p|^2, exactly.
std::pair<HurwitzInt, i128> exact_nearest(const ExactTarget& t, const HurwitzInt& q) {
    auto raw = raw_product(t.X, q.d());
    HurwitzInt p = nearest_hurwitz_exact(raw, t.L);
    i128 s = 0;
    for (int k = 0; k < 4; ++k) {
        i128 e = checked_sub(raw[k], checked_mul(t.L, p[k]));
        s = checked_add(s, checked_mul(e, e));
    }
    return {p, s};
}

Approximant exact_approximant(const ExactTarget& t, const HurwitzInt& q) {
    auto [p, s] = exact_nearest(t, q);
    Approximant a;
    a.p = p;
    a.q = q;
    Rational e2(s, checked_mul(checked_mul(checked_mul(4, t.L), t.L), q.norm_sq()));
    a.err_sq = e2;
    a.err = std::sqrt(e2.to_double());
    return a;
}

void check_xi(const RealQuaternion& xi) {
    if (!xi.finite()) fail(Errc::invalid_argument, "target quaternion must be finite");
}

}  // namespace

void for_each_q_representative(int64_t norm_lo, int64_t norm_hi, const std::function<void(const HurwitzInt&)>& fn) {
    norm_lo = std::max<int64_t>(norm_lo, 1);
    const int64_t amax = max_real_part(norm_hi);
    for (int64_t A = 1; A <= amax; ++A)
        reps_with_real_part(A, norm_lo, norm_hi,
                            [&](int64_t a, int64_t b, int64_t c, int64_t d) { fn(HurwitzInt::doubled(a, b, c, d)); });
}

Approximant dirichlet_search(const RealQuaternion& xi, int64_t N, int workers) {
    check_xi(xi);
    if (N < 2) fail(Errc::invalid_argument, "Dirichlet search needs N >= 2");
    if (N > 100000) fail(Errc::bound_exceeded, "Dirichlet search bound too large");
    Best best = minimize_over_reps(xi, 1, N * N, false, workers);
    Approximant a;
    a.q = best.q;
    a.p = nearest_hurwitz(xi * best.q);
    a.err = pair_error(xi, a.p, a.q);
    if (!(a.quality() < 2.0 / static_cast<double>(N)))
        fail(Errc::internal, "Dirichlet search found no pair within the guaranteed bound");
    return a;
}

Approximant dirichlet_search(const RationalQuaternion& xi, int64_t N) {
    if (N < 2) fail(Errc::invalid_argument, "Dirichlet search needs N >= 2");
    ExactTarget t = exact_target(xi);
    bool have = false;
    i128 best_s = 0;
    int64_t best_n = 0;
    HurwitzInt best_q;
    for_each_q_representative(1, N * N, [&](const HurwitzInt& q) {
        auto [p, s] = exact_nearest(t, q);
        int64_t n = q.norm_sq();
        // Compare |xi q - p|^2, which is s / (4 L^2) for every q.
        if (!have || s < best_s || (s == best_s && (n < best_n || (n == best_n && q < best_q)))) {
            have = true;
            best_s = s;
            best_n = n;
            best_q = q;
        }
    });
    Approximant a = exact_approximant(t, best_q);
    // quality^2 < 4/N^2  <=>  s N^2 < 16 L^2
    if (!(checked_mul(best_s, checked_mul(N, N)) < checked_mul(16, checked_mul(t.L, t.L))))
        fail(Errc::internal, "Dirichlet search found no pair within the guaranteed bound");
    return a;
}

namespace {

bool approximant_order(const Approximant& x, const Approximant& y) {
    int64_t nx = x.q.norm_sq();
    int64_t ny = y.q.norm_sq();
    if (nx != ny) return nx < ny;
    if (x.err != y.err) return x.err < y.err;
    if (x.q != y.q) return x.q < y.q;
    return x.p < y.p;
}

template <class F>
void for_each_q(int64_t norm_hi, F&& fn) {
    const int64_t T = 4 * norm_hi;
    const int64_t R = isqrt(T);
    for (int64_t A = -R; A <= R; ++A) {
        const int64_t parity = A & 1;
        const int64_t ra = T - A * A;
        const int64_t rb = isqrt(ra);
        for (int64_t B = -rb; B <= rb; ++B) {
            if ((B & 1) != parity) continue;
            const int64_t rc = ra - B * B;
            const int64_t rcm = isqrt(rc);
            for (int64_t C = -rcm; C <= rcm; ++C) {
                if ((C & 1) != parity) continue;
                const int64_t dm = isqrt(rc - C * C);
                int64_t start = -dm;
                if ((start & 1) != parity) ++start;
                for (int64_t D = start; D <= dm; D += 2) {
                    if (A == 0 && B == 0 && C == 0 && D == 0) continue;
                    fn(A, B, C, D);
                }
            }
        }
    }
}

}  // namespace

std::vector<Approximant> good_approximants(const RealQuaternion& xi, int64_t Q_max) {
    check_xi(xi);
    if (Q_max < 1) fail(Errc::invalid_argument, "Q_max must be positive");
    if (Q_max > 200) fail(Errc::bound_exceeded, "Q_max too large for exhaustive listing");
    std::vector<Approximant> out;
    for_each_q(Q_max * Q_max, [&](int64_t a, int64_t b, int64_t c, int64_t d) {
        double x[4];
        times_doubled(xi, a, b, c, d, x);
        const double n = static_cast<double>((a * a + b * b + c * c + d * d) / 4);
        const double limit = 2.0 / std::sqrt(n);
        if (std::sqrt(nearest_dist2(x)) >= limit + 1e-9) return;
        HurwitzInt q = HurwitzInt::doubled(a, b, c, d);
        for (const auto& p : nearest_candidates(RealQuaternion{{x[0], x[1], x[2], x[3]}})) {
            Approximant ap;
            ap.p = p;
            ap.q = q;
            ap.err = pair_error(xi, p, q);
            if (ap.err < 2.0 / n) out.push_back(ap);
        }
    });
    std::sort(out.begin(), out.end(), approximant_order);
    return out;
}

std::vector<Approximant> good_approximants(const RationalQuaternion& xi, int64_t Q_max) {
    if (Q_max < 1) fail(Errc::invalid_argument, "Q_max must be positive");
    if (Q_max > 100) fail(Errc::bound_exceeded, "Q_max too large for exact listing");
    ExactTarget t = exact_target(xi);
    const i128 rhs = checked_mul(16, checked_mul(t.L, t.L));
    std::vector<Approximant> out;
    for_each_q(Q_max * Q_max, [&](int64_t a, int64_t b, int64_t c, int64_t d) {
        HurwitzInt q = HurwitzInt::doubled(a, b, c, d);
        auto [p, s] = exact_nearest(t, q);
        // err^2 = s / (4 L^2 n) < 4 / n^2  <=>  n s < 16 L^2
        if (checked_mul(q.norm_sq(), s) < rhs) out.push_back(exact_approximant(t, q));
    });
    std::sort(out.begin(), out.end(), approximant_order);
    return out;
}

double approximation_certificate(const RealQuaternion& xi, int64_t norm_lo, int64_t norm_hi, int workers,
                                 HurwitzInt* best_q) {
    check_xi(xi);
    norm_lo = std::max<int64_t>(norm_lo, 1);
    if (norm_hi < norm_lo) return std::numeric_limits<double>::infinity();
    Best best = minimize_over_reps(xi, norm_lo, norm_hi, true, workers);
    if (!best.set) return std::numeric_limits<double>::infinity();
    if (best_q) *best_q = best.q;
    HurwitzInt p = nearest_hurwitz(xi * best.q);
    double n = static_cast<double>(best.q.norm_sq());
    return pair_error(xi, p, best.q) * n;
}

MarkovConstants markov_constants(const RealQuaternion& xi, int64_t Q_max, int workers) {
    if (Q_max < 1) fail(Errc::invalid_argument, "Q_max must be positive");
    MarkovConstants m;
    m.c = approximation_certificate(xi, 1, Q_max * Q_max, workers, &m.q);
    m.p = nearest_hurwitz(xi * m.q);
    m.C = m.c > 0.0 ? 1.0 / m.c : std::numeric_limits<double>::infinity();
    return m;
}

// ------------------------------------------------------------ bad construction

double BadConstructionConfig::theta() const { return 0.5 / static_cast<double>(kappa * kappa); }

double BadConstructionConfig::side(int level) const {
    return std::pow(2.0, 1.25) * std::pow(static_cast<double>(kappa), -2.0 * (level + 2));
}

double BadConstructionConfig::K1() { return M_PI * M_PI / 2048.0; }
double BadConstructionConfig::K2() { return M_PI * M_PI / 4096.0; }
double BadConstructionConfig::nu() const { return std::pow(static_cast<double>(kappa), 8.0); }

void BadConstructionConfig::validate() const {
    if (kappa < 3) fail(Errc::invalid_argument, "kappa must be at least 3");
    if (depth < 0) fail(Errc::invalid_argument, "depth must be non-negative");
    double top = std::pow(static_cast<double>(kappa), 2.0 * depth);
    if (top > 1e9) fail(Errc::bound_exceeded, "construction depth too large for brute-force certificate");
}

BadConstructionResult construct_badly_approximable(const BadConstructionConfig& cfg, int workers) {
    cfg.validate();
    const double kappa = static_cast<double>(cfg.kappa);
    RealQuaternion center{{0.5, 0.5, 0.5, 0.25}};
    BadConstructionResult result;
    int64_t kpow = 1;  // kappa^level
    for (int level = 0; level < cfg.depth; ++level) {
        const double R = std::pow(kappa, -2.0 * level);
        const double R_shrunk = cfg.theta() * R;
        const double r_cand = 2.0 * cfg.theta() * std::pow(kappa, -2.0 * (level + 1));
        const double ell = cfg.side(level);

        std::vector<RealQuaternion> cands;
        const auto G = static_cast<int64_t>(std::floor((R_shrunk - r_cand) / ell + 1e-12));
        for (int64_t g0 = -G; g0 <= G; ++g0)
            for (int64_t g1 = -G; g1 <= G; ++g1)
                for (int64_t g2 = -G; g2 <= G; ++g2)
                    for (int64_t g3 = -G; g3 <= G; ++g3) {
                        double len = ell * std::sqrt(static_cast<double>(g0 * g0 + g1 * g1 + g2 * g2 + g3 * g3));
                        if (len + r_cand > R_shrunk * (1.0 + 1e-12)) continue;
                        cands.push_back(RealQuaternion{{center.c[0] + ell * static_cast<double>(g0),
                                                        center.c[1] + ell * static_cast<double>(g1),
                                                        center.c[2] + ell * static_cast<double>(g2),
                                                        center.c[3] + ell * static_cast<double>(g3)}});
                    }

        // Hurwitz rationals with kappa^level <= |q| < kappa^(level+1) near the shrunken ball.
        const int64_t norm_lo = kpow * kpow;
        const int64_t norm_hi = kpow * kpow * cfg.kappa * cfg.kappa - 1;
        const double reach = R_shrunk + r_cand;
        const int64_t amax = max_real_part(norm_hi);
        std::vector<std::vector<HurwitzRational>> found(static_cast<size_t>(amax));
        detail::parallel_for(static_cast<size_t>(amax), workers, [&](size_t task) {
            const int64_t A = static_cast<int64_t>(task) + 1;
            reps_with_real_part(A, norm_lo, norm_hi, [&](int64_t a, int64_t b, int64_t c, int64_t d) {
                double x[4];
                times_doubled(center, a, b, c, d, x);
                const double n = static_cast<double>((a * a + b * b + c * c + d * d) / 4);
                if (nearest_dist2(x) > reach * reach * n * (1.0 + 1e-9)) return;
                HurwitzInt q = HurwitzInt::doubled(a, b, c, d);
                HurwitzInt p = nearest_hurwitz(RealQuaternion{{x[0], x[1], x[2], x[3]}});
                found[task].emplace_back(p, q);
            });
        });
        std::vector<RationalQuaternion> values;
        std::vector<RealQuaternion> points;
        int in_shrunk = 0;
        for (const auto& bucket : found)
            for (const auto& hr : bucket) {
                RationalQuaternion v = to_rational(hr);
                if (std::find(values.begin(), values.end(), v) != values.end()) continue;
                values.push_back(v);
                RealQuaternion pt = RealQuaternion::from(v);
                points.push_back(pt);
                if ((pt - center).norm() <= R_shrunk * (1.0 + 1e-12)) ++in_shrunk;
            }
        if (in_shrunk > 1)
            fail(Errc::internal, "more than one Hurwitz rational in a shrunken ball at level " + std::to_string(level));

        std::vector<char> alive(cands.size(), 1);
        int discarded = 0;
        for (size_t i = 0; i < cands.size(); ++i)
            for (const auto& pt : points)
                if ((cands[i] - pt).norm() <= r_cand * (1.0 + 1e-9)) {
                    alive[i] = 0;
                    ++discarded;
                    break;
                }

        std::vector<size_t> idx(cands.size());
        std::iota(idx.begin(), idx.end(), size_t{0});
        CounterRng rng(cfg.seed, static_cast<uint64_t>(level));
        for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
        int survivors = static_cast<int>(cands.size()) - discarded;
        if (survivors <= 0) fail(Errc::internal, "no surviving ball at level " + std::to_string(level));
        for (size_t i : idx)
            if (alive[i]) {
                center = cands[i];
                break;
            }

        LevelReport rep;
        rep.level = level;
        rep.candidates = static_cast<int>(cands.size());
        rep.discarded = discarded;
        rep.survivors = survivors;
        rep.rationals_in_shrunk_ball = in_shrunk;
        rep.center = center;
        result.levels.push_back(rep);
        kpow *= cfg.kappa;
    }
    result.point = center;
    const int64_t top = kpow * kpow;  // kappa^(2 depth)
    result.certificate = approximation_certificate(center, 1, top - 1, workers);
    return result;
}

}  // namespace hq
