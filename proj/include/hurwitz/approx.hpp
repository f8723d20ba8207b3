#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hurwitz/core.hpp"

namespace hq {

struct Approximant {
    HurwitzInt p;
    HurwitzInt q;
    double err = 0.0;                   // |xi - p q^-1|
    std::optional<Rational> err_sq;     // exact squared error when xi is rational
    double quality() const { return err * std::sqrt(static_cast<double>(q.norm_sq())); }
};

/// Visits one representative q of every orbit {q u : u in Q8} with
/// norm_lo <= norm_sq(q) <= norm_hi. Representatives have a positive real part
/// that dominates every other coordinate in absolute value.
void for_each_q_representative(int64_t norm_lo, int64_t norm_hi, const std::function<void(const HurwitzInt&)>& fn);

Approximant dirichlet_search(const RealQuaternion& xi, int64_t N, int workers = 1);
Approximant dirichlet_search(const RationalQuaternion& xi, int64_t N);

std::vector<Approximant> good_approximants(const RealQuaternion& xi, int64_t Q_max);
std::vector<Approximant> good_approximants(const RationalQuaternion& xi, int64_t Q_max);

struct MarkovConstants {
    double c = 0.0;          // min |xi - p q^-1| |q|^2 over 1 <= |q| <= Q_max
    double C = 0.0;          // 1/c, +inf when c == 0
    HurwitzInt p;
    HurwitzInt q;
};

MarkovConstants markov_constants(const RealQuaternion& xi, int64_t Q_max, int workers = 1);

/// min |xi - p q^-1| |q|^2 over norm_lo <= norm_sq(q) <= norm_hi; +inf for an empty range.
double approximation_certificate(const RealQuaternion& xi, int64_t norm_lo, int64_t norm_hi, int workers = 1,
                                 HurwitzInt* best_q = nullptr);

struct BadConstructionConfig {
    int64_t kappa = 3;
    int depth = 4;
    uint64_t seed = 1;

    double theta() const;          // kappa^-2 / 2
    double side(int level) const;  // 2^(5/4) kappa^(-2(level+2))
    static double K1();
    static double K2();
    double nu() const;             // kappa^8
    void validate() const;
};

struct LevelReport {
    int level = 0;
    int candidates = 0;
    int discarded = 0;
    int survivors = 0;
    int rationals_in_shrunk_ball = 0;
    RealQuaternion center;
};

struct BadConstructionResult {
    RealQuaternion point;
    double certificate = 0.0;
    std::vector<LevelReport> levels;
};

BadConstructionResult construct_badly_approximable(const BadConstructionConfig& cfg, int workers = 1);

}  // namespace hq
