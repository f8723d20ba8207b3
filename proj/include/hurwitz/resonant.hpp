#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hurwitz/core.hpp"

namespace hq {

inline constexpr int64_t kResonantListBound = 20'000;
inline constexpr int64_t kResonantCountBound = 10'000'000;
inline constexpr int kMonteCarloShards = 16;

struct ResonantLattice {
    HurwitzInt q;
    std::vector<HurwitzRational> points;  // sorted by numerator
    int64_t count = 0;
};

/// All p with p q^-1 in the closed domain [0,1]^3 x [0,1/2].
ResonantLattice enumerate_resonant(const HurwitzInt& q, int64_t bound = kResonantListBound);
/// Same count without listing: norm_sq(q)^2 interior representatives plus boundary slices.
int64_t count_resonant(const HurwitzInt& q, int64_t bound = kResonantCountBound);

/// Canonical representative of q modulo right multiplication by units (lexicographic maximum).
HurwitzInt right_unit_class(const HurwitzInt& q);

double ball_volume(double r);  // pi^2 r^4 / 2

struct VolumeEstimate {
    double measure = 0.0;     // estimate of |B(R_q, eps) cap Delta|
    double std_error = 0.0;
    double analytic = 0.0;    // clipped ball sum, when the balls are disjoint
    bool analytic_valid = false;
    int64_t samples = 0;
    int64_t hits = 0;
    uint64_t seed = 0;
    int shards = kMonteCarloShards;
};

VolumeEstimate near_resonant_volume(const HurwitzInt& q, double eps, int64_t samples, uint64_t seed,
                                    int workers = 1);

struct Ball4 {
    RealQuaternion center;
    double radius = 0.0;
};

struct UbiquityReport {
    Ball4 ball;
    int64_t N = 0;
    double rho = 0.0;
    double varpi = 0.0;
    double covered_fraction = 0.0;
    double std_error = 0.0;
    double en_fraction = 0.0;   // share of B0 inside the small-denominator set E(N)
    double en_std_error = 0.0;
    double en_measure = 0.0;    // en_fraction * |B0|
    double en_bound = 0.0;      // union bound sum_{|q| < varpi} |q|^4 |B(0, 2/(|q| N))| over right unit classes
    int64_t samples = 0;
    uint64_t seed = 0;
    int shards = kMonteCarloShards;
};

UbiquityReport ubiquity_check(const Ball4& b0, int64_t N, double rho, int64_t samples, uint64_t seed,
                              double varpi, int workers = 1);

/// Uniform point of the 4-ball by rejection from the bounding cube.
template <class Rng>
RealQuaternion sample_ball(const Ball4& b, Rng& rng) {
    for (;;) {
        RealQuaternion u{{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                          rng.uniform(-1.0, 1.0)}};
        if (u.norm_sq() < 1.0) {
            for (auto& v : u.c) v *= b.radius;
            return b.center + u;
        }
    }
}

template <class Rng>
RealQuaternion sample_delta(Rng& rng) {
    return RealQuaternion{{rng.uniform(), rng.uniform(), rng.uniform(), 0.5 * rng.uniform()}};
}

/// Visits every Hurwitz integer within distance r of x.
void for_each_hurwitz_in_ball(const RealQuaternion& x, double r, const std::function<bool(const HurwitzInt&)>& fn);

}  // namespace hq
