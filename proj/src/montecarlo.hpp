#pragma once

#include <array>
#include <cstdint>

#include "hurwitz/rng.hpp"
#include "parallel.hpp"

namespace hq::detail {

/// Splits `samples` over a fixed number of shards, each drawing from its own
/// stream (seed, shard). fn(rng) returns a bit mask; bit b increments counter b.
/// Totals do not depend on the worker count.
template <class F>
std::array<int64_t, 2> run_shards(int64_t samples, uint64_t seed, int shards, int workers, F&& fn) {
    std::vector<std::array<int64_t, 2>> partial(static_cast<size_t>(shards), {0, 0});
    parallel_for(static_cast<size_t>(shards), workers, [&](size_t s) {
        int64_t share = samples / shards + (static_cast<int64_t>(s) < samples % shards ? 1 : 0);
        CounterRng rng(seed, s);
        std::array<int64_t, 2> acc{0, 0};
        for (int64_t i = 0; i < share; ++i) {
            unsigned mask = fn(rng);
            acc[0] += mask & 1u;
            acc[1] += (mask >> 1) & 1u;
        }
        partial[s] = acc;
    });
    std::array<int64_t, 2> total{0, 0};
    for (const auto& a : partial) {
        total[0] += a[0];
        total[1] += a[1];
    }
    return total;
}

}  // namespace hq::detail
