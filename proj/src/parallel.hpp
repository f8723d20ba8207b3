#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hq::detail {

/// Runs fn(task) for task in [0, tasks) on up to `workers` threads. Tasks are
/// claimed dynamically; callers merge per-task results in task order.
template <class F>
void parallel_for(size_t tasks, int workers, F&& fn) {
    size_t nthreads = std::min<size_t>(static_cast<size_t>(std::max(workers, 1)), tasks);
    if (nthreads <= 1) {
        for (size_t t = 0; t < tasks; ++t) fn(t);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t w = 0; w < nthreads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                size_t t = next.fetch_add(1);
                if (t >= tasks) return;
                try {
                    fn(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(tasks);
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace hq::detail
