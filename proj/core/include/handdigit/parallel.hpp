#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace handdigit {

/// Thread cap: HANDDIGIT_THREADS if set, else hardware concurrency.
inline unsigned max_threads() {
    if (const char* env = std::getenv("HANDDIGIT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs fn(i) for i in [0, n). Work is partitioned statically by index,
/// so results written by index are identical for any thread count.
inline void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn,
                               unsigned threads = 0) {
    if (threads == 0) threads = max_threads();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (threads > n) threads = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([=, &fn] {
            for (std::size_t i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace handdigit
