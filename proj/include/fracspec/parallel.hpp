#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace fracspec {

/// Worker count for parallel loops: hardware concurrency, capped by the
/// FRACSPEC_THREADS environment variable when set.
inline std::size_t worker_count() {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("FRACSPEC_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
        } catch (...) {
        }
    }
    return n;
}

/// Run fn(i) for i in [begin, end). Work is split into contiguous chunks,
/// one per worker; each index is processed exactly once, so results are
/// identical to the serial loop.
inline void parallel_for(std::size_t begin, std::size_t end,
                         const std::function<void(std::size_t)>& fn) {
    if (end <= begin) return;
    const std::size_t total = end - begin;
    const std::size_t workers = std::min(worker_count(), total);
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = begin + w * chunk;
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn]() {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fracspec
