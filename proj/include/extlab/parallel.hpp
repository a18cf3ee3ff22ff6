#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace extlab {

// Worker count for data-parallel loops. Settable from the CLI (--jobs) or
// EXTLAB_JOBS; defaults to hardware concurrency.
int parallel_jobs();
void set_parallel_jobs(int jobs);

// Chunked parallel loop over [0, n). Each index is visited exactly once and
// results must be written to disjoint slots, so the output is independent of
// the thread schedule.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
    const int jobs = static_cast<int>(
        std::max<std::int64_t>(1, std::min<std::int64_t>(parallel_jobs(), n)));
    if (jobs == 1 || n < 2) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    const std::int64_t chunk = (n + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace extlab
