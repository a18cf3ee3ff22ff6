#include "extlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace extlab {

namespace {
std::atomic<int> g_jobs{0};

int detect_default() {
    if (const char* env = std::getenv("EXTLAB_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}
}  // namespace

int parallel_jobs() {
    int j = g_jobs.load(std::memory_order_relaxed);
    if (j <= 0) {
        j = detect_default();
        g_jobs.store(j, std::memory_order_relaxed);
    }
    return j;
}

void set_parallel_jobs(int jobs) { g_jobs.store(jobs > 0 ? jobs : 0, std::memory_order_relaxed); }

}  // namespace extlab
