#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rk {

/// Worker budget: RK_THREADS caps it, hardware concurrency is the default.
inline int thread_budget() {
    if (const char* env = std::getenv("RK_THREADS")) {
        const int requested = std::atoi(env);
        return requested >= 1 ? requested : 1;
    }
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    return hw >= 1 ? hw : 1;
}

/// Runs fn(0..n-1), possibly concurrently. Each index owns its own output
/// slot, so results merge deterministically regardless of scheduling.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(n, thread_budget());
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rk
