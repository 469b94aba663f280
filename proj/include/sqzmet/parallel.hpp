// parallel.hpp — order-preserving parallel map over index ranges

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sqzmet {

/// Worker count from SQZMET_THREADS; unset, unparsable or 0 means one per core.
inline std::size_t thread_count() {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("SQZMET_THREADS");
    if (env == nullptr) return hw;
    try {
        const long v = std::stol(env);
        return v > 0 ? static_cast<std::size_t>(v) : hw;
    } catch (const std::exception&) {
        return hw;
    }
}

/// Evaluates f(i) for i in [0, n) and stores results by index, so the output
/// never depends on scheduling. The first exception thrown is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
    std::vector<T> out(n);
    const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace sqzmet
