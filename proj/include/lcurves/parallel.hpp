#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lcurves {

/// Plain blocked parallel map over [begin, end). The body must be free of
/// shared mutable state apart from disjoint writes indexed by i. The first
/// exception thrown by any worker is rethrown on the calling thread.
inline void parallel_for(int begin, int end, const std::function<void(int)>& body) {
    int count = end - begin;
    if (count <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    int n_threads = static_cast<int>(std::max(1u, hw));
    n_threads = std::min(n_threads, count);
    if (n_threads == 1 || count < 32) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    int chunk = (count + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
        int lo = begin + t * chunk;
        int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body, &first_error, &error_mutex] {
            try {
                for (int i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lcurves
