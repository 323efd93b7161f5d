#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace melosc::detail {

/// Worker count for n independent tasks: hardware concurrency capped by the
/// MELNIKOV_THREADS environment variable (and by n itself).
inline unsigned thread_budget(std::size_t n_tasks) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("MELNIKOV_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned long>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    if (n_tasks < hw) hw = static_cast<unsigned>(n_tasks);
    return hw;
}

/// Runs fn(i) for i in [0, n) on up to thread_budget(n) threads. Results must
/// be written to pre-sized slots, so output ordering is independent of the
/// execution schedule. The lowest-index exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = n == 0 ? 0 : thread_budget(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::mutex mu;
    std::exception_ptr first_error;
    std::size_t first_error_index = n;

    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (i < first_error_index) {
                        first_error_index = i;
                        first_error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace melosc::detail
