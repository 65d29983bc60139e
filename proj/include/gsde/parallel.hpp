#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gsde {

/// Runs fn(0), ..., fn(count - 1) on up to `threads` workers pulling from a
/// shared index. Results must be written to per-index slots so the outcome
/// is independent of scheduling; an exception from any task stops the pool
/// and is rethrown after all workers join.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
    if (count == 0) {
        return;
    }
    std::size_t workers = threads < 1 ? 1 : static_cast<std::size_t>(threads);
    if (workers > count) {
        workers = count;
    }
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&] {
        for (;;) {
            if (failed.load(std::memory_order_relaxed)) {
                return;
            }
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(body);
    }
    for (auto& worker : pool) {
        worker.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

}  // namespace gsde
