#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace ifcnorm {

inline unsigned resolve_thread_count(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw != 0 ? hw : 1;
}

// Runs f(i) for every i in [0, n). Callers must write only to slot i so the
// result is independent of scheduling; small ranges run inline.
template <class F>
inline void parallel_for(std::size_t n, unsigned threads, F&& f) {
    if (threads <= 1 || n < 512) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    if (threads > n) threads = static_cast<unsigned>(n);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::atomic_flag error_claimed = ATOMIC_FLAG_INIT;

    constexpr std::size_t chunk = 256;
    auto worker = [&]() {
        for (;;) {
            if (failed.load(std::memory_order_relaxed)) return;
            std::size_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
            if (begin >= n) return;
            std::size_t end = begin + chunk < n ? begin + chunk : n;
            try {
                for (std::size_t i = begin; i < end; ++i) f(i);
            } catch (...) {
                if (!error_claimed.test_and_set()) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace ifcnorm
