#pragma once

// Row-level work splitting. Every unit writes a disjoint output slice, so the
// result is bit-identical to a serial loop regardless of the thread count.
// SIMIGNORE_THREADS (integer >= 1) caps the number of worker threads.

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace simignore::detail {

inline std::size_t max_threads() {
    std::size_t cap = std::thread::hardware_concurrency();
    if (cap == 0) {
        cap = 1;
    }
    if (const char* env = std::getenv("SIMIGNORE_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) {
            cap = static_cast<std::size_t>(v);
        }
    }
    return cap;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    std::size_t threads = max_threads();
    if (threads > count) {
        threads = count;
    }
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        std::size_t begin = count * t / threads;
        std::size_t end = count * (t + 1) / threads;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) {
                fn(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

}  // namespace simignore::detail
