#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ncover {

/// Process-wide cap on worker threads (0 = hardware concurrency).
void set_max_threads(unsigned threads);
unsigned max_threads();

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Runs fn(i) for i in [0, count) over up to max_threads() workers. Items are
/// split into contiguous blocks; results must be written by index. Nested calls
/// from inside a worker run serially.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(max_threads(), count);
    if (workers <= 1 || detail::in_parallel_region) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            detail::in_parallel_region = true;
            const std::size_t begin = count * w / workers;
            const std::size_t end = count * (w + 1) / workers;
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace ncover
