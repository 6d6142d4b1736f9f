#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace webclust {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Splits [0, n) into contiguous chunks, one per worker, and runs
// fn(chunk_index, begin, end). Workers must write only to disjoint slots so
// the result is independent of scheduling and thread count.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n < 2) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::size_t workers = std::min<std::size_t>(threads, n);
    std::size_t base = n / workers;
    std::size_t extra = n % workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t begin = 0;
    for (std::size_t t = 0; t < workers; ++t) {
        std::size_t end = begin + base + (t < extra ? 1 : 0);
        pool.emplace_back([&fn, t, begin, end] { fn(t, begin, end); });
        begin = end;
    }
    for (auto& th : pool) th.join();
}

}  // namespace webclust
