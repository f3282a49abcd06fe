#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace der {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static chunking over [0, count). Each worker gets a contiguous range, so
// results written to per-index slots are independent of scheduling.
inline void parallel_chunks(int count, int threads, const std::function<void(int begin, int end)>& fn) {
    threads = std::min(resolve_threads(threads), std::max(count, 1));
    if (threads <= 1 || count <= 1) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    int base = count / threads, extra = count % threads;
    int begin = 0;
    for (int t = 0; t < threads; ++t) {
        int len = base + (t < extra ? 1 : 0);
        pool.emplace_back(fn, begin, begin + len);
        begin += len;
    }
    for (auto& th : pool) th.join();
}

}  // namespace der
