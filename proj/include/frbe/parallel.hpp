#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace frbe {

/// Number of worker threads to use: `requested` if positive, otherwise the
/// FRBE_THREADS environment variable, otherwise the hardware concurrency.
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items are
/// handed out through a shared atomic counter; fn must be safe to call
/// concurrently for distinct indices.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (count == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(count, static_cast<std::size_t>(threads > 0 ? threads : 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}
