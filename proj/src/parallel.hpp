#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace vulnseed::detail {

/// Calls `fn(i)` for every i in [0, count) on up to `workers` threads. `fn` must not throw and
/// must only write to state owned by index i.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn)
{
    std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
}

}  // namespace vulnseed::detail
