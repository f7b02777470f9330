#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace rpfa {

/// Run fn(i) for i in [0, n). Work units must be independent and write only
/// to their own output slots; results are then identical to a sequential
/// run regardless of thread count.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::int64_t n_threads =
        std::min<std::int64_t>(n, hw == 0 ? 1 : static_cast<std::int64_t>(hw));
    if (n_threads <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    for (std::int64_t w = 0; w < n_threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::int64_t i = w; i < n; i += n_threads) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace rpfa
