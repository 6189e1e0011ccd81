#pragma once

#include <future>
#include <vector>

namespace mwip {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results land in a
/// vector indexed by i, so the output is independent of scheduling order.
template <typename Fn>
auto parallel_map(int n, int jobs, Fn&& fn) {
    using R = decltype(fn(0));
    std::vector<R> out(n);
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::future<void>> pool;
    const int nthreads = std::min(jobs, n);
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
    return out;
}

}  // namespace mwip
