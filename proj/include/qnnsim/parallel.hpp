/* Copyright 2026 The QNNSim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef QNNSIM_PARALLEL_HPP_
#define QNNSIM_PARALLEL_HPP_

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qnnsim {

inline int worker_count() {
    if (const char *env = std::getenv("QNNSIM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Run fn(thread_index, begin, end) over a static partition of [0, n). The
/// partition depends only on n and the worker count, so any order-sensitive
/// reduction the callers do afterwards stays deterministic.
template <typename Fn>
inline void parallel_chunks(std::size_t n, Fn &&fn) {
    const int nw = std::min<std::size_t>(worker_count(), n ? n : 1);
    if (nw <= 1 || n < 2) {
        fn(0, std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nw);
    const std::size_t chunk = (n + nw - 1) / nw;
    for (int t = 0; t < nw; ++t) {
        const std::size_t begin = std::min(n, t * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&, t, begin, end] { fn(t, begin, end); });
    }
    for (auto &th : pool) th.join();
}

} // namespace qnnsim

#endif // QNNSIM_PARALLEL_HPP_
