// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace restir {

inline int hardware_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs fn(i) for i in [0, n). threads <= 1 gives the serial reference path;
/// otherwise the loop is parallelized with OpenMP. Work items must be
/// independent (each i writes only its own outputs), which makes both paths
/// produce identical results.
template <typename F>
void parallel_for(int64_t n, int threads, F &&fn) {
#if defined(_OPENMP)
    if (threads > 1) {
        #pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
        for (int64_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
#else
    (void)threads;
#endif
    for (int64_t i = 0; i < n; ++i)
        fn(i);
}

/// Sum of fn(i) over [0, n), accumulated in fixed-size blocks that are then
/// added in block order. The result is bitwise identical for any thread
/// count, so the OpenMP path can be checked against the serial one.
template <typename T, typename F>
T parallel_block_sum(int64_t n, int threads, F &&fn, int64_t block = 4096) {
    int64_t nblocks = (n + block - 1) / block;
    std::vector<T> partial(static_cast<size_t>(nblocks), T{});
    parallel_for(nblocks, threads, [&](int64_t b) {
        T acc{};
        int64_t end = std::min(n, (b + 1) * block);
        for (int64_t i = b * block; i < end; ++i)
            acc += fn(i);
        partial[static_cast<size_t>(b)] = acc;
    });
    T total{};
    for (const T &p : partial)
        total += p;
    return total;
}

} // namespace restir
