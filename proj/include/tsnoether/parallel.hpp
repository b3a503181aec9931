#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tsn {

/// Execution policy for the data-parallel grid kernels. Every kernel writes
/// independent output slots, so Serial and Parallel produce bitwise identical
/// results; Parallel only changes who computes which slot.
enum class Exec {
    Auto,     ///< parallel when the loop is large enough to pay off
    Serial,   ///< reference path, always a plain loop
    Parallel, ///< force the OpenMP path (used by the comparison tests)
};

namespace detail {

/// Below this trip count Auto stays serial; thread startup would dominate.
inline constexpr std::size_t kParallelGrain = 4096;

inline bool use_parallel(std::size_t n, Exec exec) {
#ifdef _OPENMP
    if (exec == Exec::Parallel) return true;
    return exec == Exec::Auto && n >= kParallelGrain && omp_get_max_threads() > 1;
#else
    (void)n;
    (void)exec;
    return false;
#endif
}

} // namespace detail

/// Apply `f(i)` for i in [0, n). The body must only write state owned by
/// index i; reductions and prefix sums do not belong here.
template <typename F>
void parallel_for(std::size_t n, Exec exec, F&& f) {
    if (detail::use_parallel(n, exec)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            f(static_cast<std::size_t>(i));
        }
#endif
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
    }
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace tsn
