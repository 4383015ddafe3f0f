#ifndef WSTAR_PARALLEL_HPP
#define WSTAR_PARALLEL_HPP

#include <cstddef>
#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace wstar {

// Serial path is the reference; the OpenMP path must be observationally
// identical (loop bodies write disjoint slots or fold with max).
enum class Exec { serial, openmp };

inline Exec default_exec() {
#if defined(_OPENMP)
    return Exec::openmp;
#else
    return Exec::serial;
#endif
}

template <typename F>
void parallel_for(std::size_t count, F&& body, Exec exec = default_exec()) {
#if defined(_OPENMP)
    if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < count; ++i) body(i);
}

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace wstar

#endif
