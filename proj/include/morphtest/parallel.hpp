#pragma once

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace morphtest {

/// Worker count used when a caller passes jobs <= 0.
inline int default_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs body(i) for i in [0, n). Each index must write only its own outputs;
/// under that contract results are identical for every jobs value. jobs == 1
/// runs the plain serial loop. Exceptions from workers are rethrown (first
/// one wins).
template <typename Body>
void parallel_for(std::int64_t n, int jobs, const Body& body) {
    if (jobs <= 0) jobs = default_jobs();
    if (jobs == 1 || n <= 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 8) num_threads(jobs)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(morphtest_parallel_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
#else
    for (std::int64_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace morphtest
