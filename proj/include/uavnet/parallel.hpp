#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace uavnet {

/// Execution policy for the data-parallel kernels. Serial and OpenMP runs
/// produce bit-identical results: work is partitioned by a fixed scheme and
/// partial results are folded in index order.
enum class Exec { Serial, OpenMP };

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace uavnet
