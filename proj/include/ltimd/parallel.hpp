#pragma once

#include <cstddef>

#ifdef LTIMD_HAVE_OPENMP
#include <omp.h>
#endif

namespace ltimd {

// Execution policy for the data-parallel kernels. Serial is the reference
// implementation; Parallel distributes iterations over OpenMP threads.
// Both must produce identical results: parallelized loops may only carry
// independent per-index work, and any reduction happens serially in index
// order afterwards.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef LTIMD_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Runs fn(i) for i in [0, count). fn must not depend on execution order.
template <typename F>
void for_each_index(Exec exec, std::ptrdiff_t count, F&& fn) {
#ifdef LTIMD_HAVE_OPENMP
  if (exec == Exec::Parallel && count > 1) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
    return;
  }
#else
  (void)exec;
#endif
  for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
}

}  // namespace ltimd
