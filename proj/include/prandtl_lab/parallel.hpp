#pragma once

#include <cstddef>

namespace prandtl_lab {

// Worker count, capped by the PRANDTL_LAB_THREADS environment variable.
int worker_count();

// Runs body(i) for i in [0, n). Iterations must be independent; results are
// identical for any worker count because no reduction crosses iterations.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const long count = static_cast<long>(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(worker_count()) if (count > 8)
#endif
  for (long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace prandtl_lab
