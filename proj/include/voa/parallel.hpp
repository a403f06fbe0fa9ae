#ifndef VOA_PARALLEL_HPP
#define VOA_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace voa {

// All check kernels come in two flavours: a serial reference walk and an
// OpenMP sweep over the same task list. Both fill pre-sized slots indexed by
// task id and merge serially, so reports are byte-identical across modes.
enum class ExecMode { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("VOA_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <class Fn>
void for_each_task(std::size_t n, ExecMode mode, Fn&& fn) {
#ifdef _OPENMP
  if (mode == ExecMode::parallel) {
    const int threads = max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      fn(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline ExecMode exec_mode_from_name(const std::string& name) {
  return name == "serial" ? ExecMode::serial : ExecMode::parallel;
}

}  // namespace voa

#endif  // VOA_PARALLEL_HPP
