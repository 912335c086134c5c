#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lsflow::par {

// Global switch for the OpenMP kernels. The serial reference path and the
// parallel path of every batch kernel accumulate per-chunk partials that are
// reduced in fixed chunk order, so results are bitwise identical for any
// thread count; this flag exists so tests and the kernel benchmark can force
// the plain serial loop.
inline bool& enabled() {
  static bool on = true;
  return on;
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Fixed chunk width used by the deterministic reductions.
inline constexpr std::size_t kChunk = 8;

template <typename Fn>
void for_each_chunk(std::size_t n, const Fn& fn) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  if (enabled()) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long ci = 0; ci < static_cast<long long>(chunks); ++ci) {
      const std::size_t c = static_cast<std::size_t>(ci);
      const std::size_t lo = c * kChunk;
      const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
      fn(c, lo, hi);
    }
  } else {
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t lo = c * kChunk;
      const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
      fn(c, lo, hi);
    }
  }
}

}  // namespace lsflow::par
