// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <omp.h>

#include <cstddef>

namespace tacsim {

/// Sets the worker count used by every parallel loop in the library.
inline void set_thread_count(int threads) {
  if (threads > 0) {
    omp_set_num_threads(threads);
  }
}

inline int thread_count() { return omp_get_max_threads(); }

/// Runs `body(i)` for i in [0, n). Iterations must be independent; results
/// are then identical for any thread count.
template <typename Body>
void parallel_for(std::ptrdiff_t n, Body&& body) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    body(i);
  }
}

} // namespace tacsim
