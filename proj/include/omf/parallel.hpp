#pragma once

// Index-parallel loop used by the verifier kernels.  The serial policy is the
// reference implementation; the OpenMP path must produce identical results,
// so callers write into per-index slots and reduce afterwards in index order.

#include <cstddef>
#include <exception>
#include <vector>

#include "omf/config.hpp"

namespace omf {

template <class Fn>
void parallel_for(std::size_t n, ExecPolicy policy, Fn&& fn) {
  if (policy == ExecPolicy::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

/// Number of OpenMP threads the parallel policy will use (1 without OpenMP).
int parallel_threads();

}  // namespace omf
