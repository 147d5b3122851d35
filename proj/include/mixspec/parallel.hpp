#pragma once

#include <exception>

#include <omp.h>

namespace mixspec {

/// Runs fn(i) for i in [0, count) with OpenMP, capturing the first exception
/// and rethrowing it after the loop joins. Results must be written to
/// per-index slots so the outcome does not depend on the thread count.
template <typename Fn>
void parallel_for_indexed(long count, Fn&& fn) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(mixspec_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mixspec
