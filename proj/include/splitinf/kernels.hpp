#pragma once

// Data-parallel kernels. Each OpenMP kernel has a `_serial` twin that is the
// reference implementation; the two must agree bit for bit.

#include "splitinf/common.hpp"

#include <exception>
#include <optional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace splitinf::kernels {

/// Squared Euclidean distances between the rows of X (n x n, symmetric).
Matrix pairwise_sq_distances_serial(const Matrix& X);
Matrix pairwise_sq_distances(const Matrix& X);

/// Number of OpenMP threads actually available (1 without OpenMP).
int max_workers();

/// Evaluates fn(i) for i in [0, n) in index order.
template <class T, class F>
std::vector<T> map_indexed_serial(Index n, F&& fn) {
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

/// Evaluates fn(i) for i in [0, n) across `workers` threads (<= 0 means the
/// OpenMP default). Results are stored by index, so the output does not
/// depend on scheduling as long as fn(i) depends only on i. If any task
/// throws, the exception of the lowest failing index is rethrown.
template <class T, class F>
std::vector<T> map_indexed(Index n, F&& fn, int workers = 0) {
  std::vector<std::optional<T>> slots(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (Index i = 0; i < n; ++i) {
    try {
      slots[static_cast<std::size_t>(i)].emplace(fn(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  (void)workers;
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace splitinf::kernels
