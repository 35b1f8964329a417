#include "splitinf/kernels.hpp"

namespace splitinf::kernels {

namespace {

// Rows of X are the columns of Xt, which keeps the inner loop contiguous.
double col_sq_distance(const Matrix& Xt, Index i, Index j) {
  return (Xt.col(i) - Xt.col(j)).squaredNorm();
}

}  // namespace

Matrix pairwise_sq_distances_serial(const Matrix& X) {
  const Index n = X.rows();
  const Matrix Xt = X.transpose();
  Matrix D = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      D(i, j) = D(j, i) = col_sq_distance(Xt, i, j);
    }
  }
  return D;
}

Matrix pairwise_sq_distances(const Matrix& X) {
  const Index n = X.rows();
  const Matrix Xt = X.transpose();
  Matrix D = Matrix::Zero(n, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = col_sq_distance(Xt, i, j);
      D(i, j) = d;
      D(j, i) = d;
    }
  }
  return D;
}

int max_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace splitinf::kernels
