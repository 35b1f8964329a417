#pragma once

#include "splitinf/common.hpp"
#include "splitinf/rng.hpp"

#include <vector>

namespace splitinf {

/// Minimiser of (1/2n)|y - X b|^2 + lambda |b|_1.
struct LassoFit {
  double lambda = 0.0;
  Vector coef;
  long n_iter = 0;  // coordinate sweeps, active-set and full
  bool converged = false;

  Index support_size() const;
  IndexSet support() const;
};

struct LassoOptions {
  /// Absolute KKT tolerance on |X_j'(y - Xb)|/n.
  double kkt_tol = 1e-7;
  long max_sweeps = 100000;
};

/// Coordinate descent with active-set iterations. Terminates only once the
/// KKT conditions hold for every coordinate to options.kkt_tol; throws
/// NoConvergence after options.max_sweeps sweeps.
LassoFit lasso_cd(const Matrix& X, const Vector& y, double lambda, const Vector* init = nullptr,
                  const LassoOptions& options = {});

/// max_j of the KKT residual: (|g_j| - lambda)_+ off the support and
/// |g_j - lambda sign(b_j)| on it, with g = X'(y - Xb)/n.
double lasso_kkt_violation(const Matrix& X, const Vector& y, double lambda, const Vector& coef);

/// Smallest penalty with an all-zero solution: max_j |X_j'y| / n.
double lasso_lambda_max(const Matrix& X, const Vector& y);

/// n_lambda log-spaced points from lambda_max down to min_ratio * lambda_max.
std::vector<double> lasso_lambda_grid(double lambda_max, int n_lambda, double min_ratio);

struct LassoPathOptions {
  /// Inner convergence: max_j (|X_j|^2/n) dbeta_j^2 < tol * |y|^2/n.
  double tol = 1e-7;
  long max_sweeps = 100000;
  /// Truncate the path once the explained fraction of |y|^2 exceeds
  /// max_dev_ratio, or grows by less than min_dev_change relative to itself.
  bool early_stop = true;
  double max_dev_ratio = 0.999;
  double min_dev_change = 1e-5;
};

struct LassoPath {
  std::vector<double> lambdas;  // possibly truncated
  std::vector<Vector> coefs;
  std::vector<long> sweeps;
};

/// Warm-started path over a decreasing grid.
LassoPath lasso_path(const Matrix& X, const Vector& y, const std::vector<double>& lambdas,
                     const LassoPathOptions& options = {});

struct LassoCvOptions {
  int n_lambda = 100;
  double min_ratio = 1e-3;
  LassoPathOptions path;
};

struct LassoCv {
  double lambda_hat = 0.0;
  LassoFit fit;  // full-data fit at lambda_hat
  std::vector<double> lambdas;
  std::vector<double> cv_error;  // pooled out-of-fold mean squared error
  std::size_t best = 0;
};

/// K-fold cross-validated lasso. Folds come from a random permutation drawn
/// from `rng`; fold paths reuse the (possibly truncated) full-data grid and
/// hold their last fit beyond their own truncation point.
LassoCv lasso_cv(const Matrix& X, const Vector& y, int n_folds, Rng& rng,
                 const LassoCvOptions& options = {});

}  // namespace splitinf
