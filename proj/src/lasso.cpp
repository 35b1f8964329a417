#include "splitinf/lasso.hpp"

#include "splitinf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace splitinf {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Residual-updating coordinate descent restricted to an active set, with a
// full gradient pass to admit KKT violators.
class CoordinateSolver {
 public:
  CoordinateSolver(const Matrix& X, const Vector& y)
      : X_(X),
        y_(y),
        inv_n_(1.0 / static_cast<double>(X.rows())),
        col_sq_(X.colwise().squaredNorm().transpose() * inv_n_),
        beta_(Vector::Zero(X.cols())),
        r_(y),
        in_active_(static_cast<std::size_t>(X.cols()), false) {
    for (Index j = 0; j < X.cols(); ++j) {
      if (!(col_sq_(j) > 0.0)) {
        throw DomainError("lasso: column " + std::to_string(j) + " is identically zero");
      }
    }
  }

  void warm_start(const Vector& init) {
    if (init.size() != X_.cols()) throw DimensionMismatch("lasso: len(init) != cols(X)");
    beta_ = init;
    r_ = y_ - X_ * beta_;
    active_.clear();
    std::fill(in_active_.begin(), in_active_.end(), false);
    for (Index j = 0; j < X_.cols(); ++j) {
      if (beta_(j) != 0.0) activate(j);
    }
  }

  const Vector& beta() const { return beta_; }
  const Vector& residual() const { return r_; }

  // Returns the number of sweeps. With strict = true the loop ends only when
  // every coordinate meets the KKT conditions to kkt_tol; otherwise it ends
  // when the active-set iterations settle and no inactive coordinate violates.
  long solve(double lambda, double inner_tol, bool strict, double kkt_tol, long max_sweeps) {
    long sweeps = 0;
    double thresh = inner_tol;
    for (;;) {
      for (;;) {
        double max_change = 0.0;
        for (Index j : active_) update(j, lambda, max_change);
        if (++sweeps > max_sweeps) throw_no_convergence(lambda, max_sweeps);
        if (max_change < thresh) break;
      }

      const Vector g = (X_.transpose() * r_) * inv_n_;
      bool added = false;
      double worst_active = 0.0;
      for (Index j = 0; j < X_.cols(); ++j) {
        const double b = beta_(j);
        const double violation = b == 0.0 ? std::abs(g(j)) - lambda
                                          : std::abs(g(j) - (b > 0.0 ? lambda : -lambda));
        const double allowed = strict ? kkt_tol : 0.0;
        if (violation <= allowed) continue;
        if (!in_active_[static_cast<std::size_t>(j)]) {
          activate(j);
          added = true;
        } else {
          worst_active = std::max(worst_active, violation);
        }
      }
      if (++sweeps > max_sweeps) throw_no_convergence(lambda, max_sweeps);
      if (added) continue;
      if (!strict || worst_active <= kkt_tol) return sweeps;
      thresh *= 1e-2;
      if (thresh < std::numeric_limits<double>::min()) throw_no_convergence(lambda, max_sweeps);
    }
  }

 private:
  void activate(Index j) {
    in_active_[static_cast<std::size_t>(j)] = true;
    active_.insert(std::upper_bound(active_.begin(), active_.end(), j), j);
  }

  void update(Index j, double lambda, double& max_change) {
    const auto xj = X_.col(j);
    const double old = beta_(j);
    const double z = xj.dot(r_) * inv_n_ + col_sq_(j) * old;
    const double fresh = soft_threshold(z, lambda) / col_sq_(j);
    if (fresh == old) return;
    const double d = fresh - old;
    r_.noalias() -= d * xj;
    beta_(j) = fresh;
    max_change = std::max(max_change, col_sq_(j) * d * d);
  }

  [[noreturn]] static void throw_no_convergence(double lambda, long max_sweeps) {
    throw NoConvergence("lasso: no convergence at lambda = " + std::to_string(lambda) +
                        " after " + std::to_string(max_sweeps) + " sweeps");
  }

  const Matrix& X_;
  const Vector& y_;
  double inv_n_;
  Vector col_sq_;
  Vector beta_;
  Vector r_;
  std::vector<bool> in_active_;
  IndexSet active_;
};

}  // namespace

Index LassoFit::support_size() const { return (coef.array() != 0.0).count(); }

IndexSet LassoFit::support() const {
  IndexSet s;
  for (Index j = 0; j < coef.size(); ++j) {
    if (coef(j) != 0.0) s.push_back(j);
  }
  return s;
}

LassoFit lasso_cd(const Matrix& X, const Vector& y, double lambda, const Vector* init,
                  const LassoOptions& options) {
  if (y.size() != X.rows()) throw DimensionMismatch("lasso_cd: len(y) != rows(X)");
  if (!(lambda >= 0.0)) throw DomainError("lasso_cd: lambda must be >= 0");
  CoordinateSolver solver(X, y);
  if (init) solver.warm_start(*init);
  const double inner = 1e-2 * options.kkt_tol * options.kkt_tol;
  LassoFit fit;
  fit.lambda = lambda;
  fit.n_iter = solver.solve(lambda, inner, true, options.kkt_tol, options.max_sweeps);
  fit.coef = solver.beta();
  fit.converged = true;
  return fit;
}

double lasso_kkt_violation(const Matrix& X, const Vector& y, double lambda, const Vector& coef) {
  const Vector g = X.transpose() * (y - X * coef) / static_cast<double>(X.rows());
  double worst = 0.0;
  for (Index j = 0; j < X.cols(); ++j) {
    const double b = coef(j);
    const double v = b == 0.0 ? std::abs(g(j)) - lambda
                              : std::abs(g(j) - (b > 0.0 ? lambda : -lambda));
    worst = std::max(worst, v);
  }
  return worst;
}

double lasso_lambda_max(const Matrix& X, const Vector& y) {
  return (X.transpose() * y).cwiseAbs().maxCoeff() / static_cast<double>(X.rows());
}

std::vector<double> lasso_lambda_grid(double lambda_max, int n_lambda, double min_ratio) {
  if (n_lambda < 1) throw DomainError("lasso_lambda_grid: n_lambda must be >= 1");
  if (!(min_ratio > 0.0 && min_ratio < 1.0)) {
    throw DomainError("lasso_lambda_grid: min_ratio must be in (0, 1)");
  }
  std::vector<double> grid(static_cast<std::size_t>(n_lambda));
  if (n_lambda == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  const double step = std::log(min_ratio) / static_cast<double>(n_lambda - 1);
  for (int k = 0; k < n_lambda; ++k) {
    grid[static_cast<std::size_t>(k)] = lambda_max * std::exp(step * k);
  }
  return grid;
}

LassoPath lasso_path(const Matrix& X, const Vector& y, const std::vector<double>& lambdas,
                     const LassoPathOptions& options) {
  if (y.size() != X.rows()) throw DimensionMismatch("lasso_path: len(y) != rows(X)");
  LassoPath path;
  const double null_dev = y.squaredNorm();
  if (!(null_dev > 0.0)) {
    for (double lam : lambdas) {
      path.lambdas.push_back(lam);
      path.coefs.push_back(Vector::Zero(X.cols()));
      path.sweeps.push_back(0);
    }
    return path;
  }
  CoordinateSolver solver(X, y);
  const double thresh = options.tol * null_dev / static_cast<double>(X.rows());
  double prev_dev = 0.0;
  for (double lam : lambdas) {
    const long sweeps = solver.solve(lam, thresh, false, 0.0, options.max_sweeps);
    path.lambdas.push_back(lam);
    path.coefs.push_back(solver.beta());
    path.sweeps.push_back(sweeps);
    if (!options.early_stop) continue;
    const double dev = 1.0 - solver.residual().squaredNorm() / null_dev;
    if (dev > options.max_dev_ratio) break;
    if (path.lambdas.size() > 1 && dev - prev_dev < options.min_dev_change * dev) break;
    prev_dev = dev;
  }
  return path;
}

LassoCv lasso_cv(const Matrix& X, const Vector& y, int n_folds, Rng& rng,
                 const LassoCvOptions& options) {
  const Index n = X.rows();
  if (y.size() != n) throw DimensionMismatch("lasso_cv: len(y) != rows(X)");
  if (n_folds < 2 || n_folds > n) throw DomainError("lasso_cv: n_folds must be in [2, n]");

  const double lmax = lasso_lambda_max(X, y);
  LassoCv out;
  const IndexSet perm = random_permutation(n, rng);
  if (!(lmax > 0.0)) {
    out.lambdas = {0.0};
    out.cv_error = {y.squaredNorm() / static_cast<double>(n)};
    out.fit.coef = Vector::Zero(X.cols());
    out.fit.converged = true;
    return out;
  }

  const auto grid = lasso_lambda_grid(lmax, options.n_lambda, options.min_ratio);
  const LassoPath full = lasso_path(X, y, grid, options.path);
  out.lambdas = full.lambdas;
  const std::size_t n_lam = out.lambdas.size();

  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    fold_of[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        static_cast<int>(i % n_folds);
  }

  const auto fold_sse = kernels::map_indexed<std::vector<double>>(n_folds, [&](Index fold) {
    IndexSet train;
    IndexSet test;
    for (Index i = 0; i < n; ++i) {
      (fold_of[static_cast<std::size_t>(i)] == fold ? test : train).push_back(i);
    }
    const Matrix X_train = select_rows(X, train);
    const Vector y_train = select_rows(y, train);
    const Matrix X_test = select_rows(X, test);
    const Vector y_test = select_rows(y, test);
    const LassoPath fp = lasso_path(X_train, y_train, out.lambdas, options.path);
    std::vector<double> sse(n_lam);
    for (std::size_t k = 0; k < n_lam; ++k) {
      const Vector& b = fp.coefs[std::min(k, fp.coefs.size() - 1)];
      sse[k] = (y_test - X_test * b).squaredNorm();
    }
    return sse;
  });

  out.cv_error.assign(n_lam, 0.0);
  for (const auto& sse : fold_sse) {
    for (std::size_t k = 0; k < n_lam; ++k) out.cv_error[k] += sse[k];
  }
  for (double& e : out.cv_error) e /= static_cast<double>(n);
  out.best = static_cast<std::size_t>(
      std::min_element(out.cv_error.begin(), out.cv_error.end()) - out.cv_error.begin());
  out.lambda_hat = out.lambdas[out.best];
  out.fit.lambda = out.lambda_hat;
  out.fit.coef = full.coefs[out.best];
  out.fit.n_iter = 0;
  for (std::size_t k = 0; k <= out.best; ++k) out.fit.n_iter += full.sweeps[k];
  out.fit.converged = true;
  return out;
}

}  // namespace splitinf
