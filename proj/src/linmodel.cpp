#include "splitinf/linmodel.hpp"

#include <cmath>
#include <string>

namespace splitinf {

void Dataset::validate(double tol) const {
  if (y.size() != X.rows()) throw DimensionMismatch("Dataset: len(y) != rows(X)");
  if (mu && mu->size() != X.rows()) throw DimensionMismatch("Dataset: len(mu) != rows(X)");
  if (beta && beta->size() != X.cols()) throw DimensionMismatch("Dataset: len(beta) != cols(X)");
  if (sigma2 && !(*sigma2 > 0.0)) throw DomainError("Dataset: sigma2 must be positive");
  if (mu && beta) {
    const Vector diff = X * (*beta) - *mu;
    const double scale = std::max(1.0, mu->lpNorm<Eigen::Infinity>());
    if (diff.lpNorm<Eigen::Infinity>() > tol * scale) {
      throw DomainError("Dataset: mu != X * beta");
    }
  }
}

LeastSquares::LeastSquares(const Matrix& X) : rows_(X.rows()), cols_(X.cols()) {
  if (cols_ == 0) throw EmptySelection("least squares with no columns");
  if (rows_ < cols_) {
    throw RankDeficient("least squares: " + std::to_string(rows_) + " rows < " +
                        std::to_string(cols_) + " columns");
  }
  qr_.compute(X);
  const auto R = qr_.matrixR().topLeftCorner(cols_, cols_);
  const double largest = std::abs(R(0, 0));
  const double smallest = std::abs(R(cols_ - 1, cols_ - 1));
  if (!(largest > 0.0) || smallest < kRankTol * largest) {
    throw RankDeficient("least squares: numerical rank < " + std::to_string(cols_));
  }
  r_inv_ = R.triangularView<Eigen::Upper>().solve(Matrix::Identity(cols_, cols_));
}

Vector LeastSquares::solve(const Vector& y) const {
  if (y.size() != rows_) throw DimensionMismatch("least squares: len(y) != rows(X)");
  return qr_.solve(y);
}

Matrix LeastSquares::gram_inverse() const {
  const Matrix M = qr_.colsPermutation() * r_inv_;
  return M * M.transpose();
}

Vector LeastSquares::gram_inverse_diag() const {
  const Matrix M = qr_.colsPermutation() * r_inv_;
  return M.rowwise().squaredNorm();
}

Vector LeastSquares::contrast(Index j) const {
  const Matrix M = qr_.colsPermutation() * r_inv_;
  Vector w = Vector::Zero(rows_);
  w.head(cols_) = M.row(j).transpose();
  return qr_.householderQ() * w;
}

OlsFit ols_fit(const Matrix& X, const Vector& y) {
  if (y.size() != X.rows()) throw DimensionMismatch("ols_fit: len(y) != rows(X)");
  if (X.rows() <= X.cols()) throw DomainError("ols_fit: needs rows(X) > cols(X)");
  const LeastSquares ls(X);
  OlsFit fit;
  fit.coef = ls.solve(y);
  fit.residuals = y - X * fit.coef;
  fit.rss = fit.residuals.squaredNorm();
  fit.df = X.rows() - X.cols();
  fit.sigma2_hat = fit.rss / static_cast<double>(fit.df);
  fit.gram_inverse_diag = ls.gram_inverse_diag();
  return fit;
}

ProjectionTarget projection_parameter(const Matrix& X, const IndexSet& s, const Vector& mu,
                                      DesignTag tag) {
  if (s.empty()) throw EmptySelection("projection_parameter: empty selection");
  if (mu.size() != X.rows()) throw DimensionMismatch("projection_parameter: len(mu) != rows(X)");
  check_index_set(s, X.cols(), "projection_parameter");
  const LeastSquares ls(select_columns(X, s));
  return ProjectionTarget{s, ls.solve(mu), tag};
}

double projection_residual_form(const Matrix& X, const IndexSet& s, Index position,
                                const Vector& mu) {
  if (s.size() < 2) throw DomainError("projection_residual_form: needs |s| >= 2");
  if (position < 0 || position >= static_cast<Index>(s.size())) {
    throw DomainError("projection_residual_form: position out of range");
  }
  if (mu.size() != X.rows()) throw DimensionMismatch("projection_residual_form: len(mu)");
  check_index_set(s, X.cols(), "projection_residual_form");

  IndexSet others;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (static_cast<Index>(k) != position) others.push_back(s[k]);
  }
  const Matrix X_others = select_columns(X, others);
  const Vector x_i = X.col(s[static_cast<std::size_t>(position)]);
  const LeastSquares ls(X_others);
  const Vector r = x_i - X_others * ls.solve(x_i);
  const double r2 = r.squaredNorm();
  if (r2 < LeastSquares::kRankTol * LeastSquares::kRankTol * x_i.squaredNorm() || !(r2 > 0.0)) {
    throw RankDeficient("projection_residual_form: column is in the span of the others");
  }
  return r.dot(mu) / r2;
}

Contrast projection_contrast(const Matrix& X, const IndexSet& s, Index position) {
  if (s.empty()) throw EmptySelection("projection_contrast: empty selection");
  if (position < 0 || position >= static_cast<Index>(s.size())) {
    throw DomainError("projection_contrast: position out of range");
  }
  check_index_set(s, X.cols(), "projection_contrast");
  const LeastSquares ls(select_columns(X, s));
  Contrast c;
  c.eta = ls.contrast(position);
  c.norm = c.eta.norm();
  return c;
}

double SigmaEstimate::sigma() const { return std::sqrt(sigma2); }

Matrix toeplitz_covariance(Index p, double rho) {
  Matrix G(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) G(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  }
  return G;
}

Matrix toeplitz_cholesky(Index p, double rho) {
  if (p < 1) throw DomainError("toeplitz_cholesky: p must be >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("toeplitz_cholesky: rho must be in [0, 1)");
  const double c = std::sqrt(1.0 - rho * rho);
  Matrix L = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    L(i, 0) = std::pow(rho, static_cast<double>(i));
    for (Index j = 1; j <= i; ++j) L(i, j) = std::pow(rho, static_cast<double>(i - j)) * c;
  }
  return L;
}

Matrix gen_design(Index n, Index p, double rho, Rng& rng) {
  if (n < 1 || p < 1) throw DomainError("gen_design: n and p must be >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("gen_design: rho must be in [0, 1)");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix X(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) X(i, j) = normal(rng);
  }
  if (rho == 0.0) return X;
  // Row-wise Z L': x_0 = z_0, x_j = rho x_{j-1} + sqrt(1 - rho^2) z_j.
  const double c = std::sqrt(1.0 - rho * rho);
  for (Index j = 1; j < p; ++j) X.col(j) = rho * X.col(j - 1) + c * X.col(j);
  return X;
}

Vector gaussian_response(const Vector& mu, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw DomainError("gaussian_response: sigma must be >= 0");
  return mu + sigma * standard_normal(mu.size(), rng);
}

}  // namespace splitinf
