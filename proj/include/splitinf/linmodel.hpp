#pragma once

#include "splitinf/common.hpp"
#include "splitinf/rng.hpp"

#include <optional>

namespace splitinf {

/// Response, fixed design and (for simulations) the generating truth.
struct Dataset {
  Vector y;
  Matrix X;
  std::optional<Vector> mu;
  std::optional<Vector> beta;
  std::optional<double> sigma2;

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }

  /// Throws DimensionMismatch / DomainError if the fields are inconsistent.
  void validate(double tol = 1e-8) const;
};

/// Pivoted-QR least squares with an explicit rank check: the problem is
/// rank deficient when the smallest |R_kk| falls below kRankTol times the
/// largest.
class LeastSquares {
 public:
  static constexpr double kRankTol = 1e-10;

  explicit LeastSquares(const Matrix& X);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  Vector solve(const Vector& y) const;

  /// (X'X)^{-1} assembled from the triangular factor.
  Matrix gram_inverse() const;
  Vector gram_inverse_diag() const;

  /// X (X'X)^{-1} e_j, computed as Q R^{-T} P' e_j.
  Vector contrast(Index j) const;

 private:
  Index rows_;
  Index cols_;
  Eigen::ColPivHouseholderQR<Matrix> qr_;
  Matrix r_inv_;  // upper triangular R^{-1}
};

struct OlsFit {
  Vector coef;
  Vector residuals;
  double rss = 0.0;
  double sigma2_hat = 0.0;
  Vector gram_inverse_diag;  // diag (X'X)^{-1}
  Index df = 0;              // n - p
};

/// Ordinary least squares; needs rows(X) > cols(X) and full column rank.
OlsFit ols_fit(const Matrix& X, const Vector& y);

enum class DesignTag { full_design, holdout_design };

struct ProjectionTarget {
  IndexSet s;
  Vector values;
  DesignTag design_tag = DesignTag::full_design;
};

/// {X(s)'X(s)}^{-1} X(s)' mu.
ProjectionTarget projection_parameter(const Matrix& X, const IndexSet& s, const Vector& mu,
                                      DesignTag tag = DesignTag::full_design);

/// Component `position` of the projection parameter written as r'mu / |r|^2,
/// r the residual of X(s)_position regressed on the other selected columns.
double projection_residual_form(const Matrix& X, const IndexSet& s, Index position,
                                const Vector& mu);

struct Contrast {
  Vector eta;
  double norm = 0.0;
};

/// eta = X(s){X(s)'X(s)}^{-1} e_position, so that eta'mu is the matching
/// component of the projection parameter.
Contrast projection_contrast(const Matrix& X, const IndexSet& s, Index position);

enum class SigmaMode { automatic, classical, high_dim };

struct SigmaOptions {
  /// automatic picks classical iff p < auto_ratio * n.
  double auto_ratio = 0.25;
  int n_folds = 10;
};

struct SigmaEstimate {
  double sigma2 = 0.0;
  SigmaMode mode_used = SigmaMode::classical;
  Index support_size = 0;  // lasso support for high_dim, p for classical
  double lambda = 0.0;     // CV-selected penalty for high_dim

  double sigma() const;
};

/// Classical RSS/(n-p) or, in high dimensions, RSS/(n - s_hat) of a
/// cross-validated lasso fit. The rng only feeds the CV fold assignment.
SigmaEstimate estimate_sigma(const Matrix& X, const Vector& y, SigmaMode mode, Rng& rng,
                             const SigmaOptions& options = {});

/// Toeplitz covariance rho^{|i-j|}.
Matrix toeplitz_covariance(Index p, double rho);

/// Lower Cholesky factor of toeplitz_covariance(p, rho), in closed form:
/// L(i,0) = rho^i and L(i,j) = rho^{i-j} sqrt(1-rho^2) for 1 <= j <= i.
Matrix toeplitz_cholesky(Index p, double rho);

/// n rows drawn i.i.d. from N(0, Gamma), Gamma = toeplitz_covariance(p, rho),
/// as Z L' with L = toeplitz_cholesky. Z is filled row by row, and the
/// product is applied through the factor's first-order recursion.
Matrix gen_design(Index n, Index p, double rho, Rng& rng);

/// mu + sigma * N(0, I).
Vector gaussian_response(const Vector& mu, double sigma, Rng& rng);

}  // namespace splitinf
