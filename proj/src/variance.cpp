#include "splitinf/lasso.hpp"
#include "splitinf/linmodel.hpp"
#include "splitinf/select.hpp"

#include <string>

namespace splitinf {

SigmaEstimate estimate_sigma(const Matrix& X, const Vector& y, SigmaMode mode, Rng& rng,
                             const SigmaOptions& options) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (y.size() != n) throw DimensionMismatch("estimate_sigma: len(y) != rows(X)");
  if (mode == SigmaMode::automatic) {
    mode = static_cast<double>(p) < options.auto_ratio * static_cast<double>(n) ? SigmaMode::classical
                                                                                : SigmaMode::high_dim;
  }

  SigmaEstimate est;
  est.mode_used = mode;
  if (mode == SigmaMode::classical) {
    if (p >= n) throw DomainError("estimate_sigma: classical mode needs p < n");
    const OlsFit fit = ols_fit(X, y);
    est.sigma2 = fit.sigma2_hat;
    est.support_size = p;
    return est;
  }

  const Matrix Xs = standardize_columns(X, false);
  const LassoCv cv = lasso_cv(Xs, y, options.n_folds, rng);
  const Index support = cv.fit.support_size();
  if (n - support <= 0) {
    throw DegenerateFit("estimate_sigma: lasso support " + std::to_string(support) +
                        " leaves no residual degrees of freedom");
  }
  const double rss = (y - Xs * cv.fit.coef).squaredNorm();
  if (!(rss > 0.0)) throw DegenerateFit("estimate_sigma: lasso fit interpolates the data");
  est.sigma2 = rss / static_cast<double>(n - support);
  est.support_size = support;
  est.lambda = cv.lambda_hat;
  return est;
}

}  // namespace splitinf
