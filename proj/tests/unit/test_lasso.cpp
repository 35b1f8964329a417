#include "splitinf/lasso.hpp"
#include "splitinf/linmodel.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace splitinf {
namespace {

double soft_threshold(double z, double t) {
  return z > t ? z - t : (z < -t ? z + t : 0.0);
}

TEST(LassoCd, OrthonormalDesignSoftThresholds) {
  Rng rng = make_stream(41);
  const Index n = 60, p = 8;
  const Eigen::HouseholderQR<Matrix> qr(gen_design(n, p, 0.0, rng));
  const Matrix X = std::sqrt(double(n)) * (qr.householderQ() * Matrix::Identity(n, p));
  const Vector y = X * Vector::LinSpaced(p, -1.0, 1.0) + standard_normal(n, rng);
  for (double lambda : {0.01, 0.1, 0.4, 0.9}) {
    const LassoFit fit = lasso_cd(X, y, lambda);
    ASSERT_TRUE(fit.converged);
    for (Index j = 0; j < p; ++j) {
      EXPECT_NEAR(fit.coef(j), soft_threshold(X.col(j).dot(y) / n, lambda), 1e-6);
    }
  }
}

TEST(LassoCd, KktOnRandomInstances) {
  Rng rng = make_stream(42);
  for (int r = 0; r < 100; ++r) {
    const Index n = 30 + r % 40, p = 5 + r % 60;
    const Matrix X = gen_design(n, p, 0.1 * (r % 9), rng);
    const Vector y = X.leftCols(std::min<Index>(3, p)) * Vector::Ones(std::min<Index>(3, p)) +
                     standard_normal(n, rng);
    const double lambda = lasso_lambda_max(X, y) * (0.02 + 0.9 * (r % 10) / 10.0);
    const LassoFit fit = lasso_cd(X, y, lambda);
    EXPECT_LE(lasso_kkt_violation(X, y, lambda, fit.coef), 1e-7) << "instance " << r;
  }
}

TEST(LassoCd, Limits) {
  Rng rng = make_stream(43);
  const Matrix X = gen_design(50, 6, 0.3, rng);
  const Vector y = standard_normal(50, rng);
  EXPECT_LT((lasso_cd(X, y, 0.0).coef - ols_fit(X, y).coef).lpNorm<Eigen::Infinity>(), 1e-6);
  const double lmax = lasso_lambda_max(X, y);
  EXPECT_EQ(lasso_cd(X, y, lmax).support_size(), 0);
  EXPECT_EQ(lasso_cd(X, y, 2.0 * lmax).support_size(), 0);
  EXPECT_GT(lasso_cd(X, y, 0.9 * lmax).support_size(), 0);
  EXPECT_THROW(lasso_cd(X, y, -1.0), DomainError);
}

TEST(LassoCd, WarmStartReachesSameSolution) {
  Rng rng = make_stream(44);
  const Matrix X = gen_design(80, 20, 0.5, rng);
  const Vector y = X.col(0) - X.col(3) + standard_normal(80, rng);
  const LassoFit cold = lasso_cd(X, y, 0.05);
  const Vector init = Vector::Constant(20, 0.3);
  const LassoFit warm = lasso_cd(X, y, 0.05, &init);
  EXPECT_LT((cold.coef - warm.coef).lpNorm<Eigen::Infinity>(), 1e-5);
}

TEST(LassoGrid, LogSpaced) {
  const auto grid = lasso_lambda_grid(2.0, 5, 1e-2);
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_DOUBLE_EQ(grid.front(), 2.0);
  EXPECT_NEAR(grid.back(), 0.02, 1e-15);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    EXPECT_NEAR(grid[k] / grid[k - 1], std::pow(1e-2, 0.25), 1e-12);
  }
}

TEST(LassoPath, MatchesIndependentFits) {
  Rng rng = make_stream(45);
  const Matrix X = gen_design(60, 15, 0.2, rng);
  const Vector y = X.col(2) * 2.0 + standard_normal(60, rng);
  LassoPathOptions opts;
  opts.early_stop = false;
  opts.tol = 1e-12;
  const auto grid = lasso_lambda_grid(lasso_lambda_max(X, y), 20, 1e-2);
  const LassoPath path = lasso_path(X, y, grid, opts);
  ASSERT_EQ(path.coefs.size(), grid.size());
  for (std::size_t k = 0; k < grid.size(); k += 4) {
    EXPECT_LT((path.coefs[k] - lasso_cd(X, y, grid[k]).coef).lpNorm<Eigen::Infinity>(), 1e-5);
  }
}

TEST(LassoCv, PureNoiseSelectsLittle) {
  Rng rng = make_stream(46);
  std::vector<Index> sizes;
  for (int r = 0; r < 200; ++r) {
    const Matrix X = gen_design(200, 50, 0.0, rng);
    const Vector y = standard_normal(200, rng);
    sizes.push_back(lasso_cv(X, y, 10, rng).fit.support_size());
  }
  std::nth_element(sizes.begin(), sizes.begin() + 100, sizes.end());
  EXPECT_LE(sizes[100], 5);
}

TEST(LassoCv, StrongSignalAlwaysFound) {
  Rng rng = make_stream(47);
  int found = 0;
  for (int r = 0; r < 200; ++r) {
    const Matrix X = gen_design(200, 50, 0.0, rng);
    const Vector y = 10.0 * X.col(0) + standard_normal(200, rng);
    const LassoCv cv = lasso_cv(X, y, 10, rng);
    found += cv.fit.coef(0) != 0.0 ? 1 : 0;
    EXPECT_EQ(cv.lambdas.size(), cv.cv_error.size());
    EXPECT_DOUBLE_EQ(cv.lambda_hat, cv.lambdas[cv.best]);
  }
  EXPECT_GE(found, 198);
}

}  // namespace
}  // namespace splitinf
