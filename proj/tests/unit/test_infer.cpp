#include "splitinf/infer.hpp"
#include "splitinf/linmodel.hpp"
#include "splitinf/split.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace splitinf {
namespace {

struct Fixture {
  Matrix X;
  Vector beta;
  Vector mu;
};

Fixture make_fixture(std::uint64_t seed) {
  Rng rng = make_stream(seed);
  Fixture f;
  f.X = gen_design(60, 5, 0.3, rng);
  f.beta = (Vector(5) << 1.0, 0.0, -0.5, 0.2, 0.0).finished();
  f.mu = f.X * f.beta;
  return f;
}

TEST(FaceValue, CalibratedForFixedSet) {
  const Fixture fx = make_fixture(71);
  Rng rng = make_stream(72);
  const IndexSet s{0, 1, 3};
  long covered = 0, total = 0;
  for (int r = 0; r < 5000; ++r) {
    const Vector y = fx.mu + standard_normal(60, rng);
    for (const Interval& iv : ci_coef_face_value(fx.X, y, s, 0.1).records) {
      covered += iv.covers(fx.beta(iv.j));
      ++total;
    }
  }
  EXPECT_NEAR(covered / double(total), 0.9, 0.01);
}

TEST(FaceValue, WidthIsTwiceQuantileTimesSe) {
  const Fixture fx = make_fixture(73);
  Rng rng = make_stream(74);
  const Vector y = fx.mu + standard_normal(60, rng);
  const OlsFit fit = ols_fit(fx.X, y);
  const IntervalReport rep = ci_coef_face_value(fx.X, y, {1, 4}, 0.05);
  const double q = student_t_quantile(55.0, 0.975);
  ASSERT_EQ(rep.records.size(), 2u);
  for (const Interval& iv : rep.records) {
    const double se = std::sqrt(fit.sigma2_hat * fit.gram_inverse_diag(iv.j));
    EXPECT_NEAR(iv.length(), 2.0 * q * se, 1e-12);
    EXPECT_NEAR(iv.estimate, fit.coef(iv.j), 1e-14);
  }
  EXPECT_EQ(rep.method, CiMethod::face_value);
  EXPECT_DOUBLE_EQ(rep.level, 0.95);
}

TEST(HoldOut, NoiselessGivesZeroWidth) {
  const Fixture fx = make_fixture(75);
  const IntervalReport rep = ci_coef_ds(fx.X, fx.mu, {0, 2}, 0.1);
  for (const Interval& iv : rep.records) {
    EXPECT_NEAR(iv.length(), 0.0, 1e-12);
    EXPECT_NEAR(iv.estimate, fx.beta(iv.j), 1e-12);
  }
  EXPECT_THROW(ci_coef_ds(fx.X, fx.mu, {}, 0.1), EmptySelection);
  EXPECT_THROW(ci_coef_ds(fx.X, fx.mu, {0}, 1.5), DomainError);
}

TEST(Randomised, CalibratedWithTrueSigma) {
  const Fixture fx = make_fixture(76);
  Rng rng = make_stream(77);
  const double f = 0.75;
  long covered = 0, total = 0;
  for (int r = 0; r < 5000; ++r) {
    const Vector y = fx.mu + standard_normal(60, rng);
    const UVDecomposition uv = randomised_split(y, f, 1.0, rng);
    for (const Interval& iv : ci_coef_randomised(fx.X, uv.v, {0, 1, 2}, uv.gamma, 1.0, 0.1).records) {
      covered += iv.covers(fx.beta(iv.j));
      ++total;
    }
  }
  EXPECT_NEAR(covered / double(total), 0.9, 0.01);
}

TEST(Randomised, LargeGammaApproachesKnownSigmaWidth) {
  const Fixture fx = make_fixture(78);
  const LeastSquares ls(fx.X);
  const double z = normal_quantile(0.95);
  const Vector d = ls.gram_inverse_diag();
  const IntervalReport rep = ci_coef_randomised(fx.X, fx.mu, {0, 3}, 1e4, 2.0, 0.1);
  for (const Interval& iv : rep.records) {
    EXPECT_NEAR(iv.length() / (2.0 * z * 2.0 * std::sqrt(d(iv.j))), 1.0, 1e-7);
  }
  const IntervalReport small = ci_coef_randomised(fx.X, fx.mu, {0}, 1.0, 2.0, 0.1);
  EXPECT_NEAR(small.records[0].length() / (2.0 * z * 2.0 * std::sqrt(d(0))), std::sqrt(2.0),
              1e-12);
}

TEST(Projection, CoversMisspecifiedTarget) {
  // mu depends on all five columns, but the interval targets the projection
  // onto two of them.
  const Fixture fx = make_fixture(79);
  Rng rng = make_stream(80);
  const IndexSet s{0, 2};
  const Vector target = projection_parameter(fx.X, s, fx.mu).values;
  long covered = 0, total = 0;
  for (int r = 0; r < 4000; ++r) {
    const Vector y = fx.mu + standard_normal(60, rng);
    const IntervalReport rep = ci_projection(fx.X, y, s, 0.1, 1.0, 1.0, CiMethod::ds_holdout,
                                             CiTarget::projection_full_design);
    for (std::size_t k = 0; k < rep.records.size(); ++k) {
      covered += rep.records[k].covers(target(static_cast<Index>(k)));
      ++total;
    }
  }
  EXPECT_NEAR(covered / double(total), 0.9, 0.012);
}

TEST(Projection, RecordsCarryColumnIndices) {
  const Fixture fx = make_fixture(81);
  const IntervalReport rep =
      ci_projection(fx.X, fx.mu, {1, 4}, 0.1, 1.0, 4.0, CiMethod::randomised,
                    CiTarget::projection_full_design);
  ASSERT_EQ(rep.records.size(), 2u);
  EXPECT_EQ(rep.records[0].j, 1);
  EXPECT_EQ(rep.records[1].j, 4);
  const LeastSquares ls(select_columns(fx.X, {1, 4}));
  EXPECT_NEAR(rep.records[1].length(),
              2.0 * normal_quantile(0.95) * 2.0 * std::sqrt(ls.gram_inverse_diag()(1)), 1e-12);
  EXPECT_THROW(ci_projection(fx.X, fx.mu, {0}, 0.1, 1.0, 0.5, CiMethod::randomised,
                             CiTarget::projection_full_design),
               DomainError);
  EXPECT_STREQ(to_string(CiTarget::projection_holdout_design), "projection_holdout_design");
}

}  // namespace
}  // namespace splitinf
