#pragma once

#include "splitinf/common.hpp"

#include <vector>

namespace splitinf {

enum class CiMethod { face_value, ds_holdout, randomised };

/// What the intervals are meant to cover. projection_selection_design is the
/// projection parameter on the rows used for selection, which is what a
/// face-value interval computed on a selection half estimates.
enum class CiTarget {
  full_coef,
  projection_full_design,
  projection_holdout_design,
  projection_selection_design
};

const char* to_string(CiMethod m);
const char* to_string(CiTarget t);

struct Interval {
  Index j = 0;  // column index of the coefficient
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  double length() const { return upper - lower; }
  bool covers(double value) const { return lower <= value && value <= upper; }
};

/// Equal-tailed intervals, one per element of s, in the order of s.
struct IntervalReport {
  std::vector<Interval> records;
  double level = 0.9;
  CiMethod method = CiMethod::face_value;
  CiTarget target = CiTarget::full_coef;
  double sigma_used = 0.0;

  double mean_length() const;
};

/// Classical t_{n-p} intervals for beta_j, j in s, from the full-model OLS
/// fit on (X, y). Used on the same data that drove selection, so it ignores
/// the selection effect.
IntervalReport ci_coef_face_value(const Matrix& X, const Vector& y, const IndexSet& s,
                                  double alpha);

/// The same t-intervals computed on the hold-out rows only.
IntervalReport ci_coef_ds(const Matrix& X2, const Vector& y2, const IndexSet& s, double alpha);

/// e_j'(X'X)^{-1}X'v -+ z_{1-alpha/2} (1 + gamma^{-2})^{1/2} sigma_hat
/// [e_j'(X'X)^{-1}e_j]^{1/2}.
IntervalReport ci_coef_randomised(const Matrix& X, const Vector& v, const IndexSet& s,
                                  double gamma, double sigma_hat, double alpha);

/// Normal-quantile intervals for the projection parameter of X_inf(s):
/// beta_hat_i -+ z_{1-alpha/2} sigma_hd (variance_inflation)^{1/2}
/// [e_i'{X_inf(s)'X_inf(s)}^{-1}e_i]^{1/2}. Records carry the column
/// indices of s.
IntervalReport ci_projection(const Matrix& X_inf, const Vector& y_inf, const IndexSet& s,
                             double alpha, double sigma_hd, double variance_inflation,
                             CiMethod method, CiTarget target);

/// Quantiles used above.
double normal_quantile(double prob);
double student_t_quantile(double df, double prob);

}  // namespace splitinf
