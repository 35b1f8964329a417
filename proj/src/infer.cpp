#include "splitinf/infer.hpp"

#include "splitinf/linmodel.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>

namespace splitinf {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("confidence level: alpha must be in (0, 1)");
}

void check_selection(const IndexSet& s, Index p, const char* what) {
  if (s.empty()) throw EmptySelection(std::string(what) + ": empty selection");
  check_index_set(s, p, what);
}

IntervalReport build(const IndexSet& s, const Vector& estimate, const Vector& se, double quantile,
                     double alpha, CiMethod method, CiTarget target, double sigma_used,
                     bool estimate_by_column) {
  IntervalReport report;
  report.level = 1.0 - alpha;
  report.method = method;
  report.target = target;
  report.sigma_used = sigma_used;
  report.records.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Index at = estimate_by_column ? s[k] : static_cast<Index>(k);
    const double half = quantile * se(at);
    report.records.push_back({s[k], estimate(at), estimate(at) - half, estimate(at) + half});
  }
  return report;
}

IntervalReport t_intervals(const Matrix& X, const Vector& y, const IndexSet& s, double alpha,
                           CiMethod method, const char* what) {
  check_alpha(alpha);
  check_selection(s, X.cols(), what);
  const OlsFit fit = ols_fit(X, y);
  const double sigma = std::sqrt(fit.sigma2_hat);
  const Vector se = sigma * fit.gram_inverse_diag.cwiseSqrt();
  const double q = student_t_quantile(static_cast<double>(fit.df), 1.0 - alpha / 2.0);
  return build(s, fit.coef, se, q, alpha, method, CiTarget::full_coef, sigma, true);
}

}  // namespace

const char* to_string(CiMethod m) {
  switch (m) {
    case CiMethod::face_value:
      return "face_value";
    case CiMethod::ds_holdout:
      return "ds_holdout";
    case CiMethod::randomised:
      return "randomised";
  }
  return "?";
}

const char* to_string(CiTarget t) {
  switch (t) {
    case CiTarget::full_coef:
      return "full_coef";
    case CiTarget::projection_full_design:
      return "projection_full_design";
    case CiTarget::projection_holdout_design:
      return "projection_holdout_design";
    case CiTarget::projection_selection_design:
      return "projection_selection_design";
  }
  return "?";
}

double IntervalReport::mean_length() const {
  if (records.empty()) return 0.0;
  double total = 0.0;
  for (const auto& r : records) total += r.length();
  return total / static_cast<double>(records.size());
}

double normal_quantile(double prob) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

double student_t_quantile(double df, double prob) {
  return boost::math::quantile(boost::math::students_t_distribution<double>(df), prob);
}

IntervalReport ci_coef_face_value(const Matrix& X, const Vector& y, const IndexSet& s,
                                  double alpha) {
  return t_intervals(X, y, s, alpha, CiMethod::face_value, "ci_coef_face_value");
}

IntervalReport ci_coef_ds(const Matrix& X2, const Vector& y2, const IndexSet& s, double alpha) {
  return t_intervals(X2, y2, s, alpha, CiMethod::ds_holdout, "ci_coef_ds");
}

IntervalReport ci_coef_randomised(const Matrix& X, const Vector& v, const IndexSet& s,
                                  double gamma, double sigma_hat, double alpha) {
  check_alpha(alpha);
  check_selection(s, X.cols(), "ci_coef_randomised");
  if (!(gamma > 0.0)) throw DomainError("ci_coef_randomised: gamma must be positive");
  if (!(sigma_hat > 0.0)) throw DomainError("ci_coef_randomised: sigma_hat must be positive");
  if (v.size() != X.rows()) throw DimensionMismatch("ci_coef_randomised: len(v) != rows(X)");
  const LeastSquares ls(X);
  const Vector coef = ls.solve(v);
  const double scale = std::sqrt(1.0 + 1.0 / (gamma * gamma)) * sigma_hat;
  const Vector se = scale * ls.gram_inverse_diag().cwiseSqrt();
  return build(s, coef, se, normal_quantile(1.0 - alpha / 2.0), alpha, CiMethod::randomised,
               CiTarget::full_coef, sigma_hat, true);
}

IntervalReport ci_projection(const Matrix& X_inf, const Vector& y_inf, const IndexSet& s,
                             double alpha, double sigma_hd, double variance_inflation,
                             CiMethod method, CiTarget target) {
  check_alpha(alpha);
  check_selection(s, X_inf.cols(), "ci_projection");
  if (!(sigma_hd > 0.0)) throw DomainError("ci_projection: sigma must be positive");
  if (!(variance_inflation >= 1.0)) throw DomainError("ci_projection: variance_inflation < 1");
  if (y_inf.size() != X_inf.rows()) throw DimensionMismatch("ci_projection: len(y) != rows(X)");
  const LeastSquares ls(select_columns(X_inf, s));
  const Vector coef = ls.solve(y_inf);
  const Vector se = std::sqrt(variance_inflation) * sigma_hd * ls.gram_inverse_diag().cwiseSqrt();
  return build(s, coef, se, normal_quantile(1.0 - alpha / 2.0), alpha, method, target, sigma_hd,
               false);
}

}  // namespace splitinf
