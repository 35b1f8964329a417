#pragma once

#include "splitinf/common.hpp"
#include "splitinf/rng.hpp"
#include "splitinf/split.hpp"

#include <vector>

namespace splitinf {

/// Gaussian-model Fisher information carried by each side of a split.
struct InfoSplit {
  Matrix info_selection;  // X_r'X_r / sigma^2
  Matrix info_inference;  // X_{r^c}'X_{r^c} / sigma^2
  Matrix info_full;       // X'X / sigma^2
};

InfoSplit gaussian_info_split(const Matrix& X, const SplitPlan& plan, double sigma2 = 1.0);

/// Convex, strictly increasing functionals of a positive-definite matrix.
struct PhiCriterion {
  enum class Kind { trace, quadratic_form, max_diag, max_eigenvalue };

  Kind kind = Kind::trace;
  Vector v;  // quadratic_form only

  static PhiCriterion trace() { return {Kind::trace, {}}; }
  static PhiCriterion quadratic_form(Vector v) { return {Kind::quadratic_form, std::move(v)}; }
  static PhiCriterion max_diag() { return {Kind::max_diag, {}}; }
  static PhiCriterion max_eigenvalue() { return {Kind::max_eigenvalue, {}}; }
};

const char* to_string(PhiCriterion::Kind kind);

/// Throws DomainError unless A is symmetric positive definite (relative
/// asymmetry tolerance 1e-10).
double phi_eval(const Matrix& A, const PhiCriterion& criterion);

/// A splitting rule whose inclusion probability is the same for every row.
struct ConstantInclusionStrategy {
  SplitStrategy kind = SplitStrategy::simple;
  IndexSet coin_set;             // coin_flip: the set A
  std::vector<IndexSet> groups;  // stratified: equal-size groups
  Index per_group = 1;           // stratified: draws per group
};

/// Compares phi{I_Y^{-1}/f} with E[phi{I_R^{-1}}] (selection side) and
/// phi{I_Y^{-1}/(1-f)} with E[phi{I_{R^c}^{-1}}] (inference side).
struct Prop1Result {
  double lhs_sel = 0.0;
  double rhs_sel = 0.0;
  double lhs_inf = 0.0;
  double rhs_inf = 0.0;
  double margin_sel = 0.0;  // rhs - lhs
  double margin_inf = 0.0;
  double se_sel = 0.0;  // Monte Carlo standard error of rhs; 0 when exhaustive
  double se_inf = 0.0;
  double jensen_sel = 0.0;  // phi(E[I_R^{-1}])
  double jensen_inf = 0.0;
  bool exhaustive = false;
  bool degenerate = false;  // every split carries the same information
  long n_splits = 0;        // support size when exhaustive, else draws

  /// Both margins exceed n_se standard errors (strictly positive when
  /// exhaustive).
  bool strict(double n_se = 3.0) const;
};

/// Supports of at most this many splits are enumerated exactly.
inline constexpr long kExhaustiveLimit = 10000;

/// The expectation runs over every split when the support is small enough,
/// otherwise over n_mc draws with per-draw streams derived from one value of
/// rng. DUPLEX is rejected since its inclusion probabilities differ by row.
Prop1Result verify_proposition1(const Matrix& X, const ConstantInclusionStrategy& strategy,
                                double f, const PhiCriterion& criterion, long n_mc, Rng& rng,
                                double sigma2 = 1.0, int workers = 0);
Prop1Result verify_proposition1_serial(const Matrix& X, const ConstantInclusionStrategy& strategy,
                                       double f, const PhiCriterion& criterion, long n_mc,
                                       Rng& rng, double sigma2 = 1.0);

/// Number of distinct splits the strategy can produce on n rows, saturated
/// at kExhaustiveLimit + 1.
long strategy_support_size(const ConstantInclusionStrategy& strategy, Index n, double f);

}  // namespace splitinf
