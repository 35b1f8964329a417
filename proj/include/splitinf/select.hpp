#pragma once

#include "splitinf/common.hpp"
#include "splitinf/lasso.hpp"
#include "splitinf/rng.hpp"

#include <limits>
#include <map>
#include <optional>
#include <string>

namespace splitinf {

enum class SelectorTag { knockoff, stability, lasso_support };

const char* to_string(SelectorTag tag);

/// Selected set (indices refer to the caller's columns) plus named
/// diagnostics: "W", "threshold" and "lambda" for the knockoff filter,
/// "freq" and "q" for stability selection, "lambda" for lasso support.
struct SelectionOutcome {
  IndexSet s;
  SelectorTag selector_tag = SelectorTag::lasso_support;
  std::map<std::string, Vector> diagnostics;
};

/// Scales every column to unit Euclidean norm; `center` also removes column
/// means first. Throws DomainError on a constant (or zero) column.
Matrix standardize_columns(const Matrix& X, bool center);
Vector center(const Vector& y);

// ---------------------------------------------------------------- knockoffs

struct KnockoffDesign {
  Matrix X;          // input design with unit-norm columns
  Matrix knockoffs;  // same shape
  double s_eq = 0.0;
};

/// Equi-correlated fixed-X knockoffs: with Sigma = X'X on unit-norm columns
/// and s = min(2 lambda_min(Sigma), 1), the copy satisfies
/// Xk'Xk = Sigma and X'Xk = Sigma - s I.
KnockoffDesign knockoff_construct(const Matrix& X);

/// Smallest t among the nonzero |W_j| with
/// (offset + #{W_j <= -t}) / max(1, #{W_j >= t}) <= q; +inf if none.
double knockoff_threshold(const Vector& W, double q, int offset);

struct KnockoffOptions {
  int n_folds = 10;
  /// Randomly swap each column with its knockoff before fitting, so the
  /// coordinate order cannot favour either copy.
  bool random_swap = true;
  LassoCvOptions cv;
};

/// Knockoff filter with the lasso coefficient-difference statistic at the
/// CV-selected penalty on [X Xk]. y is centered internally.
SelectionOutcome knockoff_filter(const Matrix& X, const Vector& y, double q, int offset, Rng& rng,
                                 const KnockoffOptions& options = {});

// ---------------------------------------------------- stability selection

/// Per-subsample selection size floor(sqrt(pfer (2 cutoff - 1) p)), at least 1.
Index stability_q(Index p, double pfer, double cutoff);

/// Variables in the lasso active set at the first point of the LARS-lasso
/// homotopy where it holds q variables (or the final active set if the path
/// ends sooner). Expects centered y and centered unit-norm columns.
IndexSet lars_first_entrants(const Matrix& X, const Vector& y, Index q);

struct StabilityOptions {
  /// Overrides the per-subsample selection size derived from pfer and cutoff.
  std::optional<Index> q;
  /// <= 0 uses the OpenMP default for the subsample fan-out.
  int workers = 0;
};

/// Subsample frequencies over B half-samples drawn without replacement.
Vector stability_frequencies(const Matrix& X, const Vector& y, Index q, int B, Rng& rng,
                             int workers = 0);
Vector stability_frequencies_serial(const Matrix& X, const Vector& y, Index q, int B, Rng& rng);

SelectionOutcome stability_select(const Matrix& X, const Vector& y, double pfer, double cutoff,
                                  int B, Rng& rng, const StabilityOptions& options = {});

/// {j : freq_j >= cutoff}.
IndexSet stability_set(const Vector& freq, double cutoff);

// ------------------------------------------------------------- dispatch

enum class SelectorKind { knockoff, stability };

struct SelectorConfig {
  SelectorKind kind = SelectorKind::knockoff;
  double knockoff_q = 0.3;
  int knockoff_offset = 1;
  double pfer = 3.0;
  double cutoff = 0.7;
  int B = 50;
  int n_folds = 10;
};

SelectionOutcome run_selector(const SelectorConfig& config, const Matrix& X, const Vector& y,
                              Rng& rng);

}  // namespace splitinf
