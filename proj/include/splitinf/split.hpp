#pragma once

#include "splitinf/common.hpp"
#include "splitinf/rng.hpp"

#include <vector>

namespace splitinf {

enum class SplitStrategy { simple, duplex, coin_flip, stratified };

const char* to_string(SplitStrategy s);

/// Partition of {0..n-1} into a selection part and an inference part.
struct SplitPlan {
  IndexSet selection;
  IndexSet inference;
  double fraction = 0.5;
  SplitStrategy strategy = SplitStrategy::simple;

  Index n() const { return static_cast<Index>(selection.size() + inference.size()); }

  /// Throws DomainError unless selection and inference partition {0..n-1}.
  void validate(Index n) const;
};

/// (1/f - 1)^{1/2}, the noise scale whose randomised split keeps a fraction
/// f = 1/(1 + gamma^2) of the information for selection.
double gamma_from_fraction(double f);

/// u = y + gamma sigma_hat z for selection, v = y - sigma_hat z / gamma for
/// inference.
struct UVDecomposition {
  Vector u;
  Vector v;
  double gamma = 1.0;
  double sigma_hat = 1.0;
  Vector z;

  /// (u + gamma^2 v) / (1 + gamma^2), which recovers y.
  Vector reconstruct() const;
};

UVDecomposition randomised_split(const Vector& y, double f, double sigma_hat, Rng& rng);

/// floor(f n + 1/2).
Index split_size(Index n, double f);

/// Uniform over subsets of size split_size(n, f).
SplitPlan simple_split(Index n, double f, Rng& rng);

/// Deterministic DUPLEX allocation on the rows of X. The farthest pair of
/// rows goes to selection and the next farthest remaining pair to inference;
/// then the sets take turns, starting with selection, each taking the
/// remaining row whose minimum distance to its current members is largest.
/// Once the smaller set reaches its quota the rest go to the other set.
/// Ties go to the lowest row index (then the lowest partner index).
SplitPlan duplex_split(const Matrix& X, double f);

/// Same allocation from a precomputed squared-distance matrix.
SplitPlan duplex_split_from_distances(const Matrix& sq_dist, double f);

/// (A, A^c) or (A^c, A) with probability 1/2 each; A must be a proper,
/// non-empty subset of {0..n-1}.
SplitPlan coin_flip_split(Index n, const IndexSet& A, Rng& rng);

/// m uniform draws from each of the equal-size groups go to selection.
SplitPlan stratified_split(const std::vector<IndexSet>& groups, Index m, Rng& rng);

}  // namespace splitinf
