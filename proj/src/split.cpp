#include "splitinf/split.hpp"

#include "splitinf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace splitinf {

const char* to_string(SplitStrategy s) {
  switch (s) {
    case SplitStrategy::simple:
      return "simple";
    case SplitStrategy::duplex:
      return "duplex";
    case SplitStrategy::coin_flip:
      return "coin_flip";
    case SplitStrategy::stratified:
      return "stratified";
  }
  return "?";
}

void SplitPlan::validate(Index n) const {
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const IndexSet* part : {&selection, &inference}) {
    check_index_set(*part, n, "SplitPlan");
    for (Index i : *part) ++seen[static_cast<std::size_t>(i)];
  }
  for (Index i = 0; i < n; ++i) {
    if (seen[static_cast<std::size_t>(i)] != 1) {
      throw DomainError("SplitPlan: index " + std::to_string(i) + " not covered exactly once");
    }
  }
}

double gamma_from_fraction(double f) {
  if (!(f > 0.0 && f < 1.0)) throw DomainError("gamma_from_fraction: f must be in (0, 1)");
  return std::sqrt(1.0 / f - 1.0);
}

Vector UVDecomposition::reconstruct() const {
  const double g2 = gamma * gamma;
  return (u + g2 * v) / (1.0 + g2);
}

UVDecomposition randomised_split(const Vector& y, double f, double sigma_hat, Rng& rng) {
  if (!(sigma_hat > 0.0)) throw DomainError("randomised_split: sigma_hat must be positive");
  UVDecomposition uv;
  uv.gamma = gamma_from_fraction(f);
  uv.sigma_hat = sigma_hat;
  uv.z = standard_normal(y.size(), rng);
  const Vector w = sigma_hat * uv.z;
  uv.u = y + uv.gamma * w;
  uv.v = y - w / uv.gamma;
  return uv;
}

Index split_size(Index n, double f) {
  return static_cast<Index>(std::floor(f * static_cast<double>(n) + 0.5));
}

SplitPlan simple_split(Index n, double f, Rng& rng) {
  if (!(f > 0.0 && f < 1.0)) throw DomainError("simple_split: f must be in (0, 1)");
  const Index k = split_size(n, f);
  if (k < 1 || k >= n) throw DomainError("simple_split: need 1 <= round(f n) < n");
  SplitPlan plan;
  plan.selection = sample_without_replacement(n, k, rng);
  plan.inference = complement(plan.selection, n);
  plan.fraction = f;
  plan.strategy = SplitStrategy::simple;
  return plan;
}

SplitPlan duplex_split(const Matrix& X, double f) {
  if (X.rows() < 4) throw DomainError("duplex_split: needs at least 4 rows");
  return duplex_split_from_distances(kernels::pairwise_sq_distances(X), f);
}

SplitPlan duplex_split_from_distances(const Matrix& D, double f) {
  const Index n = D.rows();
  if (n < 4) throw DomainError("duplex_split: needs at least 4 rows");
  if (!(f > 0.0 && f < 1.0)) throw DomainError("duplex_split: f must be in (0, 1)");
  const Index quota_sel = split_size(n, f);
  const Index quota_inf = n - quota_sel;
  if (quota_sel < 2 || quota_inf < 2) {
    throw DomainError("duplex_split: both sets need room for their initial pair");
  }

  std::vector<bool> assigned(static_cast<std::size_t>(n), false);
  const auto farthest_pair = [&]() {
    double best = -1.0;
    Index bi = -1;
    Index bj = -1;
    for (Index i = 0; i < n; ++i) {
      if (assigned[static_cast<std::size_t>(i)]) continue;
      for (Index j = i + 1; j < n; ++j) {
        if (assigned[static_cast<std::size_t>(j)]) continue;
        if (D(i, j) > best) {
          best = D(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    assigned[static_cast<std::size_t>(bi)] = assigned[static_cast<std::size_t>(bj)] = true;
    return std::pair<Index, Index>{bi, bj};
  };

  // Minimum distance from each row to the current members of each set.
  const double inf = std::numeric_limits<double>::infinity();
  Vector to_sel = Vector::Constant(n, inf);
  Vector to_inf = Vector::Constant(n, inf);
  IndexSet sel;
  IndexSet inf_set;
  const auto join = [&](IndexSet& set, Vector& to_set, Index k) {
    set.push_back(k);
    assigned[static_cast<std::size_t>(k)] = true;
    to_set = to_set.cwiseMin(D.col(k));
  };

  const auto [a, b] = farthest_pair();
  join(sel, to_sel, a);
  join(sel, to_sel, b);
  const auto [c, d] = farthest_pair();
  join(inf_set, to_inf, c);
  join(inf_set, to_inf, d);

  bool selection_turn = true;
  while (static_cast<Index>(sel.size()) < quota_sel &&
         static_cast<Index>(inf_set.size()) < quota_inf) {
    const Vector& to_set = selection_turn ? to_sel : to_inf;
    Index pick = -1;
    double best = -1.0;
    for (Index k = 0; k < n; ++k) {
      if (assigned[static_cast<std::size_t>(k)]) continue;
      if (to_set(k) > best) {
        best = to_set(k);
        pick = k;
      }
    }
    if (selection_turn) {
      join(sel, to_sel, pick);
    } else {
      join(inf_set, to_inf, pick);
    }
    selection_turn = !selection_turn;
  }
  IndexSet& rest = static_cast<Index>(sel.size()) < quota_sel ? sel : inf_set;
  for (Index k = 0; k < n; ++k) {
    if (!assigned[static_cast<std::size_t>(k)]) rest.push_back(k);
  }

  SplitPlan plan;
  std::sort(sel.begin(), sel.end());
  std::sort(inf_set.begin(), inf_set.end());
  plan.selection = std::move(sel);
  plan.inference = std::move(inf_set);
  plan.fraction = f;
  plan.strategy = SplitStrategy::duplex;
  return plan;
}

SplitPlan coin_flip_split(Index n, const IndexSet& A, Rng& rng) {
  check_index_set(A, n, "coin_flip_split");
  if (A.empty() || static_cast<Index>(A.size()) == n) {
    throw DomainError("coin_flip_split: A must be a non-empty proper subset");
  }
  std::uniform_int_distribution<int> coin(0, 1);
  SplitPlan plan;
  plan.strategy = SplitStrategy::coin_flip;
  plan.fraction = 0.5;
  IndexSet Ac = complement(A, n);
  if (coin(rng) == 0) {
    plan.selection = A;
    plan.inference = std::move(Ac);
  } else {
    plan.selection = std::move(Ac);
    plan.inference = A;
  }
  return plan;
}

SplitPlan stratified_split(const std::vector<IndexSet>& groups, Index m, Rng& rng) {
  if (groups.empty()) throw DomainError("stratified_split: no groups");
  const Index g = static_cast<Index>(groups.front().size());
  Index n = 0;
  for (const auto& grp : groups) {
    if (static_cast<Index>(grp.size()) != g) {
      throw DomainError("stratified_split: groups must have equal size");
    }
    n += g;
  }
  if (m < 1 || m >= g) throw DomainError("stratified_split: need 1 <= m < group size");

  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto& grp : groups) {
    for (Index i : grp) {
      if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]++) {
        throw DomainError("stratified_split: groups must partition {0..n-1}");
      }
    }
  }

  SplitPlan plan;
  plan.strategy = SplitStrategy::stratified;
  plan.fraction = static_cast<double>(m) / static_cast<double>(g);
  for (const auto& grp : groups) {
    for (Index pos : sample_without_replacement(g, m, rng)) {
      plan.selection.push_back(grp[static_cast<std::size_t>(pos)]);
    }
  }
  std::sort(plan.selection.begin(), plan.selection.end());
  plan.inference = complement(plan.selection, n);
  return plan;
}

}  // namespace splitinf
