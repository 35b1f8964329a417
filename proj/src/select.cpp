#include "splitinf/select.hpp"

#include "splitinf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace splitinf {

const char* to_string(SelectorTag tag) {
  switch (tag) {
    case SelectorTag::knockoff:
      return "knockoff";
    case SelectorTag::stability:
      return "stability";
    case SelectorTag::lasso_support:
      return "lasso_support";
  }
  return "?";
}

Matrix standardize_columns(const Matrix& X, bool center) {
  Matrix out = X;
  if (center) out.rowwise() -= X.colwise().mean();
  for (Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (!(norm > 0.0)) {
      throw DomainError("standardize_columns: column " + std::to_string(j) + " is constant");
    }
    out.col(j) /= norm;
  }
  return out;
}

Vector center(const Vector& y) { return (y.array() - y.mean()).matrix(); }

// ---------------------------------------------------------------- knockoffs

KnockoffDesign knockoff_construct(const Matrix& X) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (n < 2 * p) {
    throw DomainError("knockoff_construct: fixed-X knockoffs need n >= 2p (n = " +
                      std::to_string(n) + ", p = " + std::to_string(p) + ")");
  }
  KnockoffDesign out;
  out.X = standardize_columns(X, false);
  const Matrix sigma = out.X.transpose() * out.X;

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  const double lambda_min = eig.eigenvalues().minCoeff();
  if (!(lambda_min > 1e-10)) throw RankDeficient("knockoff_construct: X'X is singular");
  out.s_eq = std::min(2.0 * lambda_min, 1.0);
  const double s = out.s_eq;

  const Matrix& V = eig.eigenvectors();
  const Matrix sigma_inv = V * eig.eigenvalues().cwiseInverse().asDiagonal() * V.transpose();

  // C'C = 2 s I - s^2 Sigma^{-1}, which is only positive semidefinite when
  // s = 2 lambda_min; clip round-off below zero.
  const Vector a_eig =
      (2.0 * s - s * s * eig.eigenvalues().cwiseInverse().array()).cwiseMax(0.0).sqrt().matrix();
  const Matrix C = V * a_eig.asDiagonal() * V.transpose();

  // Orthonormal basis of a p-dimensional subspace orthogonal to span(X).
  const Eigen::HouseholderQR<Matrix> qr(out.X);
  const Matrix Q = qr.householderQ() * Matrix::Identity(n, 2 * p);
  const Matrix U_perp = Q.rightCols(p);

  out.knockoffs = out.X * (Matrix::Identity(p, p) - s * sigma_inv) + U_perp * C;
  return out;
}

double knockoff_threshold(const Vector& W, double q, int offset) {
  std::vector<double> candidates;
  for (Index j = 0; j < W.size(); ++j) {
    if (W(j) != 0.0) candidates.push_back(std::abs(W(j)));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (double t : candidates) {
    const auto negatives = (W.array() <= -t).count();
    const auto positives = (W.array() >= t).count();
    const double ratio = (static_cast<double>(offset) + static_cast<double>(negatives)) /
                         static_cast<double>(std::max<Index>(1, positives));
    if (ratio <= q) return t;
  }
  return std::numeric_limits<double>::infinity();
}

SelectionOutcome knockoff_filter(const Matrix& X, const Vector& y, double q, int offset, Rng& rng,
                                 const KnockoffOptions& options) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("knockoff_filter: q must be in (0, 1)");
  if (offset != 0 && offset != 1) throw DomainError("knockoff_filter: offset must be 0 or 1");
  if (y.size() != X.rows()) throw DimensionMismatch("knockoff_filter: len(y) != rows(X)");
  const Index p = X.cols();
  const KnockoffDesign kd = knockoff_construct(X);

  Matrix aug(X.rows(), 2 * p);
  aug << kd.X, kd.knockoffs;
  std::vector<bool> swapped(static_cast<std::size_t>(p), false);
  if (options.random_swap) {
    std::uniform_int_distribution<int> coin(0, 1);
    for (Index j = 0; j < p; ++j) {
      if (coin(rng) == 1) {
        swapped[static_cast<std::size_t>(j)] = true;
        aug.col(j).swap(aug.col(j + p));
      }
    }
  }

  const LassoCv cv = lasso_cv(aug, center(y), options.n_folds, rng, options.cv);
  Vector W(p);
  for (Index j = 0; j < p; ++j) {
    const bool sw = swapped[static_cast<std::size_t>(j)];
    const double original = cv.fit.coef(sw ? j + p : j);
    const double copy = cv.fit.coef(sw ? j : j + p);
    W(j) = std::abs(original) - std::abs(copy);
  }

  SelectionOutcome out;
  out.selector_tag = SelectorTag::knockoff;
  const double T = knockoff_threshold(W, q, offset);
  for (Index j = 0; j < p; ++j) {
    if (W(j) >= T) out.s.push_back(j);
  }
  out.diagnostics["W"] = W;
  out.diagnostics["threshold"] = Vector::Constant(1, T);
  out.diagnostics["lambda"] = Vector::Constant(1, cv.lambda_hat);
  return out;
}

// ---------------------------------------------------- stability selection

Index stability_q(Index p, double pfer, double cutoff) {
  const double raw = std::sqrt(pfer * (2.0 * cutoff - 1.0) * static_cast<double>(p));
  return std::clamp<Index>(static_cast<Index>(std::floor(raw)), 1, p);
}

IndexSet lars_first_entrants(const Matrix& X, const Vector& y, Index q) {
  const Index n = X.rows();
  const Index p = X.cols();
  if (y.size() != n) throw DimensionMismatch("lars_first_entrants: len(y) != rows(X)");
  q = std::min(q, p);
  const Index max_active = std::min(n - 1, p);

  Vector c = X.transpose() * y;
  IndexSet active;
  std::vector<bool> in_active(static_cast<std::size_t>(p), false);
  std::vector<double> beta;  // coefficients of `active`, same order
  Matrix gram(0, 0);

  const auto add = [&](Index j) {
    const Index k = static_cast<Index>(active.size());
    Vector cross(k);
    for (Index m = 0; m < k; ++m) cross(m) = X.col(active[static_cast<std::size_t>(m)]).dot(X.col(j));
    gram.conservativeResize(k + 1, k + 1);
    gram.block(0, k, k, 1) = cross;
    gram.block(k, 0, 1, k) = cross.transpose();
    gram(k, k) = X.col(j).squaredNorm();
    active.push_back(j);
    beta.push_back(0.0);
    in_active[static_cast<std::size_t>(j)] = true;
  };
  const auto remove = [&](Index pos) {
    const Index k = static_cast<Index>(active.size());
    Matrix g(k - 1, k - 1);
    for (Index a = 0, ra = 0; a < k; ++a) {
      if (a == pos) continue;
      for (Index b = 0, rb = 0; b < k; ++b) {
        if (b == pos) continue;
        g(ra, rb++) = gram(a, b);
      }
      ++ra;
    }
    gram = std::move(g);
    in_active[static_cast<std::size_t>(active[static_cast<std::size_t>(pos)])] = false;
    active.erase(active.begin() + pos);
    beta.erase(beta.begin() + pos);
  };

  Index first = 0;
  c.cwiseAbs().maxCoeff(&first);
  if (!(std::abs(c(first)) > 0.0)) return {};
  add(first);
  Index banned = -1;

  while (static_cast<Index>(active.size()) < q && static_cast<Index>(active.size()) < max_active) {
    const Index k = static_cast<Index>(active.size());
    Vector sign(k);
    double C = 0.0;
    for (Index m = 0; m < k; ++m) {
      const double cm = c(active[static_cast<std::size_t>(m)]);
      sign(m) = cm >= 0.0 ? 1.0 : -1.0;
      C = std::max(C, std::abs(cm));
    }
    const Vector v = gram.ldlt().solve(sign);
    const double A = 1.0 / std::sqrt(sign.dot(v));
    const Vector w = A * v;
    Vector u = Vector::Zero(n);
    for (Index m = 0; m < k; ++m) u.noalias() += w(m) * X.col(active[static_cast<std::size_t>(m)]);
    const Vector a = X.transpose() * u;

    const double eps = 1e-12 * C / A;
    double step_add = std::numeric_limits<double>::infinity();
    Index j_add = -1;
    for (Index j = 0; j < p; ++j) {
      if (in_active[static_cast<std::size_t>(j)] || j == banned) continue;
      for (double cand : {(C - c(j)) / (A - a(j)), (C + c(j)) / (A + a(j))}) {
        if (cand > eps && cand < step_add) {
          step_add = cand;
          j_add = j;
        }
      }
    }
    double step_drop = std::numeric_limits<double>::infinity();
    Index pos_drop = -1;
    for (Index m = 0; m < k; ++m) {
      if (w(m) == 0.0) continue;
      const double cand = -beta[static_cast<std::size_t>(m)] / w(m);
      if (cand > eps && cand < step_drop) {
        step_drop = cand;
        pos_drop = m;
      }
    }
    const double step = std::min(step_add, step_drop);
    if (!std::isfinite(step)) break;

    for (Index m = 0; m < k; ++m) beta[static_cast<std::size_t>(m)] += step * w(m);
    c.noalias() -= step * a;
    if (step_drop < step_add) {
      banned = active[static_cast<std::size_t>(pos_drop)];
      remove(pos_drop);
    } else {
      banned = -1;
      add(j_add);
    }
  }
  std::sort(active.begin(), active.end());
  return active;
}

namespace {

void check_stability_args(const Matrix& X, const Vector& y, int B) {
  if (y.size() != X.rows()) throw DimensionMismatch("stability: len(y) != rows(X)");
  if (B < 1) throw DomainError("stability: B must be >= 1");
  if (X.rows() < 4) throw DomainError("stability: need at least 4 rows");
}

template <class Map>
Vector frequencies_with(const Matrix& X, const Vector& y, Index q, int B, Rng& rng, Map&& map) {
  check_stability_args(X, y, B);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(B));
  for (auto& s : seeds) s = rng();
  const Index half = X.rows() / 2;
  const auto picks = map(B, [&](Index b) {
    Rng stream(seeds[static_cast<std::size_t>(b)]);
    const IndexSet rows = sample_without_replacement(X.rows(), half, stream);
    const Matrix Xs = standardize_columns(select_rows(X, rows), true);
    const Vector ys = center(select_rows(y, rows));
    return lars_first_entrants(Xs, ys, q);
  });
  Vector freq = Vector::Zero(X.cols());
  for (const auto& s : picks) {
    for (Index j : s) freq(j) += 1.0;
  }
  return freq / static_cast<double>(B);
}

}  // namespace

Vector stability_frequencies(const Matrix& X, const Vector& y, Index q, int B, Rng& rng,
                             int workers) {
  return frequencies_with(X, y, q, B, rng, [workers](Index count, auto&& fn) {
    return kernels::map_indexed<IndexSet>(count, fn, workers);
  });
}

Vector stability_frequencies_serial(const Matrix& X, const Vector& y, Index q, int B, Rng& rng) {
  return frequencies_with(X, y, q, B, rng, [](Index count, auto&& fn) {
    return kernels::map_indexed_serial<IndexSet>(count, fn);
  });
}

IndexSet stability_set(const Vector& freq, double cutoff) {
  IndexSet s;
  for (Index j = 0; j < freq.size(); ++j) {
    if (freq(j) >= cutoff) s.push_back(j);
  }
  return s;
}

SelectionOutcome stability_select(const Matrix& X, const Vector& y, double pfer, double cutoff,
                                  int B, Rng& rng, const StabilityOptions& options) {
  if (!(cutoff > 0.5 && cutoff < 1.0)) {
    throw DomainError("stability_select: cutoff must be in (0.5, 1)");
  }
  if (!(pfer > 0.0)) throw DomainError("stability_select: pfer must be positive");
  if (B < 10) throw DomainError("stability_select: B must be >= 10");
  const Index q = options.q ? *options.q : stability_q(X.cols(), pfer, cutoff);
  SelectionOutcome out;
  out.selector_tag = SelectorTag::stability;
  const Vector freq = stability_frequencies(X, y, q, B, rng, options.workers);
  out.s = stability_set(freq, cutoff);
  out.diagnostics["freq"] = freq;
  out.diagnostics["q"] = Vector::Constant(1, static_cast<double>(q));
  return out;
}

SelectionOutcome run_selector(const SelectorConfig& config, const Matrix& X, const Vector& y,
                              Rng& rng) {
  switch (config.kind) {
    case SelectorKind::knockoff: {
      KnockoffOptions opts;
      opts.n_folds = config.n_folds;
      return knockoff_filter(X, y, config.knockoff_q, config.knockoff_offset, rng, opts);
    }
    case SelectorKind::stability:
      return stability_select(X, y, config.pfer, config.cutoff, config.B, rng);
  }
  throw DomainError("run_selector: unknown selector");
}

}  // namespace splitinf
