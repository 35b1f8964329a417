#include "splitinf/fisher.hpp"

#include "splitinf/kernels.hpp"
#include "splitinf/linmodel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace splitinf {

const char* to_string(PhiCriterion::Kind kind) {
  switch (kind) {
    case PhiCriterion::Kind::trace:
      return "trace";
    case PhiCriterion::Kind::quadratic_form:
      return "quadratic_form";
    case PhiCriterion::Kind::max_diag:
      return "max_diag";
    case PhiCriterion::Kind::max_eigenvalue:
      return "max_eigenvalue";
  }
  return "?";
}

InfoSplit gaussian_info_split(const Matrix& X, const SplitPlan& plan, double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("gaussian_info_split: sigma2 must be positive");
  plan.validate(X.rows());
  const Matrix Xr = select_rows(X, plan.selection);
  const Matrix Xc = select_rows(X, plan.inference);
  // Constructing the factorizations is the rank check.
  LeastSquares{Xr};
  LeastSquares{Xc};
  InfoSplit info;
  info.info_selection = Xr.transpose() * Xr / sigma2;
  info.info_inference = Xc.transpose() * Xc / sigma2;
  info.info_full = X.transpose() * X / sigma2;
  return info;
}

double phi_eval(const Matrix& A, const PhiCriterion& criterion) {
  if (A.rows() != A.cols() || A.rows() == 0) throw DomainError("phi_eval: A must be square");
  const double scale = A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DomainError("phi_eval: A is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues()(0) > 0.0)) throw DomainError("phi_eval: A is not positive definite");
  switch (criterion.kind) {
    case PhiCriterion::Kind::trace:
      return A.trace();
    case PhiCriterion::Kind::quadratic_form:
      if (criterion.v.size() != A.rows()) {
        throw DimensionMismatch("phi_eval: len(v) != dim(A)");
      }
      return criterion.v.dot(A.selfadjointView<Eigen::Lower>() * criterion.v);
    case PhiCriterion::Kind::max_diag:
      return A.diagonal().maxCoeff();
    case PhiCriterion::Kind::max_eigenvalue:
      return eig.eigenvalues()(A.rows() - 1);
  }
  return 0.0;
}

bool Prop1Result::strict(double n_se) const {
  return margin_sel > n_se * se_sel && margin_inf > n_se * se_inf && margin_sel > 0.0 &&
         margin_inf > 0.0;
}

namespace {

// All size-k subsets of {0..n-1} in lexicographic order, or nothing if
// there are more than `limit`.
std::vector<IndexSet> combinations(Index n, Index k, long limit) {
  std::vector<IndexSet> out;
  IndexSet c(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (static_cast<long>(out.size()) >= limit) return {};
    out.push_back(c);
    Index i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

double binomial(Index n, Index k) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

void check_strategy(const ConstantInclusionStrategy& st, Index n, double f) {
  if (!(f > 0.0 && f < 1.0)) throw DomainError("verify_proposition1: f must be in (0, 1)");
  switch (st.kind) {
    case SplitStrategy::simple: {
      const Index k = split_size(n, f);
      if (std::abs(static_cast<double>(k) - f * static_cast<double>(n)) > 1e-9) {
        throw DomainError("verify_proposition1: simple split needs f n to be an integer");
      }
      if (k < 1 || k >= n) throw DomainError("verify_proposition1: need 1 <= f n < n");
      return;
    }
    case SplitStrategy::coin_flip:
      if (f != 0.5) throw DomainError("verify_proposition1: coin flip has inclusion 1/2");
      check_index_set(st.coin_set, n, "verify_proposition1");
      if (st.coin_set.empty() || static_cast<Index>(st.coin_set.size()) == n) {
        throw DomainError("verify_proposition1: coin set must be a proper non-empty subset");
      }
      return;
    case SplitStrategy::stratified: {
      if (st.groups.empty()) throw DomainError("verify_proposition1: no groups");
      const Index g = static_cast<Index>(st.groups.front().size());
      if (static_cast<Index>(st.groups.size()) * g != n) {
        throw DomainError("verify_proposition1: groups must cover the rows");
      }
      if (std::abs(static_cast<double>(st.per_group) / static_cast<double>(g) - f) > 1e-12) {
        throw DomainError("verify_proposition1: stratified inclusion m/g differs from f");
      }
      return;
    }
    case SplitStrategy::duplex:
      throw DomainError("verify_proposition1: DUPLEX does not have constant inclusion");
  }
}

std::vector<IndexSet> enumerate_selections(const ConstantInclusionStrategy& st, Index n,
                                           double f) {
  switch (st.kind) {
    case SplitStrategy::simple:
      return combinations(n, split_size(n, f), kExhaustiveLimit + 1);
    case SplitStrategy::coin_flip:
      return {st.coin_set, complement(st.coin_set, n)};
    case SplitStrategy::stratified: {
      const Index g = static_cast<Index>(st.groups.front().size());
      const auto within = combinations(g, st.per_group, kExhaustiveLimit + 1);
      std::vector<IndexSet> out;
      const std::size_t k = st.groups.size();
      std::vector<std::size_t> digit(k, 0);
      while (true) {
        IndexSet sel;
        for (std::size_t grp = 0; grp < k; ++grp) {
          for (Index pos : within[digit[grp]]) {
            sel.push_back(st.groups[grp][static_cast<std::size_t>(pos)]);
          }
        }
        std::sort(sel.begin(), sel.end());
        out.push_back(std::move(sel));
        std::size_t d = 0;
        while (d < k && ++digit[d] == within.size()) digit[d++] = 0;
        if (d == k) break;
      }
      return out;
    }
    case SplitStrategy::duplex:
      break;
  }
  return {};
}

IndexSet draw_selection(const ConstantInclusionStrategy& st, Index n, double f, Rng& rng) {
  switch (st.kind) {
    case SplitStrategy::simple:
      return simple_split(n, f, rng).selection;
    case SplitStrategy::coin_flip:
      return coin_flip_split(n, st.coin_set, rng).selection;
    case SplitStrategy::stratified:
      return stratified_split(st.groups, st.per_group, rng).selection;
    case SplitStrategy::duplex:
      break;
  }
  throw DomainError("verify_proposition1: unsupported strategy");
}

struct SplitValue {
  Matrix info_sel;  // X_r'X_r
  Matrix inv_sel;   // sigma^2 (X_r'X_r)^{-1}
  Matrix inv_inf;
  double phi_sel = 0.0;
  double phi_inf = 0.0;
};

SplitValue evaluate(const Matrix& X, const IndexSet& sel, const PhiCriterion& crit,
                    double sigma2) {
  const Matrix Xr = select_rows(X, sel);
  const Matrix Xc = select_rows(X, complement(sel, X.rows()));
  SplitValue out;
  out.info_sel = Xr.transpose() * Xr;
  out.inv_sel = sigma2 * LeastSquares(Xr).gram_inverse();
  out.inv_inf = sigma2 * LeastSquares(Xc).gram_inverse();
  out.phi_sel = phi_eval(out.inv_sel, crit);
  out.phi_inf = phi_eval(out.inv_inf, crit);
  return out;
}

template <class Map>
Prop1Result verify_with(const Matrix& X, const ConstantInclusionStrategy& st, double f,
                        const PhiCriterion& crit, long n_mc, Rng& rng, double sigma2, Map&& map) {
  const Index n = X.rows();
  const Index p = X.cols();
  check_strategy(st, n, f);
  if (!(sigma2 > 0.0)) throw DomainError("verify_proposition1: sigma2 must be positive");

  Prop1Result res;
  std::vector<IndexSet> support;
  if (strategy_support_size(st, n, f) <= kExhaustiveLimit) support = enumerate_selections(st, n, f);
  res.exhaustive = !support.empty();

  std::vector<SplitValue> values;
  if (res.exhaustive) {
    values = map(static_cast<Index>(support.size()), [&](Index i) {
      return evaluate(X, support[static_cast<std::size_t>(i)], crit, sigma2);
    });
  } else {
    if (n_mc < 2) throw DomainError("verify_proposition1: n_mc must be at least 2");
    const std::uint64_t base = rng();
    values = map(static_cast<Index>(n_mc), [&](Index i) {
      Rng stream = make_stream(base, {static_cast<std::uint64_t>(i)});
      return evaluate(X, draw_selection(st, n, f, stream), crit, sigma2);
    });
  }

  const double m = static_cast<double>(values.size());
  double sum_sel = 0.0, sum_inf = 0.0, sq_sel = 0.0, sq_inf = 0.0;
  Matrix mean_sel = Matrix::Zero(p, p);
  Matrix mean_inf = Matrix::Zero(p, p);
  const Matrix& first = values.front().info_sel;
  const double tol = 1e-12 * std::max(1.0, first.cwiseAbs().maxCoeff());
  res.degenerate = true;
  for (const auto& v : values) {
    sum_sel += v.phi_sel;
    sum_inf += v.phi_inf;
    sq_sel += v.phi_sel * v.phi_sel;
    sq_inf += v.phi_inf * v.phi_inf;
    mean_sel += v.inv_sel;
    mean_inf += v.inv_inf;
    if ((v.info_sel - first).cwiseAbs().maxCoeff() > tol) res.degenerate = false;
  }
  mean_sel /= m;
  mean_inf /= m;

  const Matrix full_inv = sigma2 * LeastSquares(X).gram_inverse();
  res.lhs_sel = phi_eval(full_inv / f, crit);
  res.lhs_inf = phi_eval(full_inv / (1.0 - f), crit);
  res.rhs_sel = sum_sel / m;
  res.rhs_inf = sum_inf / m;
  res.margin_sel = res.rhs_sel - res.lhs_sel;
  res.margin_inf = res.rhs_inf - res.lhs_inf;
  if (res.degenerate) {
    // Equal information on every split with constant inclusion forces
    // I_r = f I_Y, so both sides agree exactly; drop factorization round-off.
    res.rhs_sel = res.lhs_sel;
    res.rhs_inf = res.lhs_inf;
    res.margin_sel = res.margin_inf = 0.0;
  }
  if (!res.exhaustive) {
    const auto se = [m](double sum, double sq) {
      const double mean = sum / m;
      return std::sqrt(std::max(0.0, (sq - m * mean * mean) / (m - 1.0)) / m);
    };
    res.se_sel = se(sum_sel, sq_sel);
    res.se_inf = se(sum_inf, sq_inf);
  }
  res.jensen_sel = phi_eval(0.5 * (mean_sel + mean_sel.transpose()), crit);
  res.jensen_inf = phi_eval(0.5 * (mean_inf + mean_inf.transpose()), crit);
  res.n_splits = static_cast<long>(values.size());
  return res;
}

}  // namespace

long strategy_support_size(const ConstantInclusionStrategy& st, Index n, double f) {
  const double cap = static_cast<double>(kExhaustiveLimit + 1);
  double count = 0.0;
  switch (st.kind) {
    case SplitStrategy::simple:
      count = binomial(n, split_size(n, f));
      break;
    case SplitStrategy::coin_flip:
      count = 2.0;
      break;
    case SplitStrategy::stratified: {
      const Index g = st.groups.empty() ? 0 : static_cast<Index>(st.groups.front().size());
      count = std::pow(binomial(g, st.per_group), static_cast<double>(st.groups.size()));
      break;
    }
    case SplitStrategy::duplex:
      count = 1.0;
      break;
  }
  return static_cast<long>(std::min(count, cap));
}

Prop1Result verify_proposition1(const Matrix& X, const ConstantInclusionStrategy& strategy,
                                double f, const PhiCriterion& criterion, long n_mc, Rng& rng,
                                double sigma2, int workers) {
  return verify_with(X, strategy, f, criterion, n_mc, rng, sigma2, [workers](Index m, auto&& fn) {
    return kernels::map_indexed<SplitValue>(m, fn, workers);
  });
}

Prop1Result verify_proposition1_serial(const Matrix& X, const ConstantInclusionStrategy& strategy,
                                       double f, const PhiCriterion& criterion, long n_mc,
                                       Rng& rng, double sigma2) {
  return verify_with(X, strategy, f, criterion, n_mc, rng, sigma2, [](Index m, auto&& fn) {
    return kernels::map_indexed_serial<SplitValue>(m, fn);
  });
}

}  // namespace splitinf
