#include "splitinf/fisher.hpp"
#include "splitinf/infer.hpp"
#include "splitinf/lasso.hpp"
#include "splitinf/linmodel.hpp"
#include "splitinf/simlab/experiments.hpp"
#include "splitinf/simlab/replicate.hpp"
#include "splitinf/simlab/stats.hpp"
#include "splitinf/split.hpp"

#include "detail.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace splitinf::simlab {

namespace {

struct PivotDraw {
  IndexSet s;
  double pivot = std::numeric_limits<double>::quiet_NaN();
};

std::string set_label(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(s[i] + 1);
  }
  return out + "}";
}

// Centered unit-rate exponential errors: mean 0, variance 1, finite third
// moment, clearly skewed.
Vector exponential_errors(Index n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vector e(n);
  for (Index i = 0; i < n; ++i) e(i) = expo(rng) - 1.0;
  return e;
}

}  // namespace

ExperimentOutput run_theorem1(const ExperimentConfig& config) {
  const ExperimentConfig c = config.resolved();
  c.validate();
  const Index p = c.p.front();
  const double rho = c.rho.front();
  const double f = c.f.front();
  const double gamma = gamma_from_fraction(f);
  const double inflation = std::sqrt(1.0 + 1.0 / (gamma * gamma));
  const double z = normal_quantile(1.0 - c.alpha / 2.0);

  ExperimentOutput out;
  ResultTable table{"theorem1",
                    {"n", "p", "rho", "f", "lambda", "modal_set", "modal_freq", "conditioned",
                     "total_reps", "ks_distance", "ks_pvalue", "coverage", "coverage_se",
                     "resamples"},
                    {}};
  const auto start = detail::Clock::now();

  std::uint64_t cell = 0;
  for (Index n : c.theorem1_n) {
    const std::uint64_t id = detail::cell_id(ExperimentKind::theorem1, cell++);
    // The design is held fixed across replications at each n.
    Rng design_rng = make_stream(c.seed, {id, ~std::uint64_t{0}});
    const Matrix X = gen_design(n, p, rho, design_rng);
    const Vector mu = X.col(0);
    const double lambda = c.lambda_c / std::sqrt(static_cast<double>(n));

    const auto draw = [&](Rng& rng) {
      const Vector y = mu + exponential_errors(n, rng);
      const double sigma_hat = std::sqrt(ols_fit(X, y).sigma2_hat);
      const UVDecomposition uv = randomised_split(y, f, sigma_hat, rng);
      PivotDraw d;
      d.s = lasso_cd(X, uv.u, lambda).support();
      if (!d.s.empty()) {
        const Contrast eta = projection_contrast(X, d.s, 0);
        d.pivot = (eta.eta.dot(uv.v) - eta.eta.dot(mu)) / (inflation * sigma_hat * eta.norm);
      }
      return d;
    };

    ReplicationPlan plan;
    plan.seed = c.seed;
    plan.cell = id;
    const auto pilot = run_replications<PivotDraw>(c.pilot, plan, draw, c.workers);
    long resamples = pilot.resamples;
    std::map<IndexSet, long> counts;
    for (const auto& d : pilot.results) ++counts[d.s];
    IndexSet modal;
    long best = -1;
    for (const auto& [s, k] : counts) {
      if (k > best) {
        best = k;
        modal = s;
      }
    }
    const double freq = static_cast<double>(best) / static_cast<double>(c.pilot);
    if (freq < 0.05 || modal.empty()) {
      throw InsufficientConditioning("theorem1: modal selection " + set_label(modal) +
                                     " has frequency " + std::to_string(freq) + " at n = " +
                                     std::to_string(n) + "; choose a different lambda_c");
    }

    std::vector<double> pivots;
    long next = c.pilot;
    while (static_cast<long>(pivots.size()) < c.n_reps) {
      const long need = c.n_reps - static_cast<long>(pivots.size());
      const long batch = static_cast<long>(std::ceil(1.2 * static_cast<double>(need) / freq)) + 16;
      plan.first = static_cast<std::uint64_t>(next);
      const auto more = run_replications<PivotDraw>(batch, plan, draw, c.workers);
      resamples += more.resamples;
      for (const auto& d : more.results) {
        if (d.s == modal && static_cast<long>(pivots.size()) < c.n_reps) {
          pivots.push_back(d.pivot);
        }
      }
      next += batch;
    }
    long covered = 0;
    for (double v : pivots) covered += std::abs(v) <= z ? 1 : 0;
    const double ks = ks_distance_normal(pivots);
    const long m = static_cast<long>(pivots.size());
    table.add_row({Cell{static_cast<std::int64_t>(n)}, Cell{static_cast<std::int64_t>(p)},
                   Cell{rho}, Cell{f}, Cell{lambda}, Cell{set_label(modal)}, Cell{freq},
                   Cell{static_cast<std::int64_t>(m)},
                   Cell{static_cast<std::int64_t>(next - c.pilot)}, Cell{ks},
                   Cell{kolmogorov_pvalue(ks, m)},
                   Cell{static_cast<double>(covered) / static_cast<double>(m)},
                   Cell{binomial_se(covered, m)}, Cell{static_cast<std::int64_t>(resamples)}});
    out.replications += c.pilot + (next - c.pilot);
    out.resamples += resamples;
  }
  out.timings["total"] = detail::elapsed(start);
  out.tables = {std::move(table)};
  return out;
}

ExperimentOutput run_prop1(const ExperimentConfig& config) {
  const ExperimentConfig c = config.resolved();
  c.validate();
  const Index p = c.p.front();
  const double f = c.f.front();
  Rng rng = make_stream(c.seed, {detail::cell_id(ExperimentKind::prop1, 0)});
  const Matrix X = gen_design(c.n, p, c.rho.front(), rng);

  std::vector<std::pair<std::string, ConstantInclusionStrategy>> strategies;
  strategies.push_back({"simple", {SplitStrategy::simple, {}, {}, 1}});
  for (Index g = 2; g <= 20; ++g) {
    const double m = f * static_cast<double>(g);
    if (c.n % g != 0 || std::abs(m - std::round(m)) > 1e-12) continue;
    ConstantInclusionStrategy st{SplitStrategy::stratified, {}, {}, static_cast<Index>(std::round(m))};
    for (Index start = 0; start < c.n; start += g) {
      IndexSet grp;
      for (Index i = start; i < start + g; ++i) grp.push_back(i);
      st.groups.push_back(std::move(grp));
    }
    strategies.push_back({"stratified", std::move(st)});
    break;
  }
  if (f == 0.5) {
    IndexSet A;
    for (Index i = 0; i < c.n / 2; ++i) A.push_back(i);
    strategies.push_back({"coin_flip", {SplitStrategy::coin_flip, std::move(A), {}, 1}});
  }
  const std::vector<PhiCriterion> criteria{
      PhiCriterion::trace(),
      PhiCriterion::quadratic_form(Vector::Ones(p) / std::sqrt(static_cast<double>(p))),
      PhiCriterion::max_diag(), PhiCriterion::max_eigenvalue()};

  ExperimentOutput out;
  ResultTable table{"prop1",
                    {"strategy", "criterion", "n", "p", "f", "lhs_sel", "rhs_sel", "margin_sel",
                     "se_sel", "lhs_inf", "rhs_inf", "margin_inf", "se_inf", "jensen_sel",
                     "jensen_inf", "exhaustive", "degenerate", "n_splits", "strict"},
                    {}};
  const auto start = detail::Clock::now();
  for (const auto& [name, st] : strategies) {
    for (const auto& crit : criteria) {
      Rng draws = make_stream(c.seed, {detail::cell_id(ExperimentKind::prop1, 1),
                                       static_cast<std::uint64_t>(st.kind),
                                       static_cast<std::uint64_t>(crit.kind)});
      const Prop1Result r = verify_proposition1(X, st, f, crit, c.n_reps, draws, 1.0, c.workers);
      table.add_row({Cell{name}, Cell{std::string(to_string(crit.kind))},
                     Cell{static_cast<std::int64_t>(c.n)}, Cell{static_cast<std::int64_t>(p)},
                     Cell{f}, Cell{r.lhs_sel}, Cell{r.rhs_sel}, Cell{r.margin_sel}, Cell{r.se_sel},
                     Cell{r.lhs_inf}, Cell{r.rhs_inf}, Cell{r.margin_inf}, Cell{r.se_inf},
                     Cell{r.jensen_sel}, Cell{r.jensen_inf},
                     Cell{static_cast<std::int64_t>(r.exhaustive)},
                     Cell{static_cast<std::int64_t>(r.degenerate)},
                     Cell{static_cast<std::int64_t>(r.n_splits)},
                     Cell{static_cast<std::int64_t>(r.strict())}});
      out.replications += r.n_splits;
    }
  }
  out.timings["total"] = detail::elapsed(start);
  out.tables = {std::move(table)};
  return out;
}

}  // namespace splitinf::simlab
