#include "splitinf/simlab/experiments.hpp"

#include "detail.hpp"
#include "splitinf/infer.hpp"
#include "splitinf/linmodel.hpp"
#include "splitinf/select.hpp"
#include "splitinf/simlab/replicate.hpp"
#include "splitinf/simlab/stats.hpp"
#include "splitinf/split.hpp"

#include <array>
#include <cmath>

namespace splitinf::simlab {

using detail::cell_id;
using detail::Clock;
using detail::elapsed;
using detail::grid_prefix;
using detail::grid_schema;

namespace {

constexpr int kPowerBins = 10;  // |beta| = 0.1, ..., 1.0

struct Simulated {
  Matrix X;
  Vector y;
  Vector mu;
};

Simulated simulate(Index n, const Vector& beta, double rho, Rng& rng) {
  Simulated d;
  d.X = gen_design(n, beta.size(), rho, rng);
  d.mu = d.X * beta;
  d.y = gaussian_response(d.mu, 1.0, rng);
  return d;
}

int tenth_bin(double abs_beta) { return static_cast<int>(std::lround(abs_beta * 10.0)) - 1; }

// ------------------------------------------------------------------ power

enum Method { kFull = 0, kDs = 1, kR = 2 };
constexpr std::array<const char*, 3> kMethodNames{"full", "ds", "r"};

struct PowerRep {
  std::array<long, 3> hits{};
  std::array<std::array<long, kPowerBins>, 3> selected{};
  std::array<long, kPowerBins> present{};
};

PowerRep power_replication(const ExperimentConfig& c, Index p, double rho, double f, Rng& rng) {
  const SelectorConfig sel = c.selector_config();
  const Vector beta = gen_beta(p, c.k_active, rng);
  const Simulated d = simulate(c.n, beta, rho, rng);

  std::array<IndexSet, 3> chosen;
  chosen[kFull] = run_selector(sel, d.X, d.y, rng).s;

  const SplitPlan plan = duplex_split(d.X, f);
  chosen[kDs] = run_selector(sel, select_rows(d.X, plan.selection),
                             select_rows(d.y, plan.selection), rng)
                    .s;

  const SigmaEstimate sigma = estimate_sigma(d.X, d.y, SigmaMode::automatic, rng);
  if (!(sigma.sigma2 > 0.0)) throw DegenerateFit("power: sigma estimate is zero");
  const UVDecomposition uv = randomised_split(d.y, f, sigma.sigma(), rng);
  chosen[kR] = run_selector(sel, d.X, uv.u, rng).s;

  PowerRep rep;
  for (Index j = 0; j < p; ++j) {
    if (beta(j) != 0.0) ++rep.present[static_cast<std::size_t>(tenth_bin(std::abs(beta(j))))];
  }
  for (int m = 0; m < 3; ++m) {
    for (Index j : chosen[static_cast<std::size_t>(m)]) {
      if (beta(j) == 0.0) continue;
      ++rep.hits[static_cast<std::size_t>(m)];
      ++rep.selected[static_cast<std::size_t>(m)][static_cast<std::size_t>(tenth_bin(std::abs(beta(j))))];
    }
  }
  return rep;
}

// -------------------------------------------------------------- stability

constexpr int kStabActive = 10;

struct StabilityRep {
  std::array<double, kStabActive> ds{};
  std::array<double, kStabActive> r{};
};

Vector stability_beta(Index p) {
  Vector beta = Vector::Zero(p);
  for (int i = 0; i < kStabActive; ++i) beta(i) = 1.0 - 0.1 * i;
  return beta;
}

StabilityRep stability_replication(const ExperimentConfig& c, Index p, double rho, double f,
                                   Rng& rng) {
  const SelectorConfig sel = c.selector_config();
  const Simulated d = simulate(c.n, stability_beta(p), rho, rng);
  const SigmaEstimate sigma = estimate_sigma(d.X, d.y, SigmaMode::automatic, rng);
  if (!(sigma.sigma2 > 0.0)) throw DegenerateFit("stability: sigma estimate is zero");

  StabilityRep rep;
  const auto tally = [](const IndexSet& s, std::array<double, kStabActive>& into) {
    for (Index j : s) {
      if (j < kStabActive) into[static_cast<std::size_t>(j)] += 1.0;
    }
  };
  for (int t = 0; t < c.n_splits; ++t) {
    const SplitPlan plan = simple_split(c.n, f, rng);
    tally(run_selector(sel, select_rows(d.X, plan.selection), select_rows(d.y, plan.selection), rng).s,
          rep.ds);
  }
  for (int t = 0; t < c.n_splits; ++t) {
    const UVDecomposition uv = randomised_split(d.y, f, sigma.sigma(), rng);
    tally(run_selector(sel, d.X, uv.u, rng).s, rep.r);
  }
  for (int i = 0; i < kStabActive; ++i) {
    rep.ds[static_cast<std::size_t>(i)] /= c.n_splits;
    rep.r[static_cast<std::size_t>(i)] /= c.n_splits;
  }
  return rep;
}

// --------------------------------------------------------------- coverage

// (split, method) pairs in output order.
enum Combo { kDsFv = 0, kRFv = 1, kDsHd = 2, kRHd = 3 };
constexpr std::array<const char*, 4> kComboSplit{"DS", "R", "DS", "R"};
constexpr std::array<const char*, 4> kComboMethod{"FV", "FV", "HD", "HD"};
constexpr std::array<double, 4> kCoverageBins{0.0, 0.2, 0.5, 1.0};
constexpr int kMaxReportedSize = 8;

int coverage_bin(double abs_beta) {
  for (int b = 0; b < 4; ++b) {
    if (std::abs(abs_beta - kCoverageBins[static_cast<std::size_t>(b)]) < 1e-9) return b;
  }
  return -1;
}

struct CoverageTally {
  std::array<std::array<long, 4>, 4> covered{};
  std::array<std::array<long, 4>, 4> total{};
  std::array<std::array<double, 4>, 4> length{};
  long rank_deficient = 0;
  // Mean HD interval length within the selected set, by method (DS, R).
  std::array<Index, 2> set_size{};
  std::array<double, 2> set_length{};

  void record(Combo combo, const IntervalReport& rep, const Vector& beta, const Vector& target) {
    for (std::size_t k = 0; k < rep.records.size(); ++k) {
      const Interval& iv = rep.records[k];
      const int b = coverage_bin(std::abs(beta(iv.j)));
      if (b < 0) continue;
      const auto cb = static_cast<std::size_t>(combo);
      const auto bb = static_cast<std::size_t>(b);
      ++total[cb][bb];
      covered[cb][bb] += iv.covers(target(static_cast<Index>(k))) ? 1 : 0;
      length[cb][bb] += iv.length();
    }
  }
};

Vector coef_targets(const Vector& beta, const IndexSet& s) {
  Vector t(static_cast<Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) t(static_cast<Index>(k)) = beta(s[k]);
  return t;
}

Vector coverage_coef_beta(Index p) {
  Vector beta = Vector::Zero(p);
  const double head[] = {1.0, -1.0, 0.5, -0.5, 0.2, -0.2};
  for (Index i = 0; i < std::min<Index>(6, p); ++i) beta(i) = head[i];
  return beta;
}

CoverageTally coverage_coef_replication(const ExperimentConfig& c, Index p, double rho, double f,
                                        Rng& rng) {
  const SelectorConfig sel = c.selector_config();
  const Vector beta = coverage_coef_beta(p);
  const Simulated d = simulate(c.n, beta, rho, rng);
  CoverageTally tally;

  const bool full_fv = c.fv_data == FaceValueData::full;

  const SplitPlan plan = duplex_split(d.X, f);
  const Matrix X1 = select_rows(d.X, plan.selection);
  const Vector y1 = select_rows(d.y, plan.selection);
  const IndexSet s_ds = run_selector(sel, X1, y1, rng).s;
  if (!s_ds.empty()) {
    const Vector target = coef_targets(beta, s_ds);
    tally.record(kDsFv,
                 full_fv ? ci_coef_face_value(d.X, d.y, s_ds, c.alpha)
                         : ci_coef_face_value(X1, y1, s_ds, c.alpha),
                 beta, target);
    try {
      tally.record(kDsHd,
                   ci_coef_ds(select_rows(d.X, plan.inference), select_rows(d.y, plan.inference),
                              s_ds, c.alpha),
                   beta, target);
    } catch (const RankDeficient&) {
      ++tally.rank_deficient;
    }
  }

  const SigmaEstimate sigma = estimate_sigma(d.X, d.y, SigmaMode::automatic, rng);
  if (!(sigma.sigma2 > 0.0)) throw DegenerateFit("coverage: sigma estimate is zero");
  const UVDecomposition uv = randomised_split(d.y, f, sigma.sigma(), rng);
  const IndexSet s_r = run_selector(sel, d.X, uv.u, rng).s;
  if (!s_r.empty()) {
    const Vector target = coef_targets(beta, s_r);
    tally.record(kRFv, ci_coef_face_value(d.X, full_fv ? d.y : uv.u, s_r, c.alpha), beta, target);
    tally.record(kRHd, ci_coef_randomised(d.X, uv.v, s_r, uv.gamma, sigma.sigma(), c.alpha), beta,
                 target);
  }
  return tally;
}

CoverageTally coverage_projection_replication(const ExperimentConfig& c, Index p, double rho,
                                              double f, Rng& rng) {
  const SelectorConfig sel = c.selector_config();
  const Vector beta = coverage_coef_beta(p);
  const Simulated d = simulate(c.n, beta, rho, rng);
  const SigmaEstimate sigma = estimate_sigma(d.X, d.y, SigmaMode::automatic, rng);
  const double sd = sigma.sigma();
  const bool full_fv = c.fv_data == FaceValueData::full;
  CoverageTally tally;

  const SplitPlan plan = duplex_split(d.X, f);
  const Matrix X1 = select_rows(d.X, plan.selection);
  const Vector y1 = select_rows(d.y, plan.selection);
  const Matrix X2 = select_rows(d.X, plan.inference);
  const IndexSet s_ds = run_selector(sel, X1, y1, rng).s;
  if (!s_ds.empty()) {
    if (full_fv) {
      tally.record(kDsFv,
                   ci_projection(d.X, d.y, s_ds, c.alpha, sd, 1.0, CiMethod::face_value,
                                 CiTarget::projection_full_design),
                   beta, projection_parameter(d.X, s_ds, d.mu).values);
    } else {
      const Vector mu1 = select_rows(d.mu, plan.selection);
      tally.record(kDsFv,
                   ci_projection(X1, y1, s_ds, c.alpha, sd, 1.0, CiMethod::face_value,
                                 CiTarget::projection_selection_design),
                   beta, projection_parameter(X1, s_ds, mu1).values);
    }
    try {
      const Vector mu2 = select_rows(d.mu, plan.inference);
      const IntervalReport hd =
          ci_projection(X2, select_rows(d.y, plan.inference), s_ds, c.alpha, sd, 1.0,
                        CiMethod::ds_holdout, CiTarget::projection_holdout_design);
      tally.record(kDsHd, hd, beta,
                   projection_parameter(X2, s_ds, mu2, DesignTag::holdout_design).values);
      tally.set_size[0] = static_cast<Index>(s_ds.size());
      tally.set_length[0] = hd.mean_length();
    } catch (const RankDeficient&) {
      ++tally.rank_deficient;
    }
  }

  const UVDecomposition uv = randomised_split(d.y, f, sd, rng);
  const IndexSet s_r = run_selector(sel, d.X, uv.u, rng).s;
  if (!s_r.empty()) {
    const Vector target = projection_parameter(d.X, s_r, d.mu).values;
    const double g2 = uv.gamma * uv.gamma;
    tally.record(kRFv,
                 full_fv ? ci_projection(d.X, d.y, s_r, c.alpha, sd, 1.0, CiMethod::face_value,
                                         CiTarget::projection_full_design)
                         : ci_projection(d.X, uv.u, s_r, c.alpha, sd, 1.0 + g2,
                                         CiMethod::face_value, CiTarget::projection_full_design),
                 beta, target);
    const IntervalReport hd = ci_projection(d.X, uv.v, s_r, c.alpha, sd, 1.0 + 1.0 / g2,
                                            CiMethod::randomised, CiTarget::projection_full_design);
    tally.record(kRHd, hd, beta, target);
    tally.set_size[1] = static_cast<Index>(s_r.size());
    tally.set_length[1] = hd.mean_length();
  }
  return tally;
}

void coverage_rows(ResultTable& table, const std::vector<Cell>& prefix,
                   const std::vector<CoverageTally>& reps, long resamples) {
  CoverageTally sum;
  for (const auto& r : reps) {
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        sum.covered[a][b] += r.covered[a][b];
        sum.total[a][b] += r.total[a][b];
        sum.length[a][b] += r.length[a][b];
      }
    }
    sum.rank_deficient += r.rank_deficient;
  }
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      std::vector<Cell> row = prefix;
      const long tot = sum.total[a][b];
      row.insert(row.end(),
                 {Cell{std::string(kComboSplit[a])}, Cell{std::string(kComboMethod[a])},
                  Cell{kCoverageBins[b]},
                  tot ? Cell{static_cast<double>(sum.covered[a][b]) / static_cast<double>(tot)}
                      : Cell{},
                  tot ? Cell{binomial_se(sum.covered[a][b], tot)} : Cell{},
                  Cell{static_cast<std::int64_t>(tot)},
                  tot ? Cell{sum.length[a][b] / static_cast<double>(tot)} : Cell{},
                  Cell{static_cast<std::int64_t>(reps.size())}, Cell{static_cast<std::int64_t>(resamples)},
                  Cell{static_cast<std::int64_t>(sum.rank_deficient)}});
      table.add_row(std::move(row));
    }
  }
}

std::vector<std::string> coverage_schema() {
  auto s = grid_schema();
  s.insert(s.end(), {"split", "method", "abs_beta", "coverage", "coverage_se", "n_intervals",
                     "mean_length", "reps", "resamples", "rank_deficient"});
  return s;
}

template <class Rep, class Body>
ExperimentOutput run_grid(const ExperimentConfig& config, ExperimentKind kind, Body&& body) {
  const ExperimentConfig c = config.resolved();
  c.validate();
  ExperimentOutput out;
  const auto start = Clock::now();
  std::uint64_t cell = 0;
  for (Index p : c.p) {
    for (double rho : c.rho) {
      for (double f : c.f) {
        ReplicationPlan plan;
        plan.seed = c.seed;
        plan.cell = cell_id(kind, cell++);
        auto reps = run_replications<Rep>(
            c.n_reps, plan, [&](Rng& rng) { return body.replicate(c, p, rho, f, rng); }, c.workers);
        out.replications += c.n_reps;
        out.resamples += reps.resamples;
        body.emit(out, grid_prefix(c, p, rho, f), reps);
      }
    }
  }
  out.timings["total"] = elapsed(start);
  return out;
}

}  // namespace

Vector gen_beta(Index p, Index k, Rng& rng) {
  if (p < 1 || k < 1 || k > p) throw DomainError("gen_beta: need 1 <= k <= p");
  Vector beta = Vector::Zero(p);
  std::uniform_int_distribution<int> magnitude(1, 10);
  std::uniform_int_distribution<int> sign(0, 1);
  for (Index j : sample_without_replacement(p, k, rng)) {
    const double m = magnitude(rng) / 10.0;
    beta(j) = sign(rng) ? m : -m;
  }
  return beta;
}

ExperimentOutput run_power(const ExperimentConfig& config) {
  struct Body {
    ResultTable tpr{"tpr", {}, {}};
    ResultTable curve{"power_curve", {}, {}};
    Index k = 10;

    PowerRep replicate(const ExperimentConfig& c, Index p, double rho, double f, Rng& rng) const {
      return power_replication(c, p, rho, f, rng);
    }
    void emit(ExperimentOutput&, const std::vector<Cell>& prefix, const Replicated<PowerRep>& r) {
      PowerRep sum;
      for (const auto& rep : r.results) {
        for (std::size_t m = 0; m < 3; ++m) {
          sum.hits[m] += rep.hits[m];
          for (std::size_t b = 0; b < kPowerBins; ++b) sum.selected[m][b] += rep.selected[m][b];
        }
        for (std::size_t b = 0; b < kPowerBins; ++b) sum.present[b] += rep.present[b];
      }
      const double active = static_cast<double>(k) * static_cast<double>(r.results.size());
      std::array<double, 3> rate{};
      for (std::size_t m = 0; m < 3; ++m) rate[m] = static_cast<double>(sum.hits[m]) / active;
      std::vector<Cell> row = prefix;
      row.insert(row.end(), {Cell{static_cast<std::int64_t>(r.results.size())},
                             Cell{static_cast<std::int64_t>(r.resamples)}, Cell{rate[kFull]},
                             Cell{rate[kDs]}, Cell{rate[kR]},
                             rate[kFull] > 0 ? Cell{rate[kDs] / rate[kFull]} : Cell{},
                             rate[kFull] > 0 ? Cell{rate[kR] / rate[kFull]} : Cell{}});
      tpr.add_row(std::move(row));
      for (std::size_t m = 0; m < 3; ++m) {
        for (std::size_t b = 0; b < kPowerBins; ++b) {
          std::vector<Cell> line = prefix;
          const long present = sum.present[b];
          line.insert(line.end(),
                      {Cell{std::string(kMethodNames[m])}, Cell{static_cast<double>(b + 1) / 10.0},
                       present ? Cell{static_cast<double>(sum.selected[m][b]) /
                                      static_cast<double>(present)}
                               : Cell{},
                       Cell{static_cast<std::int64_t>(present)}});
          curve.add_row(std::move(line));
        }
      }
    }
  } body;
  body.k = config.k_active;
  body.tpr.schema = grid_schema();
  body.tpr.schema.insert(body.tpr.schema.end(), {"reps", "resamples", "tpr_full", "tpr_ds",
                                                 "tpr_r", "ratio_ds", "ratio_r"});
  body.curve.schema = grid_schema();
  body.curve.schema.insert(body.curve.schema.end(), {"method", "abs_beta", "power", "n_coef"});
  ExperimentOutput out = run_grid<PowerRep>(config, ExperimentKind::power, body);
  out.tables = {std::move(body.tpr), std::move(body.curve)};
  return out;
}

ExperimentOutput run_stability(const ExperimentConfig& config) {
  struct Body {
    ResultTable table{"selection_stability", {}, {}};

    StabilityRep replicate(const ExperimentConfig& c, Index p, double rho, double f,
                           Rng& rng) const {
      if (p < kStabActive) throw DomainError("stability study needs p >= 10");
      return stability_replication(c, p, rho, f, rng);
    }
    void emit(ExperimentOutput&, const std::vector<Cell>& prefix,
              const Replicated<StabilityRep>& r) {
      for (int method = 0; method < 2; ++method) {
        for (int i = 0; i < kStabActive; ++i) {
          std::vector<double> values;
          for (const auto& rep : r.results) {
            values.push_back(method == 0 ? rep.ds[static_cast<std::size_t>(i)]
                                         : rep.r[static_cast<std::size_t>(i)]);
          }
          std::vector<Cell> row = prefix;
          row.insert(row.end(), {Cell{std::string(method == 0 ? "DS" : "R")},
                                 Cell{static_cast<std::int64_t>(i + 1)}, Cell{1.0 - 0.1 * i},
                                 Cell{mean(values)}, Cell{sample_sd(values)},
                                 Cell{static_cast<std::int64_t>(values.size())},
                                 Cell{static_cast<std::int64_t>(r.resamples)}});
          table.add_row(std::move(row));
        }
      }
    }
  } body;
  body.table.schema = grid_schema();
  body.table.schema.insert(body.table.schema.end(), {"split", "coef", "beta", "mean", "sd",
                                                     "datasets", "resamples"});
  ExperimentOutput out = run_grid<StabilityRep>(config, ExperimentKind::stability, body);
  out.tables = {std::move(body.table)};
  return out;
}

ExperimentOutput run_coverage_coef(const ExperimentConfig& config) {
  struct Body {
    ResultTable table{"coverage", coverage_schema(), {}};

    CoverageTally replicate(const ExperimentConfig& c, Index p, double rho, double f,
                            Rng& rng) const {
      return coverage_coef_replication(c, p, rho, f, rng);
    }
    void emit(ExperimentOutput&, const std::vector<Cell>& prefix,
              const Replicated<CoverageTally>& r) {
      coverage_rows(table, prefix, r.results, r.resamples);
    }
  } body;
  ExperimentOutput out = run_grid<CoverageTally>(config, ExperimentKind::coverage_coef, body);
  out.tables = {std::move(body.table)};
  return out;
}

ExperimentOutput run_coverage_projection(const ExperimentConfig& config) {
  struct Body {
    ResultTable table{"coverage", coverage_schema(), {}};
    ResultTable lengths{"length_by_size", {}, {}};

    CoverageTally replicate(const ExperimentConfig& c, Index p, double rho, double f,
                            Rng& rng) const {
      return coverage_projection_replication(c, p, rho, f, rng);
    }
    void emit(ExperimentOutput&, const std::vector<Cell>& prefix,
              const Replicated<CoverageTally>& r) {
      coverage_rows(table, prefix, r.results, r.resamples);
      for (std::size_t m = 0; m < 2; ++m) {
        for (Index size = 1; size <= kMaxReportedSize; ++size) {
          double total = 0.0;
          long count = 0;
          for (const auto& rep : r.results) {
            if (rep.set_size[m] == size) {
              total += rep.set_length[m];
              ++count;
            }
          }
          std::vector<Cell> row = prefix;
          row.insert(row.end(), {Cell{std::string(m == 0 ? "DS" : "R")},
                                 Cell{static_cast<std::int64_t>(size)},
                                 count ? Cell{total / static_cast<double>(count)} : Cell{},
                                 Cell{static_cast<std::int64_t>(count)}});
          lengths.add_row(std::move(row));
        }
      }
    }
  } body;
  body.lengths.schema = grid_schema();
  body.lengths.schema.insert(body.lengths.schema.end(),
                             {"split", "set_size", "mean_length", "n_sets"});
  ExperimentOutput out =
      run_grid<CoverageTally>(config, ExperimentKind::coverage_projection, body);
  out.tables = {std::move(body.table), std::move(body.lengths)};
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::power:
      return run_power(config);
    case ExperimentKind::stability:
      return run_stability(config);
    case ExperimentKind::coverage_coef:
      return run_coverage_coef(config);
    case ExperimentKind::coverage_projection:
      return run_coverage_projection(config);
    case ExperimentKind::theorem1:
      return run_theorem1(config);
    case ExperimentKind::prop1:
      return run_prop1(config);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace splitinf::simlab
