#pragma once

#include "splitinf/common.hpp"
#include "splitinf/rng.hpp"
#include "splitinf/simlab/config.hpp"
#include "splitinf/simlab/table.hpp"

#include <string>
#include <vector>

namespace splitinf::simlab {

/// k nonzero positions uniform without replacement, each value uniform on
/// {-1.0, -0.9, ..., -0.1, 0.1, ..., 1.0}.
Vector gen_beta(Index p, Index k, Rng& rng);

/// Full data, DUPLEX hold-out and randomised selection: tables "tpr"
/// (true positive rates and ratios to full data) and "power_curve" (long
/// format: method, abs_beta, power).
ExperimentOutput run_power(const ExperimentConfig& config);

/// Per-dataset selection frequencies of the ten active variables under
/// repeated simple splits and repeated randomisation noise: table
/// "selection_stability" with mean and sd across datasets.
ExperimentOutput run_stability(const ExperimentConfig& config);

/// Face-value and hold-out intervals for selected full-model coefficients:
/// table "coverage" with coverage and mean length per (split, method, |beta|).
/// Face-value intervals use the data named by config.fv_data.
ExperimentOutput run_coverage_coef(const ExperimentConfig& config);

/// Intervals for projection parameters in p > n: tables "coverage" and
/// "length_by_size" (mean length per selected-set size 1..8, empty when no
/// set of that size occurred).
ExperimentOutput run_coverage_projection(const ExperimentConfig& config);

/// Conditional pivot of a lasso-selected contrast under centered
/// exponential errors and estimated sigma: table "theorem1" with KS
/// distance and conditional coverage per n.
ExperimentOutput run_theorem1(const ExperimentConfig& config);

/// Fisher-information split inequalities for simple, stratified and coin
/// flip splits on a Gaussian design: table "prop1".
ExperimentOutput run_prop1(const ExperimentConfig& config);

ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Writes <dir>/<experiment>_<table>.csv for every table plus
/// <dir>/<experiment>.json (config echo, version, seed, counts, timings).
/// Returns the paths written.
std::vector<std::string> write_outputs(const ExperimentConfig& config,
                                       const ExperimentOutput& output, const std::string& dir);

}  // namespace splitinf::simlab
