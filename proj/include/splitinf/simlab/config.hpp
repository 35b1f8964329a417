#pragma once

#include "splitinf/common.hpp"
#include "splitinf/select.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace splitinf::simlab {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ExperimentKind { power, stability, coverage_coef, coverage_projection, theorem1, prop1 };

/// Data behind the face-value intervals: the full response (selection
/// ignored), or only the data that drove selection (Y1 for DS, U for R).
enum class FaceValueData { full, selection };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

/// One experiment over the grid p x rho x f. Empty grid lists and zero
/// counts mean "use the experiment's default"; see resolved().
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::power;
  Index n = 0;  // 200, or 40 for prop1
  std::vector<Index> p;
  std::vector<double> rho;
  std::vector<double> f;
  std::optional<SelectorKind> selector;  // knockoff, or stability for coverage-proj
  int n_reps = 0;
  double alpha = 0.1;
  std::uint64_t seed = 20240101;
  double knockoff_q = 0.3;
  int knockoff_offset = 1;
  double pfer = 3.0;
  double cutoff = 0.7;
  int B = 50;
  int n_folds = 10;
  int k_active = 10;
  int n_splits = 50;  // stability study: splits and noise draws per dataset
  FaceValueData fv_data = FaceValueData::full;
  std::vector<Index> theorem1_n;
  double lambda_c = 1.5;  // theorem1 penalty lambda_n = lambda_c / sqrt(n)
  int pilot = 500;        // theorem1 replications used to find the modal set
  int workers = 0;
  std::string output_path = "results";

  /// Copy with every default filled in.
  ExperimentConfig resolved() const;

  /// Throws ConfigError if the resolved grid is unusable.
  void validate() const;

  SelectorConfig selector_config() const;

  /// Applies one key=value setting (the keys of to_key_values()).
  void set(const std::string& key, const std::string& value);

  std::map<std::string, std::string> to_key_values() const;
};

/// Reads flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace splitinf::simlab
