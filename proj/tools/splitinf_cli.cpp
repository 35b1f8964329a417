// Command-line front end for the simulation studies.
//
//   splitinf power --selector stability --p 200 --reps 100 --out results
//   splitinf coverage-coef --config study.cfg --seed 7
//
// Exit status: 0 success, 1 configuration error, 2 numerical failures
// beyond the resample budget.

#include "splitinf/simlab/experiments.hpp"
#include "splitinf/simlab/replicate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

namespace {

constexpr double kResampleBudget = 0.01;

struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "key = value configuration file");
  const std::pair<const char*, const char*> flags[] = {
      {"seed", "64-bit master seed"},
      {"reps", "replications per grid cell"},
      {"out", "output directory"},
      {"workers", "OpenMP workers for the replication fan-out"},
      {"n", "sample size"},
      {"p", "number of covariates (comma list)"},
      {"rho", "Toeplitz correlation (comma list)"},
      {"f", "selection fraction (comma list)"},
      {"selector", "knockoff | stability"},
      {"q", "knockoff target FDR"},
      {"pfer", "stability selection PFER bound"},
      {"cutoff", "stability selection frequency cutoff"},
      {"alpha", "1 - nominal coverage"},
      {"B", "stability selection subsamples"},
      {"splits", "splits and noise draws per dataset (stability study)"},
      {"fv-data", "face-value intervals on full | selection data"},
      {"theorem1-n", "sample sizes for theorem1 (comma list)"},
      {"lambda-c", "theorem1 penalty constant"},
      {"pilot", "theorem1 pilot replications"},
  };
  for (const auto& [name, help] : flags) {
    std::string key = name;
    for (char& ch : key) {
      if (ch == '-') ch = '_';
    }
    cmd->add_option_function<std::string>(
        std::string("--") + name, [&o, key](const std::string& v) { o.values[key] = v; }, help);
  }
}

int run(splitinf::simlab::ExperimentKind kind, const Overrides& o) {
  using namespace splitinf::simlab;
  ExperimentConfig config;
  try {
    if (!o.config_path.empty()) {
      for (const auto& [k, v] : read_config_file(o.config_path)) config.set(k, v);
    }
    for (const auto& [k, v] : o.values) config.set(k, v);
    config.experiment = kind;
    config.validate();
  } catch (const splitinf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  ExperimentOutput output;
  try {
    output = run_experiment(config);
  } catch (const ResampleBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const splitinf::InsufficientConditioning& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const splitinf::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const splitinf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  const std::string dir = config.resolved().output_path;
  for (const auto& path : write_outputs(config, output, dir)) std::cout << path << '\n';
  if (output.resample_rate() >= kResampleBudget) {
    std::fprintf(stderr, "error: %ld of %ld replications resampled (budget 1%%)\n",
                 output.resamples, output.replications);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using splitinf::simlab::ExperimentKind;
  CLI::App app{"Data splitting versus randomisation for post-selection inference"};
  app.require_subcommand(1);

  const std::pair<const char*, ExperimentKind> commands[] = {
      {"power", ExperimentKind::power},
      {"stability", ExperimentKind::stability},
      {"coverage-coef", ExperimentKind::coverage_coef},
      {"coverage-proj", ExperimentKind::coverage_projection},
      {"theorem1", ExperimentKind::theorem1},
      {"prop1", ExperimentKind::prop1},
  };
  Overrides overrides;
  int status = 0;
  for (const auto& [name, kind] : commands) {
    CLI::App* cmd = app.add_subcommand(name, std::string("run the ") + name + " study");
    add_flags(cmd, overrides);
    cmd->callback([&status, &overrides, kind = kind] { status = run(kind, overrides); });
  }
  app.add_subcommand("version", "print the version")->callback([] {
    std::cout << "splitinf " << SPLITINF_VERSION << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return status;
}
