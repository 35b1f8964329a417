#include "splitinf/simlab/experiments.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

namespace splitinf::simlab {

std::vector<std::string> write_outputs(const ExperimentConfig& config,
                                       const ExperimentOutput& output, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const ExperimentConfig c = config.resolved();
  const std::string stem = to_string(c.experiment);
  std::vector<std::string> written;

  nlohmann::json meta;
  meta["experiment"] = stem;
  meta["version"] = SPLITINF_VERSION;
  meta["seed"] = c.seed;
  meta["config"] = c.to_key_values();
  meta["replications"] = output.replications;
  meta["resamples"] = output.resamples;
  meta["resample_rate"] = output.resample_rate();
  meta["timings_seconds"] = output.timings;
  meta["tables"] = nlohmann::json::array();

  for (const auto& t : output.tables) {
    const std::string path = (fs::path(dir) / (stem + "_" + t.name + ".csv")).string();
    t.write_csv(path);
    written.push_back(path);
    meta["tables"].push_back({{"name", t.name}, {"path", path}, {"rows", t.rows.size()}});
  }
  const std::string json_path = (fs::path(dir) / (stem + ".json")).string();
  std::ofstream(json_path) << meta.dump(2) << '\n';
  written.push_back(json_path);
  return written;
}

}  // namespace splitinf::simlab
