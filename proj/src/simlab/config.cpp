#include "splitinf/simlab/config.hpp"

#include "splitinf/split.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace splitinf::simlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("config: bad value '" + text + "' for " + key);
  }
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt_double(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::power:
      return "power";
    case ExperimentKind::stability:
      return "stability";
    case ExperimentKind::coverage_coef:
      return "coverage-coef";
    case ExperimentKind::coverage_projection:
      return "coverage-proj";
    case ExperimentKind::theorem1:
      return "theorem1";
    case ExperimentKind::prop1:
      return "prop1";
  }
  return "?";
}

ExperimentKind experiment_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::power, ExperimentKind::stability, ExperimentKind::coverage_coef,
                 ExperimentKind::coverage_projection, ExperimentKind::theorem1,
                 ExperimentKind::prop1}) {
    if (name == to_string(k)) return k;
  }
  if (name == "coverage_coef") return ExperimentKind::coverage_coef;
  if (name == "coverage_projection" || name == "coverage-projection") {
    return ExperimentKind::coverage_projection;
  }
  throw ConfigError("config: unknown experiment '" + name + "'");
}

ExperimentConfig ExperimentConfig::resolved() const {
  ExperimentConfig c = *this;
  if (!c.selector) {
    c.selector = c.experiment == ExperimentKind::coverage_projection ? SelectorKind::stability
                                                                    : SelectorKind::knockoff;
  }
  const bool ko = c.selector == SelectorKind::knockoff;
  if (c.n == 0) c.n = c.experiment == ExperimentKind::prop1 ? 40 : 200;
  switch (c.experiment) {
    case ExperimentKind::power:
      if (c.p.empty()) c.p = ko ? std::vector<Index>{30, 50} : std::vector<Index>{200, 1000};
      if (c.rho.empty()) c.rho = {0.0, 0.5};
      if (c.f.empty()) c.f = {0.5, 0.75};
      if (c.n_reps == 0) c.n_reps = 300;
      break;
    case ExperimentKind::stability:
      if (c.p.empty()) c.p = {ko ? Index{50} : Index{400}};
      if (c.rho.empty()) c.rho = {0.5};
      if (c.f.empty()) c.f = {0.5, 0.75};
      if (c.n_reps == 0) c.n_reps = 100;
      break;
    case ExperimentKind::coverage_coef:
      if (c.p.empty()) c.p = {30};
      if (c.rho.empty()) c.rho = {0.0, 0.5};
      if (c.f.empty()) c.f = {0.5, 0.75};
      if (c.n_reps == 0) c.n_reps = 2000;
      break;
    case ExperimentKind::coverage_projection:
      if (c.p.empty()) c.p = {400};
      if (c.rho.empty()) c.rho = {0.0, 0.5};
      if (c.f.empty()) c.f = {0.5, 0.75};
      if (c.n_reps == 0) c.n_reps = 2000;
      break;
    case ExperimentKind::theorem1:
      if (c.p.empty()) c.p = {5};
      if (c.rho.empty()) c.rho = {0.0};
      if (c.f.empty()) c.f = {0.75};
      if (c.theorem1_n.empty()) c.theorem1_n = {100, 400, 1600};
      if (c.n_reps == 0) c.n_reps = 2000;
      break;
    case ExperimentKind::prop1:
      if (c.p.empty()) c.p = {3};
      if (c.rho.empty()) c.rho = {0.0};
      if (c.f.empty()) c.f = {0.5};
      if (c.n_reps == 0) c.n_reps = 10000;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  const ExperimentConfig c = resolved();
  if (c.n < 4) throw ConfigError("config: n must be at least 4");
  if (c.n_reps < 1) throw ConfigError("config: reps must be positive");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("config: alpha must be in (0, 1)");
  if (!(c.cutoff > 0.5 && c.cutoff < 1.0)) throw ConfigError("config: cutoff must be in (0.5, 1)");
  if (!(c.pfer > 0.0)) throw ConfigError("config: pfer must be positive");
  if (!(c.knockoff_q > 0.0 && c.knockoff_q < 1.0)) throw ConfigError("config: q must be in (0, 1)");
  if (c.B < 10) throw ConfigError("config: B must be at least 10");
  if (c.n_folds < 2) throw ConfigError("config: folds must be at least 2");
  for (double r : c.rho) {
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("config: rho must be in [0, 1)");
  }
  for (double f : c.f) {
    const Index k = split_size(c.n, f);
    if (!(f > 0.0 && f < 1.0) || k < 1 || k >= c.n) {
      throw ConfigError("config: f must satisfy 1 <= round(f n) < n");
    }
  }
  // Knockoffs run on the DS selection half, the smallest design they see.
  Index smallest_half = c.n;
  for (double f : c.f) smallest_half = std::min(smallest_half, split_size(c.n, f));
  for (Index p : c.p) {
    if (p < 1) throw ConfigError("config: p must be positive");
    if (c.selector == SelectorKind::knockoff &&
        (c.experiment == ExperimentKind::power || c.experiment == ExperimentKind::stability ||
         c.experiment == ExperimentKind::coverage_coef) &&
        smallest_half < 2 * p) {
      throw ConfigError("config: the knockoff selector needs round(f n) >= 2p on every split");
    }
  }
  if (c.experiment == ExperimentKind::power && c.k_active > *std::min_element(c.p.begin(), c.p.end())) {
    throw ConfigError("config: k_active exceeds p");
  }
  if (c.experiment == ExperimentKind::coverage_projection && c.selector != SelectorKind::stability) {
    throw ConfigError("config: coverage-proj runs with the stability selector");
  }
  if (c.experiment == ExperimentKind::theorem1 && c.pilot < 20) {
    throw ConfigError("config: pilot must be at least 20");
  }
}

SelectorConfig ExperimentConfig::selector_config() const {
  SelectorConfig s;
  s.kind = selector.value_or(SelectorKind::knockoff);
  s.knockoff_q = knockoff_q;
  s.knockoff_offset = knockoff_offset;
  s.pfer = pfer;
  s.cutoff = cutoff;
  s.B = B;
  s.n_folds = n_folds;
  return s;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "experiment") {
    experiment = experiment_from_string(value);
  } else if (key == "n") {
    n = parse_number<Index>(key, value);
  } else if (key == "p") {
    p = parse_list<Index>(key, value);
  } else if (key == "rho") {
    rho = parse_list<double>(key, value);
  } else if (key == "f") {
    f = parse_list<double>(key, value);
  } else if (key == "selector") {
    if (value == "knockoff") {
      selector = SelectorKind::knockoff;
    } else if (value == "stability") {
      selector = SelectorKind::stability;
    } else {
      throw ConfigError("config: unknown selector '" + value + "'");
    }
  } else if (key == "reps") {
    n_reps = parse_number<int>(key, value);
  } else if (key == "alpha") {
    alpha = parse_number<double>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "q") {
    knockoff_q = parse_number<double>(key, value);
  } else if (key == "offset") {
    knockoff_offset = parse_number<int>(key, value);
  } else if (key == "pfer") {
    pfer = parse_number<double>(key, value);
  } else if (key == "cutoff") {
    cutoff = parse_number<double>(key, value);
  } else if (key == "B") {
    B = parse_number<int>(key, value);
  } else if (key == "folds") {
    n_folds = parse_number<int>(key, value);
  } else if (key == "k_active") {
    k_active = parse_number<int>(key, value);
  } else if (key == "splits") {
    n_splits = parse_number<int>(key, value);
  } else if (key == "fv_data") {
    if (value == "full") {
      fv_data = FaceValueData::full;
    } else if (value == "selection") {
      fv_data = FaceValueData::selection;
    } else {
      throw ConfigError("config: fv_data must be 'full' or 'selection'");
    }
  } else if (key == "theorem1_n") {
    theorem1_n = parse_list<Index>(key, value);
  } else if (key == "lambda_c") {
    lambda_c = parse_number<double>(key, value);
  } else if (key == "pilot") {
    pilot = parse_number<int>(key, value);
  } else if (key == "workers") {
    workers = parse_number<int>(key, value);
  } else if (key == "out") {
    output_path = value;
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

std::map<std::string, std::string> ExperimentConfig::to_key_values() const {
  return {
      {"experiment", to_string(experiment)},
      {"n", std::to_string(n)},
      {"p", join(p)},
      {"rho", join(rho)},
      {"f", join(f)},
      {"selector", !selector ? "" : *selector == SelectorKind::knockoff ? "knockoff" : "stability"},
      {"reps", std::to_string(n_reps)},
      {"alpha", fmt_double(alpha)},
      {"seed", std::to_string(seed)},
      {"q", fmt_double(knockoff_q)},
      {"offset", std::to_string(knockoff_offset)},
      {"pfer", fmt_double(pfer)},
      {"cutoff", fmt_double(cutoff)},
      {"B", std::to_string(B)},
      {"folds", std::to_string(n_folds)},
      {"k_active", std::to_string(k_active)},
      {"splits", std::to_string(n_splits)},
      {"fv_data", fv_data == FaceValueData::full ? "full" : "selection"},
      {"theorem1_n", join(theorem1_n)},
      {"lambda_c", fmt_double(lambda_c)},
      {"pilot", std::to_string(pilot)},
      {"workers", std::to_string(workers)},
      {"out", output_path},
  };
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) + " has no '='");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config: line " + std::to_string(line_no) + " has no key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

}  // namespace splitinf::simlab
