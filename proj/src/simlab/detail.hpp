#pragma once

#include "splitinf/simlab/config.hpp"
#include "splitinf/simlab/table.hpp"

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace splitinf::simlab::detail {

using Clock = std::chrono::steady_clock;

inline double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

inline std::uint64_t cell_id(ExperimentKind kind, std::uint64_t cell) {
  return (static_cast<std::uint64_t>(kind) + 1) << 32 | cell;
}

inline std::vector<std::string> grid_schema() { return {"selector", "n", "p", "rho", "f"}; }

inline std::vector<Cell> grid_prefix(const ExperimentConfig& c, Index p, double rho, double f) {
  return {Cell{std::string(c.selector == SelectorKind::stability ? "stability" : "knockoff")},
          Cell{static_cast<std::int64_t>(c.n)}, Cell{static_cast<std::int64_t>(p)}, Cell{rho},
          Cell{f}};
}

}  // namespace splitinf::simlab::detail
