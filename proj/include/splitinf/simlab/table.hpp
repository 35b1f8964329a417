#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace splitinf::simlab {

/// A CSV cell; monostate prints as an empty field.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct ResultTable {
  std::string name;
  std::vector<std::string> schema;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument if the row width differs from the schema.
  void add_row(std::vector<Cell> row);

  /// Header plus rows, '\n' line ends, doubles as %.10g.
  std::string to_csv() const;
  void write_csv(const std::string& path) const;

  /// Index of a column name; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
};

std::string format_cell(const Cell& cell);

/// Everything an experiment produces.
struct ExperimentOutput {
  std::vector<ResultTable> tables;
  long replications = 0;
  long resamples = 0;
  std::map<std::string, double> timings;  // seconds, by phase

  const ResultTable& table(const std::string& name) const;
  double resample_rate() const;
};

}  // namespace splitinf::simlab
