#include "splitinf/simlab/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace splitinf::simlab {

std::string format_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      if (std::isnan(v)) return "";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10g", v);
      return buf;
    }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string out = "\"";
      for (char c : v) {
        if (c == '"') out += '"';
        out += c;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, cell);
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != schema.size()) {
    throw std::invalid_argument("ResultTable " + name + ": row width " +
                                std::to_string(row.size()) + " != " +
                                std::to_string(schema.size()));
  }
  rows.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (j) out += ',';
    out += schema[j];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_cell(row[j]);
    }
    out += '\n';
  }
  return out;
}

void ResultTable::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_csv();
}

std::size_t ResultTable::column(const std::string& col) const {
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (schema[j] == col) return j;
  }
  throw std::out_of_range("ResultTable " + name + ": no column " + col);
}

const ResultTable& ExperimentOutput::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("no table " + name);
}

double ExperimentOutput::resample_rate() const {
  return replications > 0 ? static_cast<double>(resamples) / static_cast<double>(replications)
                          : 0.0;
}

}  // namespace splitinf::simlab
