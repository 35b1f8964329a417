#include "splitinf/common.hpp"

namespace splitinf {

void check_index_set(const IndexSet& s, Index bound, const char* what) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || s[k] >= bound) {
      throw DomainError(std::string(what) + ": index " + std::to_string(s[k]) +
                        " out of range [0, " + std::to_string(bound) + ")");
    }
    if (k > 0 && s[k] <= s[k - 1]) {
      throw DomainError(std::string(what) + ": indices must be strictly increasing");
    }
  }
}

IndexSet complement(const IndexSet& s, Index n) {
  IndexSet out;
  out.reserve(static_cast<std::size_t>(n) - s.size());
  std::size_t k = 0;
  for (Index i = 0; i < n; ++i) {
    if (k < s.size() && s[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

Matrix select_columns(const Matrix& X, const IndexSet& cols) {
  Matrix out(X.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = X.col(cols[k]);
  return out;
}

Matrix select_rows(const Matrix& X, const IndexSet& rows) {
  Matrix out(static_cast<Index>(rows.size()), X.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = X.row(rows[k]);
  return out;
}

Vector select_rows(const Vector& y, const IndexSet& rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) out(static_cast<Index>(k)) = y(rows[k]);
  return out;
}

}  // namespace splitinf
