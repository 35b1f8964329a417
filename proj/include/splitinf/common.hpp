#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace splitinf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Sorted, strictly increasing, zero-based index set.
using IndexSet = std::vector<Index>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class EmptySelection : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class InsufficientConditioning : public Error {
 public:
  using Error::Error;
};

// Validates that `s` is strictly increasing and every entry lies in [0, bound).
void check_index_set(const IndexSet& s, Index bound, const char* what);

IndexSet complement(const IndexSet& s, Index n);

Matrix select_columns(const Matrix& X, const IndexSet& cols);
Matrix select_rows(const Matrix& X, const IndexSet& rows);
Vector select_rows(const Vector& y, const IndexSet& rows);

}  // namespace splitinf
