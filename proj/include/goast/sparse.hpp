#pragma once

#include <span>
#include <vector>

namespace goast {

class FeSpace;

/// Square matrix in compressed sparse row storage. Column indices are sorted
/// within each row.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(int n, std::vector<int> row_ptr, std::vector<int> cols);

  int rows() const { return n_; }
  int nnz() const { return static_cast<int>(cols_.size()); }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return cols_; }
  std::vector<double>& values() { return vals_; }
  const std::vector<double>& values() const { return vals_; }

  // Position of (i, j) in the value array, or -1 if outside the pattern.
  int find(int i, int j) const;
  double operator()(int i, int j) const;
  void add(int i, int j, double v);

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  SparseOperator transpose() const;
  // Zeroes rows and columns of the listed indices and puts 1 on the diagonal.
  void constrain(std::span<const int> indices);
  void set_zero();

 private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> vals_;
};

// Pattern coupling every pair of dofs that share an element.
SparseOperator make_pattern(const FeSpace& space);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace goast
