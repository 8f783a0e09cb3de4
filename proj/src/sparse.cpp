#include "goast/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "goast/fespace.hpp"

namespace goast {

SparseOperator::SparseOperator(int n, std::vector<int> row_ptr, std::vector<int> cols)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(cols_.size(), 0.0) {
  if (static_cast<int>(row_ptr_.size()) != n + 1 || row_ptr_.back() != static_cast<int>(cols_.size()))
    throw std::invalid_argument("SparseOperator: inconsistent CSR arrays");
}

int SparseOperator::find(int i, int j) const {
  const auto first = cols_.begin() + row_ptr_[i];
  const auto last = cols_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? static_cast<int>(it - cols_.begin()) : -1;
}

double SparseOperator::operator()(int i, int j) const {
  const int k = find(i, j);
  return k < 0 ? 0.0 : vals_[k];
}

void SparseOperator::add(int i, int j, double v) {
  const int k = find(i, j);
  if (k < 0) throw std::out_of_range("SparseOperator::add: entry outside the sparsity pattern");
  vals_[k] += v;
}

void SparseOperator::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
    y[i] = s;
  }
}

void SparseOperator::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.begin() + n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[cols_[k]] += vals_[k] * x[i];
}

std::vector<double> SparseOperator::operator*(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(n_));
  multiply(x, y);
  return y;
}

SparseOperator SparseOperator::transpose() const {
  std::vector<int> count(static_cast<std::size_t>(n_) + 1, 0);
  for (int c : cols_) ++count[c + 1];
  for (int i = 0; i < n_; ++i) count[i + 1] += count[i];
  std::vector<int> cols(cols_.size());
  std::vector<double> vals(vals_.size());
  std::vector<int> next(count.begin(), count.end() - 1);
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int pos = next[cols_[k]]++;
      cols[pos] = i;
      vals[pos] = vals_[k];
    }
  SparseOperator t(n_, std::move(count), std::move(cols));
  t.vals_ = std::move(vals);
  return t;
}

void SparseOperator::constrain(std::span<const int> indices) {
  std::vector<char> mask(static_cast<std::size_t>(n_), 0);
  for (int i : indices) mask[i] = 1;
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (mask[i] || mask[cols_[k]]) vals_[k] = (i == cols_[k]) ? 1.0 : 0.0;
}

void SparseOperator::set_zero() { std::fill(vals_.begin(), vals_.end(), 0.0); }

SparseOperator make_pattern(const FeSpace& space) {
  const int n = space.num_dofs();
  const int nb = space.dofs_per_element();
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    const auto dofs = space.element_dofs(e);
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b) rows[dofs[a]].push_back(dofs[b]);
  }
  std::vector<int> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> cols;
  for (int i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    cols.insert(cols.end(), r.begin(), r.end());
    row_ptr[i + 1] = static_cast<int>(cols.size());
    std::vector<int>().swap(r);
  }
  return SparseOperator(n, std::move(row_ptr), std::move(cols));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace goast
