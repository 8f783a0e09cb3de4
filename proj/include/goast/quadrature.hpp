#pragma once

#include <array>
#include <vector>

namespace goast {

// Rule on the reference simplex {xi_i >= 0, sum xi_i <= 1} of dimension 1..3.
struct QuadratureRule {
  int dim = 0;
  int order = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;  // sum to 1/dim!

  int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxQuadratureOrder = 8;

// Collapsed (Duffy) Gauss-Jacobi product rule exact for polynomials of total
// degree <= order. All weights are positive. Rules are cached.
const QuadratureRule& quadrature(int dim, int order);

// Gauss-Jacobi nodes/weights on [-1, 1] for the weight (1-x)^alpha.
void gauss_jacobi(int n, double alpha, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace goast
