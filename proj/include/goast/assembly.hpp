#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "goast/fespace.hpp"
#include "goast/sparse.hpp"

namespace goast {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

// Closed-form solution with the derivatives needed to manufacture a source.
struct ExactSolution {
  ScalarField value;
  std::function<Gradient(const Point&)> gradient;  // (grad_x, dt) in the first D slots
  std::function<Mat2(const Point&)> hessian_x;
};

/// One initial-boundary value problem
///   dt u - div_x((|grad_x u|^2 + eps^2)^{(p-2)/2} grad_x u) = f  in (0,1)^{d+1}
/// with homogeneous lateral and initial data.
struct ProblemDefinition {
  double p = 2.0;
  double eps = 1.0;
  int d = 1;
  ScalarField source = [](const Point&) { return 0.0; };
  std::optional<ExactSolution> exact;
  std::optional<double> exact_goal;

  void validate() const;
};

// (|g|^2 + eps^2)^{(p-2)/2} g
Vec2 flux(const Vec2& g, double p, double eps);
// (|g|^2+eps^2)^{(p-2)/2} I + (p-2)(|g|^2+eps^2)^{(p-4)/2} g g^T
Mat2 flux_jacobian(const Vec2& g, double p, double eps);

struct AssemblyOptions {
  int quad_order = -1;  // -1: 2k+2 for the space being assembled
  int threads = 1;
};

int quadrature_order(const FeSpace& space, const AssemblyOptions& opts);

// Element contribution of A(u)(phi_b) = (dt u, phi_b) + (flux, grad_x phi_b) - (f, phi_b).
void local_residual(const FeSpace& space, const FeFunction& u, const ProblemDefinition& prob, int e,
                    int order, std::span<double> out);
// Element Jacobian, row-major [test][trial]:
//   (dt phi_c, phi_b) + (flux_jacobian(grad_x u) grad_x phi_c, grad_x phi_b).
void local_jacobian(const FeSpace& space, const FeFunction& u, const ProblemDefinition& prob, int e,
                    int order, std::span<double> out);

// Element time-derivative matrix, [test][trial]: (dt phi_c, phi_b).
void local_time_matrix(const FeSpace& space, int e, int order, std::span<double> out);

// Global residual; constrained entries are zero.
std::vector<double> assemble_residual(const FeSpace& space, const FeFunction& u,
                                      const ProblemDefinition& prob, const AssemblyOptions& opts = {});
// Newton Jacobian T_h + A_h(u) + A'_h(u) with identity rows/columns on
// constrained dofs.
SparseOperator assemble_jacobian(const FeSpace& space, const FeFunction& u, const ProblemDefinition& prob,
                                 const AssemblyOptions& opts = {});
// Time-derivative matrix (T w, v) = (dt w, v), same constraint treatment.
SparseOperator assemble_time_matrix(const FeSpace& space, const AssemblyOptions& opts = {});
// f_h = (f, phi_i); constrained entries zero.
std::vector<double> assemble_load(const FeSpace& space, const ProblemDefinition& prob,
                                  const AssemblyOptions& opts = {});

void zero_constrained(const FeSpace& space, std::span<double> v);

// Runs fn(begin, end, worker) over [0, n) split into contiguous chunks.
void parallel_chunks(int n, int threads, const std::function<void(int, int, int)>& fn);

}  // namespace goast
