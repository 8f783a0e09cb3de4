#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "goast/assembly.hpp"
#include "goast/goals.hpp"
#include "goast/sparse.hpp"

namespace goast {

enum class LinearSolverKind { Gmres, Direct };
enum class Preconditioner { None, Jacobi, Ilu0 };

const char* to_string(LinearSolverKind kind);
const char* to_string(Preconditioner kind);

struct LinearSolverConfig {
  LinearSolverKind kind = LinearSolverKind::Gmres;
  double gmres_rel_tol = 1e-8;
  int gmres_max_iter = 100;
  Preconditioner preconditioner = Preconditioner::Jacobi;

  void validate() const;
};

struct LinearSolveResult {
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
  double relative_residual = 0.0;
  // GMRES: least-squares residual norm after each iteration, starting with ||b||.
  std::vector<double> residual_history;
  std::string message;
};

// Unrestarted, right-preconditioned GMRES with zero initial guess, or a sparse
// LU factorization. Never throws on non-convergence; inspect `converged`.
LinearSolveResult linear_solve(const SparseOperator& K, std::span<const double> b, const LinearSolverConfig& cfg);

struct NewtonConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_iter = 50;
  int max_line_search_steps = 30;

  void validate() const;
};

struct SolveStats {
  int newton_iters = 0;
  int total_inner_iters = 0;
  double initial_residual_norm = 0.0;
  double final_residual_norm = 0.0;
  bool converged = false;
  int inner_failures = 0;
  std::vector<double> residual_history;
  std::vector<double> damping;
  std::string message;
};

struct NewtonResult {
  FeFunction u;
  SolveStats stats;
};

NewtonResult newton_solve(const ProblemDefinition& prob, std::shared_ptr<const FeSpace> space, const FeFunction& init,
                          const NewtonConfig& ncfg, const LinearSolverConfig& lcfg, const AssemblyOptions& opts = {});

struct AdjointResult {
  FeFunction z;
  LinearSolveResult solve;
};

// Solves K^T z = g with K the Jacobian at u and g the goal gradient at u.
AdjointResult solve_adjoint(const ProblemDefinition& prob, std::shared_ptr<const FeSpace> space, const FeFunction& u,
                            const GoalFunctional& goal, const LinearSolverConfig& lcfg,
                            const AssemblyOptions& opts = {});

// Uniform(0, 1) values on free dofs, zero on constrained dofs.
FeFunction random_initial_guess(std::shared_ptr<const FeSpace> space, std::uint64_t seed);

}  // namespace goast
