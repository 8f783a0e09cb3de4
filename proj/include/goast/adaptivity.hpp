#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goast/dwr.hpp"
#include "goast/solvers.hpp"

namespace goast {

enum class RefinementMode { Uniform, Dwr };

const char* to_string(RefinementMode mode);

struct AdaptiveConfig {
  RefinementMode mode = RefinementMode::Dwr;
  double theta = 0.5;
  int max_dofs = 100000;  // levels whose space would exceed this are not solved
  int max_levels = 12;
  int degree = 1;
  std::uint64_t seed = 20240229;
  int threads = 1;
  // Also run the estimator in uniform mode (diagnostics only; marking stays uniform).
  bool estimate_uniform = false;

  void validate() const;
};

struct ConvergenceRecord {
  int level = 0;
  int dofs = 0;
  int elements = 0;
  double J_h = 0.0;
  std::optional<double> J_error;  // J(u) - J(u_h)
  std::optional<double> eta_h, eta_h_p, eta_h_a, eta_k;
  std::optional<double> I_eff_h, I_eff_p, I_eff_a;
  int newton_iters = 0;
  int inner_iters = 0;
  std::optional<double> l2_Q_error, l2_h1_error;

  bool newton_converged = true;
  int inner_failures = 0;
  std::optional<double> remainder;      // J(u2) - J(u~) - (eta_h + eta_k)
  std::optional<double> enriched_error;  // J(u2) - J(u~)
  std::optional<double> local_sum;       // sum of element indicators
  std::optional<double> newton_residual;
  std::vector<double> residual_history;  // primal Newton residual norms
  std::vector<double> damping;           // accepted primal Newton step lengths
  std::string message;
};

struct LevelData {
  const ConvergenceRecord& record;
  const SimplicialMesh& mesh;
  const FeFunction& u;
  const EstimatorBreakdown* breakdown;  // null when the estimator was not run
  std::span<const int> marked;          // empty on the last level
};

using LevelObserver = std::function<void(const LevelData&)>;

// Smallest set (by descending |eta_i|) carrying at least theta of the total |eta_i|.
std::vector<int> doerfler_mark(std::span<const double> indicators, double theta);

struct AdaptiveResult {
  std::vector<ConvergenceRecord> records;
  bool all_converged = true;
};

// Solve, estimate, mark and refine until a stopping criterion triggers.
// Non-converged solves are recorded and the loop proceeds.
AdaptiveResult adaptive_loop(const ProblemDefinition& prob, const GoalFunctional& goal, SimplicialMesh initial,
                             const AdaptiveConfig& cfg, const NewtonConfig& ncfg, const LinearSolverConfig& lcfg,
                             const LevelObserver& observer = {});

}  // namespace goast
