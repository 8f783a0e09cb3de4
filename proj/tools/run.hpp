#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "goast/adaptivity.hpp"
#include "goast/presets.hpp"

namespace goast::cli {

struct RunConfig {
  Preset preset = Preset::SmoothConvergence;
  std::string goal = "final_time";  // custom preset only
  int d = 1;
  double p = 4.0;
  double eps = 1.0;
  int degree = 1;
  RefinementMode mode = RefinementMode::Uniform;
  double theta = 0.5;
  int max_dofs = 100000;
  int max_levels = 8;
  LinearSolverKind solver = LinearSolverKind::Gmres;
  Preconditioner precond = Preconditioner::Jacobi;
  std::string out_csv;
  std::string out_vtk_dir;
  std::uint64_t seed = 20240229;
  int threads = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs the experiment, printing a per-level summary and rates to `log`.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace goast::cli
