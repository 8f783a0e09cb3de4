#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "run.hpp"

int main(int argc, char** argv) {
  using namespace goast;
  cli::RunConfig cfg;
  std::string preset = "smooth_convergence";
  std::string mode;

  CLI::App app{"Goal-oriented adaptive space-time FEM for the parabolic p-Laplacian"};
  app.add_option("--preset", preset, "smooth_convergence | linear_goal | nonlinear_goal | custom")
      ->check(CLI::IsMember({"smooth_convergence", "linear_goal", "nonlinear_goal", "custom"}));
  app.add_option("--goal", cfg.goal, "goal for the custom preset")->check(CLI::IsMember({"final_time", "p_energy"}));
  app.add_option("--dim", cfg.d, "spatial dimension")->check(CLI::IsMember({1, 2}));
  app.add_option("--p", cfg.p, "exponent p > 1")->check(CLI::PositiveNumber);
  app.add_option("--epsilon", cfg.eps, "regularization")->check(CLI::PositiveNumber);
  app.add_option("--degree", cfg.degree, "polynomial degree")->check(CLI::IsMember({1, 2}));
  app.add_option("--mode", mode, "uniform | dwr (default: uniform for smooth_convergence, dwr otherwise)")
      ->check(CLI::IsMember({"uniform", "dwr"}));
  app.add_option("--theta", cfg.theta, "Doerfler fraction")->check(CLI::Range(0.0, 1.0));
  app.add_option("--max-dofs", cfg.max_dofs, "dof budget")->check(CLI::PositiveNumber);
  app.add_option("--max-levels", cfg.max_levels, "level budget")->check(CLI::PositiveNumber);
  app.add_option("--solver", cfg.solver, "gmres | direct")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, LinearSolverKind>{{"gmres", LinearSolverKind::Gmres}, {"direct", LinearSolverKind::Direct}}));
  app.add_option("--precond", cfg.precond, "none | jacobi | ilu0")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Preconditioner>{
          {"none", Preconditioner::None}, {"jacobi", Preconditioner::Jacobi}, {"ilu0", Preconditioner::Ilu0}}));
  app.add_option("--out-csv", cfg.out_csv, "per-level CSV output");
  app.add_option("--out-vtk-dir", cfg.out_vtk_dir, "directory for per-level VTK files");
  app.add_option("--seed", cfg.seed, "seed of the initial Newton guess");
  app.add_option("--threads", cfg.threads, "assembly threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  cfg.preset = *parse_preset(preset);
  if (mode.empty()) mode = cfg.preset == Preset::SmoothConvergence ? "uniform" : "dwr";
  cfg.mode = mode == "uniform" ? RefinementMode::Uniform : RefinementMode::Dwr;

  try {
    return cli::run(cfg, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitSolverFailure;
  }
}
