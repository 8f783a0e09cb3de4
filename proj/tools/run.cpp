#include "run.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "goast/io.hpp"
#include "goast/report.hpp"

namespace goast::cli {

int run(const RunConfig& cfg, std::ostream& log) {
  Experiment ex = make_experiment(cfg.preset, cfg.d, cfg.p, cfg.eps, cfg.goal);

  AdaptiveConfig acfg;
  acfg.mode = cfg.mode;
  acfg.theta = cfg.theta;
  acfg.max_dofs = cfg.max_dofs;
  acfg.max_levels = cfg.max_levels;
  acfg.degree = cfg.degree;
  acfg.seed = cfg.seed;
  acfg.threads = cfg.threads;
  LinearSolverConfig lcfg;
  lcfg.kind = cfg.solver;
  lcfg.preconditioner = cfg.precond;

  if (!cfg.out_vtk_dir.empty()) std::filesystem::create_directories(cfg.out_vtk_dir);

  fmt::print(log, "preset {} d={} p={} eps={} k={} mode={} goal={}\n", to_string(cfg.preset), cfg.d, cfg.p, cfg.eps,
             cfg.degree, to_string(cfg.mode), to_string(ex.goal.kind()));
  if (ex.problem.exact_goal) fmt::print(log, "reference J(u) = {}\n", format_real(*ex.problem.exact_goal));
  fmt::print(log, "{:>5} {:>9} {:>9} {:>22} {:>12} {:>12} {:>8} {:>7} {:>7}\n", "level", "dofs", "elements", "J_h",
             "J_error", "eta_h", "I_eff_h", "newton", "inner");

  auto observer = [&](const LevelData& lv) {
    const auto& r = lv.record;
    auto o = [](const std::optional<double>& v, const char* spec) {
      return v ? fmt::format(fmt::runtime(spec), *v) : std::string("-");
    };
    fmt::print(log, "{:>5} {:>9} {:>9} {:>22.15g} {:>12} {:>12} {:>8} {:>7} {:>7}{}\n", r.level, r.dofs, r.elements,
               r.J_h, o(r.J_error, "{:.4e}"), o(r.eta_h, "{:.4e}"), o(r.I_eff_h, "{:.4f}"), r.newton_iters,
               r.inner_iters, r.newton_converged ? "" : "  (not converged)");
    if (!cfg.out_vtk_dir.empty()) {
      VtkData data;
      data.point_data["u"] = vertex_values(lv.u);
      if (lv.breakdown) data.cell_data["eta"] = lv.breakdown->local;
      std::vector<double> marked(lv.mesh.num_elements(), 0.0);
      for (int e : lv.marked) marked[e] = 1.0;
      data.cell_data["marked"] = std::move(marked);
      write_vtk(fmt::format("{}/level_{:03d}.vtk", cfg.out_vtk_dir, r.level), lv.mesh, data);
    }
  };

  const auto result = adaptive_loop(ex.problem, ex.goal, std::move(ex.mesh), acfg, NewtonConfig{}, lcfg, observer);

  std::string footer;
  if (result.records.size() >= 3) {
    footer = format_rates(report_rates(result.records, cfg.d));
    log << footer;
  } else {
    log << "too few levels for a rate report\n";
  }
  const auto& last = result.records.back();
  if (last.I_eff_h)
    fmt::print(log, "final efficiency: I_eff_h={:.4f} I_eff_p={:.4f} I_eff_a={:.4f}\n", *last.I_eff_h,
               last.I_eff_p.value_or(0.0), last.I_eff_a.value_or(0.0));

  if (!cfg.out_csv.empty()) {
    std::ofstream os(cfg.out_csv);
    if (!os) throw std::runtime_error("cannot open " + cfg.out_csv);
    write_csv(os, result.records, footer);
  }
  if (!result.all_converged) {
    for (const auto& r : result.records)
      if (!r.newton_converged) fmt::print(log, "level {}: {}\n", r.level, r.message);
    return kExitSolverFailure;
  }
  return kExitOk;
}

}  // namespace goast::cli
