#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "goast/assembly.hpp"
#include "goast/fespace.hpp"

namespace goast {

// Convex polytope given by a gauge function: inside iff gauge(x) <= 1.
struct Region {
  std::string name;
  std::function<double(const Point&)> gauge;
  double volume = 0.0;

  bool contains(const Point& x, double tol = 1e-12) const { return gauge(x) <= 1.0 + tol; }
};

// |x - 1/2| + |t - 1/2| <= 1/4 in (x, t).
Region diamond_region();
// Regular octahedron, edge length 1/2, centered at (1/2, 1/2, 1/2): square
// cross-sections parallel to the (x1, x2)-plane, apexes on the t-axis.
Region octahedron_region();
Region default_region(int d);

// Initial mesh whose element facets resolve default_region(d).
SimplicialMesh build_region_mesh(int d);

enum class GoalKind { FinalTimeIntegral, PEnergyRegion };

const char* to_string(GoalKind kind);

/// J(u) = int_Omega u(., T)            (FinalTimeIntegral)
/// J(u) = int_{Q_I} |grad_x u|^p dQ    (PEnergyRegion)
class GoalFunctional {
 public:
  static GoalFunctional final_time();
  // Throws std::invalid_argument unless `mesh` resolves the region.
  static GoalFunctional p_energy(Region region, double p, const SimplicialMesh& mesh);
  static GoalFunctional zero();

  GoalKind kind() const { return kind_; }
  double p() const { return p_; }
  const std::optional<Region>& region() const { return region_; }
  bool is_zero() const { return zero_; }

  bool in_region(const SimplicialMesh& mesh, int e) const;
  void check_alignment(const SimplicialMesh& mesh) const;

 private:
  GoalKind kind_ = GoalKind::FinalTimeIntegral;
  double p_ = 2.0;
  std::optional<Region> region_;
  bool zero_ = false;
};

double eval_goal(const GoalFunctional& goal, const FeFunction& u);
// J'(u)(v)
double goal_derivative(const GoalFunctional& goal, const FeFunction& u, const FeFunction& v);

// Element contribution J'(u)(phi_b) restricted to element e.
void local_goal_gradient(const GoalFunctional& goal, const FeFunction& u, int e, std::span<double> out);

// g_i = J'(u)(phi_i); constrained entries zero.
std::vector<double> assemble_goal_gradient(const FeSpace& space, const FeFunction& u, const GoalFunctional& goal);

}  // namespace goast
