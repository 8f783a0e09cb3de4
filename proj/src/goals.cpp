#include "goast/goals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/core.h>

namespace goast {

namespace {

constexpr double kTopTol = 1e-12;
const double kOctaHalfHeight = 0.5 / std::numbers::sqrt2;

// True if the facet of e opposite local vertex j lies on t = 1.
bool top_facet(const SimplicialMesh& mesh, int e, int j) {
  const int D = mesh.dim();
  const auto v = mesh.element_vertices(e);
  for (int i = 0; i <= D; ++i)
    if (i != j && std::abs(mesh.vertices()[v[i]][D - 1] - 1.0) > kTopTol) return false;
  return true;
}

double facet_measure(const SimplicialMesh& mesh, int e, int j) {
  const auto v = mesh.element_vertices(e);
  std::array<Point, 3> y{};
  int n = 0;
  for (int i = 0; i <= mesh.dim(); ++i)
    if (i != j) y[n++] = mesh.vertices()[v[i]];
  if (mesh.dim() == 2) return std::hypot(y[1][0] - y[0][0], y[1][1] - y[0][1]);
  const double ax = y[1][0] - y[0][0], ay = y[1][1] - y[0][1], az = y[1][2] - y[0][2];
  const double bx = y[2][0] - y[0][0], by = y[2][1] - y[0][1], bz = y[2][2] - y[0][2];
  const double cx = ay * bz - az * by, cy = az * bx - ax * bz, cz = ax * by - ay * bx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

// Visits the facet quadrature points of element e's top facets with the
// element barycentric coordinates and the physical weight.
template <class Fn>
void for_each_top_point(const FeSpace& space, int e, Fn&& fn) {
  const auto& mesh = space.mesh();
  const int D = mesh.dim();
  for (int j = 0; j <= D; ++j) {
    if (!top_facet(mesh, e, j)) continue;
    const auto& rule = quadrature(D - 1, 2 * space.degree() + 2);
    const double scale = facet_measure(mesh, e, j) * (D == 2 ? 1.0 : 2.0);
    std::array<int, 3> others{};
    int n = 0;
    for (int i = 0; i <= D; ++i)
      if (i != j) others[n++] = i;
    for (int q = 0; q < rule.size(); ++q) {
      std::array<double, 4> l{0.0, 0.0, 0.0, 0.0};
      double s = 0.0;
      for (int i = 1; i < D; ++i) {
        l[others[i]] = rule.points[q][i - 1];
        s += rule.points[q][i - 1];
      }
      l[others[0]] = 1.0 - s;
      fn(l, rule.weights[q] * scale);
    }
  }
}

double final_time_integral(const FeFunction& u) {
  const FeSpace& V = u.space();
  const int D = V.dim();
  std::array<double, 10> val{};
  double J = 0.0;
  for (const auto& f : V.mesh().boundary()) {
    if (f.tag != BoundaryTag::Top) continue;
    const auto dofs = V.element_dofs(f.element);
    for_each_top_point(V, f.element, [&](const std::array<double, 4>& l, double w) {
      // for_each_top_point visits all top facets of the element; skip the others
      if (l[f.opposite] != 0.0) return;
      shape_values(D, V.degree(), l, val);
      double s = 0.0;
      for (int b = 0; b < V.dofs_per_element(); ++b) s += u.coefficients()[dofs[b]] * val[b];
      J += w * s;
    });
  }
  return J;
}

template <class Fn>
void for_each_region_point(const FeFunction& u, int e, Fn&& fn) {
  const FeSpace& V = u.space();
  const int D = V.dim();
  const auto& t = shape_table(D, V.degree(), 2 * V.degree() + 4);
  const auto g = element_geometry(V.mesh(), e);
  const auto dofs = V.element_dofs(e);
  std::array<Gradient, 10> grads{};
  for (int q = 0; q < t.rule->size(); ++q) {
    Vec2 gx{0.0, 0.0};
    for (int b = 0; b < t.nb; ++b) {
      grads[b] = physical_gradient(g, t.dl(q, b));
      for (int k = 0; k < D - 1; ++k) gx[k] += u.coefficients()[dofs[b]] * grads[b][k];
    }
    fn(gx, std::span<const Gradient>(grads.data(), t.nb), t.rule->weights[q] * g.det);
  }
}

// |g|^{p-2}; at g = 0 only the product with g matters, which vanishes for p > 1.
double energy_weight(const Vec2& g, double p) {
  const double n2 = g[0] * g[0] + g[1] * g[1];
  if (n2 == 0.0) return 0.0;
  return std::pow(n2, 0.5 * (p - 2.0));
}

}  // namespace

Region diamond_region() {
  Region r;
  r.name = "diamond";
  r.gauge = [](const Point& x) { return (std::abs(x[0] - 0.5) + std::abs(x[1] - 0.5)) / 0.25; };
  r.volume = 2.0 * 0.25 * 0.25;
  return r;
}

Region octahedron_region() {
  Region r;
  r.name = "octahedron";
  r.gauge = [](const Point& x) {
    return std::max(std::abs(x[0] - 0.5), std::abs(x[1] - 0.5)) / 0.25 + std::abs(x[2] - 0.5) / kOctaHalfHeight;
  };
  r.volume = std::numbers::sqrt2 / 3.0 * 0.125;
  return r;
}

Region default_region(int d) {
  if (d == 1) return diamond_region();
  if (d == 2) return octahedron_region();
  throw std::invalid_argument("default_region: unsupported dimension");
}

SimplicialMesh build_region_mesh(int d) {
  const std::vector<double> xb{0.0, 0.25, 0.5, 0.75, 1.0};
  if (d == 1) return build_tensor_mesh(1, xb, xb);
  const std::vector<double> tb{0.0, 0.5 - kOctaHalfHeight, 0.5, 0.5 + kOctaHalfHeight, 1.0};
  return build_tensor_mesh(d, xb, tb);
}

const char* to_string(GoalKind kind) {
  return kind == GoalKind::FinalTimeIntegral ? "final_time" : "p_energy";
}

GoalFunctional GoalFunctional::final_time() { return GoalFunctional{}; }

GoalFunctional GoalFunctional::zero() {
  GoalFunctional g;
  g.zero_ = true;
  return g;
}

GoalFunctional GoalFunctional::p_energy(Region region, double p, const SimplicialMesh& mesh) {
  if (!(p > 1.0)) throw std::invalid_argument("p_energy goal: p must exceed 1");
  if (!region.gauge) throw std::invalid_argument("p_energy goal: region without gauge");
  GoalFunctional g;
  g.kind_ = GoalKind::PEnergyRegion;
  g.p_ = p;
  g.region_ = std::move(region);
  g.check_alignment(mesh);
  return g;
}

bool GoalFunctional::in_region(const SimplicialMesh& mesh, int e) const {
  return region_ && region_->gauge(mesh.barycenter(e)) < 1.0;
}

void GoalFunctional::check_alignment(const SimplicialMesh& mesh) const {
  if (!region_) return;
  constexpr double tol = 1e-9;
  double inside_volume = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const bool inside = in_region(mesh, e);
    for (int v : mesh.element_vertices(e)) {
      const double s = region_->gauge(mesh.vertices()[v]);
      if (inside ? s > 1.0 + tol : s < 1.0 - tol)
        throw std::invalid_argument(fmt::format("goal region '{}' is not resolved by element {}", region_->name, e));
    }
    if (inside) inside_volume += mesh.volume(e);
  }
  if (std::abs(inside_volume - region_->volume) > 1e-9 * std::max(1.0, region_->volume))
    throw std::invalid_argument(fmt::format("goal region '{}' is not resolved: covered volume {} != {}",
                                            region_->name, inside_volume, region_->volume));
}

double eval_goal(const GoalFunctional& goal, const FeFunction& u) {
  if (goal.is_zero()) return 0.0;
  if (goal.kind() == GoalKind::FinalTimeIntegral) return final_time_integral(u);
  const auto& mesh = u.space().mesh();
  double J = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (!goal.in_region(mesh, e)) continue;
    for_each_region_point(u, e, [&](const Vec2& g, std::span<const Gradient>, double w) {
      J += w * std::pow(g[0] * g[0] + g[1] * g[1], 0.5 * goal.p());
    });
  }
  return J;
}

double goal_derivative(const GoalFunctional& goal, const FeFunction& u, const FeFunction& v) {
  if (u.space().mesh_ptr() != v.space().mesh_ptr() || u.size() != v.size())
    throw std::invalid_argument("goal_derivative: functions live on different spaces");
  if (goal.is_zero()) return 0.0;
  if (goal.kind() == GoalKind::FinalTimeIntegral) return final_time_integral(v);
  const auto& V = u.space();
  double s = 0.0;
  std::array<double, 10> loc{};
  for (int e = 0; e < V.mesh().num_elements(); ++e) {
    local_goal_gradient(goal, u, e, loc);
    const auto dofs = V.element_dofs(e);
    for (int b = 0; b < V.dofs_per_element(); ++b) s += loc[b] * v.coefficients()[dofs[b]];
  }
  return s;
}

void local_goal_gradient(const GoalFunctional& goal, const FeFunction& u, int e, std::span<double> out) {
  const FeSpace& V = u.space();
  const int nb = V.dofs_per_element();
  std::fill(out.begin(), out.begin() + nb, 0.0);
  if (goal.is_zero()) return;
  if (goal.kind() == GoalKind::FinalTimeIntegral) {
    std::array<double, 10> val{};
    for_each_top_point(V, e, [&](const std::array<double, 4>& l, double w) {
      shape_values(V.dim(), V.degree(), l, val);
      for (int b = 0; b < nb; ++b) out[b] += w * val[b];
    });
    return;
  }
  if (!goal.in_region(V.mesh(), e)) return;
  const int d = V.space_dim();
  for_each_region_point(u, e, [&](const Vec2& g, std::span<const Gradient> grads, double w) {
    const double a = goal.p() * energy_weight(g, goal.p());
    for (int b = 0; b < nb; ++b) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += g[k] * grads[b][k];
      out[b] += w * a * s;
    }
  });
}

std::vector<double> assemble_goal_gradient(const FeSpace& space, const FeFunction& u, const GoalFunctional& goal) {
  if (u.size() != space.num_dofs()) throw std::invalid_argument("assemble_goal_gradient: dimension mismatch");
  std::vector<double> g(static_cast<std::size_t>(space.num_dofs()), 0.0);
  std::array<double, 10> loc{};
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    local_goal_gradient(goal, u, e, loc);
    const auto dofs = space.element_dofs(e);
    for (int b = 0; b < space.dofs_per_element(); ++b) g[dofs[b]] += loc[b];
  }
  zero_constrained(space, g);
  return g;
}

}  // namespace goast
