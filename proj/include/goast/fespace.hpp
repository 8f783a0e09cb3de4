#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "goast/mesh.hpp"
#include "goast/quadrature.hpp"

namespace goast {

using Gradient = std::array<double, 3>;
using ScalarField = std::function<double(const Point&)>;
// Spatial gradient of an analytic field; entries beyond d are ignored.
using VectorField = std::function<Gradient(const Point&)>;

// Affine map from the reference simplex: x = x0 + B xi.
struct ElementGeometry {
  int dim = 0;
  Point x0{};
  std::array<std::array<double, 3>, 3> B{};  // B[row][col], column j = x_{j+1} - x_0
  double det = 0.0;                          // |det B|
  std::array<Gradient, 4> grad_lambda{};     // gradients of barycentric coordinates

  double volume() const;
  Point map(const std::array<double, 3>& xi) const;
  // Barycentric coordinates of a physical point.
  std::array<double, 4> barycentric(const Point& x) const;
};

ElementGeometry element_geometry(const SimplicialMesh& mesh, int e);

int num_local_dofs(int dim, int degree);

// Local edge (a, b) of a simplex in the fixed order (0,1),(0,2),..,(D-1,D).
std::array<int, 2> local_edge(int dim, int edge);

// Lagrange shape functions in barycentric coordinates: vertex functions first,
// then edge functions in local_edge order.
void shape_values(int dim, int degree, const std::array<double, 4>& lambda, std::span<double> values);
// d phi_b / d lambda_j, row-major [b][j] with dim + 1 columns.
void shape_dlambda(int dim, int degree, const std::array<double, 4>& lambda, std::span<double> dl);

// Shape data tabulated at the points of a quadrature rule.
struct ShapeTable {
  int dim = 0;
  int degree = 0;
  int nb = 0;
  const QuadratureRule* rule = nullptr;
  std::vector<double> values;   // [q][b]
  std::vector<double> dlambda;  // [q][b][j]

  double value(int q, int b) const { return values[q * nb + b]; }
  const double* dl(int q, int b) const { return &dlambda[(q * nb + b) * (dim + 1)]; }
};

const ShapeTable& shape_table(int dim, int degree, int order);

inline Gradient physical_gradient(const ElementGeometry& g, const double* dl) {
  Gradient out{0.0, 0.0, 0.0};
  for (int j = 0; j <= g.dim; ++j)
    for (int c = 0; c < g.dim; ++c) out[c] += dl[j] * g.grad_lambda[j][c];
  return out;
}

/// Continuous Lagrange space of degree 1 or 2 on a simplicial space-time
/// mesh. Dofs are vertices (ids as in the mesh) followed by edge midpoints.
/// Dofs on lateral and bottom facets are constrained to zero.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const SimplicialMesh> mesh, int degree);

  const SimplicialMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const SimplicialMesh>& mesh_ptr() const { return mesh_; }
  int dim() const { return mesh_->dim(); }
  int space_dim() const { return mesh_->dim() - 1; }
  int degree() const { return degree_; }
  int num_dofs() const { return static_cast<int>(coords_.size()); }
  int num_free_dofs() const { return num_dofs() - static_cast<int>(constrained_.size()); }
  int dofs_per_element() const { return nb_; }

  std::span<const int> element_dofs(int e) const {
    return {&connectivity_[static_cast<std::size_t>(e) * nb_], static_cast<std::size_t>(nb_)};
  }
  const std::vector<Point>& dof_coords() const { return coords_; }
  const std::vector<int>& constrained_dofs() const { return constrained_; }
  bool is_constrained(int dof) const { return mask_[dof] != 0; }

 private:
  std::shared_ptr<const SimplicialMesh> mesh_;
  int degree_ = 1;
  int nb_ = 0;
  std::vector<int> connectivity_;
  std::vector<Point> coords_;
  std::vector<int> constrained_;
  std::vector<char> mask_;
};

class FeFunction {
 public:
  FeFunction() = default;
  explicit FeFunction(std::shared_ptr<const FeSpace> space);
  FeFunction(std::shared_ptr<const FeSpace> space, std::vector<double> coefficients);

  const FeSpace& space() const { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
  std::vector<double>& coefficients() { return coeffs_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  void zero_constrained();

 private:
  std::shared_ptr<const FeSpace> space_;
  std::vector<double> coeffs_;
};

struct PointEval {
  double value = 0.0;
  std::array<double, 2> grad_x{0.0, 0.0};
  double dt = 0.0;
};

// Evaluates at a reference point xi of element e.
PointEval eval(const FeFunction& f, int e, const std::array<double, 3>& xi);

FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& g);

// Carries a function to `target`, whose mesh is either the same mesh or a
// refinement of it (via Element::origin). Exact when the source space is
// contained in the target space.
FeFunction transfer(const FeFunction& f, std::shared_ptr<const FeSpace> target);

struct ErrorNorms {
  double l2_Q = 0.0;   // ||u_h - u||_{L2(Q)}
  double l2_h1 = 0.0;  // ||grad_x (u_h - u)||_{L2(Q)}
};

ErrorNorms error_norms(const FeFunction& f, const ScalarField& exact, const VectorField& exact_grad_x);

// Integral of a scalar field over the mesh with a rule of the given order.
double integrate(const SimplicialMesh& mesh, const ScalarField& g, int order);

}  // namespace goast
