#include "goast/fespace.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include <fmt/core.h>

namespace goast {

double ElementGeometry::volume() const { return dim == 2 ? det / 2.0 : det / 6.0; }

Point ElementGeometry::map(const std::array<double, 3>& xi) const {
  Point x = x0;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) x[r] += B[r][c] * xi[c];
  return x;
}

std::array<double, 4> ElementGeometry::barycentric(const Point& x) const {
  std::array<double, 4> lambda{0.0, 0.0, 0.0, 0.0};
  double s = 0.0;
  for (int j = 1; j <= dim; ++j) {
    double v = 0.0;
    for (int c = 0; c < dim; ++c) v += grad_lambda[j][c] * (x[c] - x0[c]);
    lambda[j] = v;
    s += v;
  }
  lambda[0] = 1.0 - s;
  return lambda;
}

ElementGeometry element_geometry(const SimplicialMesh& mesh, int e) {
  ElementGeometry g;
  g.dim = mesh.dim();
  const int D = g.dim;
  const auto v = mesh.element_vertices(e);
  const auto& X = mesh.vertices();
  g.x0 = X[v[0]];
  for (int c = 0; c < D; ++c)
    for (int r = 0; r < D; ++r) g.B[r][c] = X[v[c + 1]][r] - g.x0[r];

  std::array<std::array<double, 3>, 3> inv{};
  const auto& B = g.B;
  double det = 0.0;
  if (D == 2) {
    det = B[0][0] * B[1][1] - B[0][1] * B[1][0];
    inv[0][0] = B[1][1] / det;
    inv[0][1] = -B[0][1] / det;
    inv[1][0] = -B[1][0] / det;
    inv[1][1] = B[0][0] / det;
  } else {
    const double c00 = B[1][1] * B[2][2] - B[1][2] * B[2][1];
    const double c01 = B[1][2] * B[2][0] - B[1][0] * B[2][2];
    const double c02 = B[1][0] * B[2][1] - B[1][1] * B[2][0];
    det = B[0][0] * c00 + B[0][1] * c01 + B[0][2] * c02;
    inv[0][0] = c00 / det;
    inv[1][0] = c01 / det;
    inv[2][0] = c02 / det;
    inv[0][1] = (B[0][2] * B[2][1] - B[0][1] * B[2][2]) / det;
    inv[1][1] = (B[0][0] * B[2][2] - B[0][2] * B[2][0]) / det;
    inv[2][1] = (B[0][1] * B[2][0] - B[0][0] * B[2][1]) / det;
    inv[0][2] = (B[0][1] * B[1][2] - B[0][2] * B[1][1]) / det;
    inv[1][2] = (B[0][2] * B[1][0] - B[0][0] * B[1][2]) / det;
    inv[2][2] = (B[0][0] * B[1][1] - B[0][1] * B[1][0]) / det;
  }
  if (det == 0.0) throw std::runtime_error(fmt::format("element_geometry: degenerate element {}", e));
  g.det = std::abs(det);
  // lambda_{j+1} = row j of B^{-1} applied to (x - x0)
  for (int j = 0; j < D; ++j)
    for (int c = 0; c < D; ++c) g.grad_lambda[j + 1][c] = inv[j][c];
  for (int c = 0; c < D; ++c) {
    double s = 0.0;
    for (int j = 1; j <= D; ++j) s += g.grad_lambda[j][c];
    g.grad_lambda[0][c] = -s;
  }
  return g;
}

int num_local_dofs(int dim, int degree) {
  return degree == 1 ? dim + 1 : (dim + 1) * (dim + 2) / 2;
}

std::array<int, 2> local_edge(int dim, int edge) {
  int n = 0;
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b <= dim; ++b, ++n)
      if (n == edge) return {a, b};
  throw std::out_of_range("local_edge: index out of range");
}

void shape_values(int dim, int degree, const std::array<double, 4>& l, std::span<double> values) {
  if (degree == 1) {
    for (int i = 0; i <= dim; ++i) values[i] = l[i];
    return;
  }
  for (int i = 0; i <= dim; ++i) values[i] = l[i] * (2.0 * l[i] - 1.0);
  int n = dim + 1;
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b <= dim; ++b) values[n++] = 4.0 * l[a] * l[b];
}

void shape_dlambda(int dim, int degree, const std::array<double, 4>& l, std::span<double> dl) {
  const int nc = dim + 1;
  const int nb = num_local_dofs(dim, degree);
  std::fill(dl.begin(), dl.begin() + nb * nc, 0.0);
  if (degree == 1) {
    for (int i = 0; i <= dim; ++i) dl[i * nc + i] = 1.0;
    return;
  }
  for (int i = 0; i <= dim; ++i) dl[i * nc + i] = 4.0 * l[i] - 1.0;
  int n = dim + 1;
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b <= dim; ++b, ++n) {
      dl[n * nc + a] = 4.0 * l[b];
      dl[n * nc + b] = 4.0 * l[a];
    }
}

const ShapeTable& shape_table(int dim, int degree, int order) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, ShapeTable> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(dim, degree, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  ShapeTable t;
  t.dim = dim;
  t.degree = degree;
  t.nb = num_local_dofs(dim, degree);
  t.rule = &quadrature(dim, order);
  const int nq = t.rule->size();
  t.values.resize(static_cast<std::size_t>(nq * t.nb));
  t.dlambda.resize(static_cast<std::size_t>(nq * t.nb * (dim + 1)));
  for (int q = 0; q < nq; ++q) {
    const auto& xi = t.rule->points[q];
    std::array<double, 4> l{1.0, 0.0, 0.0, 0.0};
    for (int j = 0; j < dim; ++j) {
      l[j + 1] = xi[j];
      l[0] -= xi[j];
    }
    shape_values(dim, degree, l, std::span<double>(&t.values[q * t.nb], t.nb));
    shape_dlambda(dim, degree, l, std::span<double>(&t.dlambda[q * t.nb * (dim + 1)], t.nb * (dim + 1)));
  }
  return cache.emplace(key, std::move(t)).first->second;
}

FeSpace::FeSpace(std::shared_ptr<const SimplicialMesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) throw std::invalid_argument("FeSpace: null mesh");
  if (degree != 1 && degree != 2) throw std::invalid_argument(fmt::format("FeSpace: unsupported degree {}", degree));
  const int D = mesh_->dim();
  nb_ = num_local_dofs(D, degree);
  const int ne = mesh_->num_elements();
  const int nv = mesh_->num_vertices();
  connectivity_.resize(static_cast<std::size_t>(ne) * nb_);
  coords_ = mesh_->vertices();

  std::unordered_map<std::uint64_t, int, EdgeKeyHash> edges;
  for (int e = 0; e < ne; ++e) {
    const auto v = mesh_->element_vertices(e);
    int* dofs = &connectivity_[static_cast<std::size_t>(e) * nb_];
    for (int i = 0; i <= D; ++i) dofs[i] = v[i];
    if (degree == 1) continue;
    int n = D + 1;
    for (int a = 0; a < D; ++a)
      for (int b = a + 1; b <= D; ++b, ++n) {
        auto [it, inserted] = edges.try_emplace(edge_key(v[a], v[b]), nv + static_cast<int>(edges.size()));
        if (inserted) {
          const auto& xa = coords_[v[a]];
          const auto& xb = coords_[v[b]];
          coords_.push_back({0.5 * (xa[0] + xb[0]), 0.5 * (xa[1] + xb[1]), 0.5 * (xa[2] + xb[2])});
        }
        dofs[n] = it->second;
      }
  }

  mask_.assign(coords_.size(), 0);
  for (const auto& f : mesh_->boundary()) {
    if (f.tag != BoundaryTag::Lateral && f.tag != BoundaryTag::Bottom) continue;
    const auto dofs = element_dofs(f.element);
    for (int i = 0; i <= D; ++i)
      if (i != f.opposite) mask_[dofs[i]] = 1;
    if (degree == 2) {
      for (int n = 0; n < D * (D + 1) / 2; ++n) {
        const auto [a, b] = local_edge(D, n);
        if (a != f.opposite && b != f.opposite) mask_[dofs[D + 1 + n]] = 1;
      }
    }
  }
  for (int i = 0; i < num_dofs(); ++i)
    if (mask_[i]) constrained_.push_back(i);
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), coeffs_(static_cast<std::size_t>(space_->num_dofs()), 0.0) {}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space, std::vector<double> coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients)) {
  if (static_cast<int>(coeffs_.size()) != space_->num_dofs())
    throw std::invalid_argument("FeFunction: coefficient length does not match the space");
}

void FeFunction::zero_constrained() {
  for (int i : space_->constrained_dofs()) coeffs_[i] = 0.0;
}

PointEval eval(const FeFunction& f, int e, const std::array<double, 3>& xi) {
  const FeSpace& V = f.space();
  if (e < 0 || e >= V.mesh().num_elements()) throw std::out_of_range("eval: element index out of range");
  const int D = V.dim();
  const auto g = element_geometry(V.mesh(), e);
  std::array<double, 4> l{1.0, 0.0, 0.0, 0.0};
  for (int j = 0; j < D; ++j) {
    l[j + 1] = xi[j];
    l[0] -= xi[j];
  }
  const int nb = V.dofs_per_element();
  std::array<double, 10> val{};
  std::array<double, 40> dl{};
  shape_values(D, V.degree(), l, val);
  shape_dlambda(D, V.degree(), l, dl);
  const auto dofs = V.element_dofs(e);
  PointEval out;
  Gradient grad{0.0, 0.0, 0.0};
  for (int b = 0; b < nb; ++b) {
    const double c = f.coefficients()[dofs[b]];
    out.value += c * val[b];
    const auto gb = physical_gradient(g, &dl[b * (D + 1)]);
    for (int k = 0; k < D; ++k) grad[k] += c * gb[k];
  }
  for (int k = 0; k < D - 1; ++k) out.grad_x[k] = grad[k];
  out.dt = grad[D - 1];
  return out;
}

FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& g) {
  FeFunction f(space);
  const auto& X = space->dof_coords();
  for (int i = 0; i < space->num_dofs(); ++i) f.coefficients()[i] = g(X[i]);
  return f;
}

FeFunction transfer(const FeFunction& f, std::shared_ptr<const FeSpace> target) {
  const FeSpace& src = f.space();
  const SimplicialMesh& smesh = src.mesh();
  const SimplicialMesh& tmesh = target->mesh();
  const bool same = &smesh == &tmesh || smesh.revision() == tmesh.revision();
  if (!same && tmesh.previous_revision() != smesh.revision())
    throw std::invalid_argument("transfer: target mesh is not a refinement of the source mesh");
  if (smesh.dim() != tmesh.dim()) throw std::invalid_argument("transfer: dimension mismatch");

  const int D = tmesh.dim();
  const int kS = src.degree();
  const int nbS = src.dofs_per_element();
  FeFunction out(target);
  std::vector<char> done(static_cast<std::size_t>(target->num_dofs()), 0);
  std::array<double, 10> val{};
  for (int e = 0; e < tmesh.num_elements(); ++e) {
    const int o = same ? e : tmesh.element(e).origin;
    const auto tdofs = target->element_dofs(e);
    const auto sdofs = src.element_dofs(o);
    bool geometry_ready = false;
    ElementGeometry g;
    for (int dof : tdofs) {
      if (done[dof]) continue;
      if (!geometry_ready) {
        g = element_geometry(smesh, o);
        geometry_ready = true;
      }
      const auto l = g.barycentric(target->dof_coords()[dof]);
      shape_values(D, kS, l, val);
      double s = 0.0;
      for (int b = 0; b < nbS; ++b) s += f.coefficients()[sdofs[b]] * val[b];
      out.coefficients()[dof] = s;
      done[dof] = 1;
    }
  }
  return out;
}

ErrorNorms error_norms(const FeFunction& f, const ScalarField& exact, const VectorField& exact_grad_x) {
  const FeSpace& V = f.space();
  const int D = V.dim();
  const int d = D - 1;
  const auto& table = shape_table(D, V.degree(), 2 * V.degree() + 4);
  const auto& rule = *table.rule;
  double e0 = 0.0;
  double e1 = 0.0;
  for (int e = 0; e < V.mesh().num_elements(); ++e) {
    const auto g = element_geometry(V.mesh(), e);
    const auto dofs = V.element_dofs(e);
    for (int q = 0; q < rule.size(); ++q) {
      double u = 0.0;
      Gradient grad{0.0, 0.0, 0.0};
      for (int b = 0; b < table.nb; ++b) {
        const double c = f.coefficients()[dofs[b]];
        u += c * table.value(q, b);
        const auto gb = physical_gradient(g, table.dl(q, b));
        for (int k = 0; k < d; ++k) grad[k] += c * gb[k];
      }
      const Point x = g.map(rule.points[q]);
      const double w = rule.weights[q] * g.det;
      const double du = u - exact(x);
      const auto ge = exact_grad_x(x);
      double dg = 0.0;
      for (int k = 0; k < d; ++k) dg += (grad[k] - ge[k]) * (grad[k] - ge[k]);
      e0 += w * du * du;
      e1 += w * dg;
    }
  }
  return {std::sqrt(e0), std::sqrt(e1)};
}

double integrate(const SimplicialMesh& mesh, const ScalarField& g, int order) {
  const auto& rule = quadrature(mesh.dim(), order);
  double s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto geo = element_geometry(mesh, e);
    for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * geo.det * g(geo.map(rule.points[q]));
  }
  return s;
}

}  // namespace goast
