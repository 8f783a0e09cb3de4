#include "goast/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

namespace goast {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr int kMaxClosureRounds = 10000;

std::atomic<std::uint64_t> g_revision{0};

std::uint64_t next_revision() { return ++g_revision; }

double det2(double a, double b, double c, double d) { return a * d - b * c; }

double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2]) -
         m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2]) +
         m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1]);
}

double signed_measure(const SimplicialMesh& mesh, int e) {
  const auto v = mesh.element_vertices(e);
  const auto& X = mesh.vertices();
  const auto& x0 = X[v[0]];
  if (mesh.dim() == 2) {
    const auto& x1 = X[v[1]];
    const auto& x2 = X[v[2]];
    return det2(x1[0] - x0[0], x2[0] - x0[0], x1[1] - x0[1], x2[1] - x0[1]) / 2.0;
  }
  std::array<std::array<double, 3>, 3> m{};
  for (int j = 0; j < 3; ++j) {
    const auto& xj = X[v[j + 1]];
    for (int i = 0; i < 3; ++i) m[i][j] = xj[i] - x0[i];
  }
  return det3(m) / 6.0;
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double triangle_area(const Point& a, const Point& b, const Point& c) {
  const std::array<double, 3> u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const std::array<double, 3> w{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const double cx = u[1] * w[2] - u[2] * w[1];
  const double cy = u[2] * w[0] - u[0] * w[2];
  const double cz = u[0] * w[1] - u[1] * w[0];
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

BoundaryTag classify_facet(const SimplicialMesh& mesh, const FacetKey& key) {
  const int D = mesh.dim();
  const int t = D - 1;
  const auto& X = mesh.vertices();
  auto all = [&](auto pred) {
    for (int i = 0; i < D; ++i) {
      if (!pred(X[key[i]])) return false;
    }
    return true;
  };
  if (all([&](const Point& x) { return std::abs(x[t]) <= kBoundaryTol; }))
    return BoundaryTag::Bottom;
  if (all([&](const Point& x) { return std::abs(x[t] - 1.0) <= kBoundaryTol; }))
    return BoundaryTag::Top;
  for (int a = 0; a < t; ++a) {
    const auto ia = a;
    if (all([&](const Point& x) { return std::abs(x[ia]) <= kBoundaryTol; }) ||
        all([&](const Point& x) { return std::abs(x[ia] - 1.0) <= kBoundaryTol; }))
      return BoundaryTag::Lateral;
  }
  throw std::invalid_argument("classify_boundary: boundary facet does not lie on the box boundary");
}

// Maubach bisection of the tuple (x0..xD) with tag k along edge (x0, xk).
std::array<Element, 2> bisect(const Element& el, int D, int mid) {
  const int k = el.tag;
  Element a = el;
  Element b = el;
  // a = (x0, .., x_{k-1}, z, x_{k+1}, .., x_D)
  a.vertices[k] = mid;
  // b = (x1, .., x_k, z, x_{k+1}, .., x_D)
  for (int i = 0; i < k; ++i) b.vertices[i] = el.vertices[i + 1];
  b.vertices[k] = mid;
  const int child_tag = k > 1 ? k - 1 : D;
  for (Element* c : {&a, &b}) {
    c->tag = child_tag;
    c->generation = el.generation + 1;
    c->parent = el.id;
  }
  return {a, b};
}

}  // namespace

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Interior: return "interior";
    case BoundaryTag::Lateral: return "lateral";
    case BoundaryTag::Bottom: return "bottom";
    case BoundaryTag::Top: return "top";
  }
  return "?";
}

SimplicialMesh::SimplicialMesh(int dim, std::vector<Point> vertices, std::vector<Element> elements)
    : dim_(dim), vertices_(std::move(vertices)), elements_(std::move(elements)) {
  if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("SimplicialMesh: dimension must be 2 or 3");
  history_.reserve(elements_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    auto& el = elements_[e];
    for (int i = 0; i <= dim_; ++i) {
      const int v = el.vertices[i];
      if (v < 0 || v >= num_vertices()) throw std::invalid_argument("SimplicialMesh: vertex id out of range");
    }
    if (el.tag < 1 || el.tag > dim_) el.tag = dim_;
    el.id = static_cast<int>(history_.size());
    el.parent = -1;
    el.origin = -1;
    history_.push_back({el.vertices, el.generation, -1});
  }
  revision_ = next_revision();
  finalize_boundary();
}

std::span<const int> SimplicialMesh::element_vertices(int e) const {
  return std::span<const int>(element(e).vertices.data(), (dim_ + 1));
}

double SimplicialMesh::volume(int e) const { return std::abs(signed_measure(*this, e)); }

double SimplicialMesh::total_volume() const {
  double s = 0.0;
  for (int e = 0; e < num_elements(); ++e) s += volume(e);
  return s;
}

Point SimplicialMesh::barycenter(int e) const {
  Point c{0.0, 0.0, 0.0};
  for (int v : element_vertices(e)) {
    for (int i = 0; i < 3; ++i) c[i] += vertices_[v][i];
  }
  for (auto& x : c) x /= dim_ + 1;
  return c;
}

double SimplicialMesh::quality(int e) const {
  const auto v = element_vertices(e);
  std::array<Point, 4> x{};
  for (int i = 0; i <= dim_; ++i) x[i] = vertices_[v[i]];
  const double vol = volume(e);
  if (dim_ == 2) {
    const double a = distance(x[1], x[2]);
    const double b = distance(x[0], x[2]);
    const double c = distance(x[0], x[1]);
    const double r = 2.0 * vol / (a + b + c);
    const double R = a * b * c / (4.0 * vol);
    return 2.0 * r / R;
  }
  double faces = 0.0;
  for (int j = 0; j < 4; ++j) {
    std::array<Point, 3> f{};
    int n = 0;
    for (int i = 0; i < 4; ++i)
      if (i != j) f[n++] = x[i];
    faces += triangle_area(f[0], f[1], f[2]);
  }
  const double r = 3.0 * vol / faces;
  // circumcenter c: 2 (x_i - x_0) . c = |x_i|^2 - |x_0|^2
  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> rhs{};
  auto sq = [](const Point& p) { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2]; };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = 2.0 * (x[i + 1][j] - x[0][j]);
    rhs[i] = sq(x[i + 1]) - sq(x[0]);
  }
  const double det = det3(m);
  Point c{};
  for (int k = 0; k < 3; ++k) {
    auto mk = m;
    for (int i = 0; i < 3; ++i) mk[i][k] = rhs[i];
    c[k] = det3(mk) / det;
  }
  const double R = distance(c, x[0]);
  return 3.0 * r / R;
}

int SimplicialMesh::midpoint(int a, int b) const {
  const auto it = midpoints_.find(edge_key(a, b));
  return it == midpoints_.end() ? -1 : it->second;
}

void SimplicialMesh::finalize_boundary() {
  facet_tags_ = classify_boundary(*this);
  boundary_.clear();
  for (int e = 0; e < num_elements(); ++e) {
    for (int j = 0; j <= dim_; ++j) {
      const auto tag = facet_tags_.at(facet_key(*this, e, j));
      if (tag != BoundaryTag::Interior) boundary_.push_back({e, j, tag});
    }
  }
}

FacetKey facet_key(const SimplicialMesh& mesh, int e, int opposite) {
  FacetKey key{-1, -1, -1};
  const auto v = mesh.element_vertices(e);
  int n = 0;
  for (int i = 0; i <= mesh.dim(); ++i)
    if (i != opposite) key[n++] = v[i];
  std::sort(key.begin(), key.begin() + n);
  return key;
}

FacetTagMap classify_boundary(const SimplicialMesh& mesh) {
  if (mesh.empty()) return {};
  std::map<FacetKey, int> count;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int j = 0; j <= mesh.dim(); ++j) ++count[facet_key(mesh, e, j)];
  FacetTagMap tags;
  for (const auto& [key, n] : count) {
    if (n > 2) throw std::invalid_argument("classify_boundary: facet shared by more than two elements");
    tags.emplace_hint(tags.end(), key, n == 2 ? BoundaryTag::Interior : classify_facet(mesh, key));
  }
  return tags;
}

SimplicialMesh build_tensor_mesh(int d, std::span<const double> space_breaks,
                                 std::span<const double> time_breaks) {
  if (d != 1 && d != 2) throw std::invalid_argument(fmt::format("build_tensor_mesh: unsupported spatial dimension {}", d));
  if (space_breaks.size() < 2 || time_breaks.size() < 2)
    throw std::invalid_argument("build_tensor_mesh: need at least two breakpoints per axis");
  const int D = d + 1;
  std::array<std::span<const double>, 3> breaks{};
  for (int a = 0; a < d; ++a) breaks[a] = space_breaks;
  breaks[d] = time_breaks;
  for (int a = 0; a < D; ++a) {
    const auto& b = breaks[a];
    if (!std::is_sorted(b.begin(), b.end()) || std::adjacent_find(b.begin(), b.end()) != b.end())
      throw std::invalid_argument("build_tensor_mesh: breakpoints must be strictly increasing");
  }

  std::array<int, 3> npts{1, 1, 1};
  for (int a = 0; a < D; ++a) npts[a] = static_cast<int>(breaks[a].size());
  auto vid = [&](const std::array<int, 3>& ijk) {
    return ijk[0] + npts[0] * (ijk[1] + npts[1] * ijk[2]);
  };

  std::vector<Point> vertices((npts[0] * npts[1] * npts[2]));
  for (int k = 0; k < npts[2]; ++k)
    for (int j = 0; j < npts[1]; ++j)
      for (int i = 0; i < npts[0]; ++i) {
        const std::array<int, 3> ijk{i, j, k};
        Point x{0.0, 0.0, 0.0};
        for (int a = 0; a < D; ++a) x[a] = breaks[a][ijk[a]];
        vertices[vid(ijk)] = x;
      }

  std::vector<int> perm(D);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Element> elements;
  std::array<int, 3> ncell{1, 1, 1};
  for (int a = 0; a < D; ++a) ncell[a] = npts[a] - 1;
  for (int k = 0; k < ncell[2]; ++k)
    for (int j = 0; j < ncell[1]; ++j)
      for (int i = 0; i < ncell[0]; ++i) {
        const std::array<int, 3> cell{i, j, k};
        std::array<bool, 3> mirror{false, false, false};
        for (int a = 0; a < D; ++a) {
          const auto& b = breaks[a];
          const auto c = cell[a];
          const double mid = 0.5 * (b[c] + b[c + 1]);
          mirror[a] = (a == D - 1) ? mid > 0.5 : mid < 0.5;
        }
        for (const auto& p : perms) {
          Element el;
          std::array<int, 3> offset{0, 0, 0};
          for (int s = 0; s <= D; ++s) {
            if (s > 0) offset[p[s - 1]] = 1;
            std::array<int, 3> ijk{0, 0, 0};
            for (int a = 0; a < D; ++a) {
              const auto ia = a;
              ijk[ia] = cell[ia] + (mirror[ia] ? 1 - offset[ia] : offset[ia]);
            }
            el.vertices[s] = vid(ijk);
          }
          el.tag = D;
          elements.push_back(el);
        }
      }
  return SimplicialMesh(D, std::move(vertices), std::move(elements));
}

SimplicialMesh build_box_mesh(int d, int n) {
  if (d != 1 && d != 2) throw std::invalid_argument(fmt::format("build_box_mesh: unsupported spatial dimension {}", d));
  if (n < 1) throw std::invalid_argument("build_box_mesh: n must be positive");
  std::vector<double> b((n + 1));
  for (int i = 0; i <= n; ++i) b[i] = static_cast<double>(i) / n;
  return build_tensor_mesh(d, b, b);
}

SimplicialMesh refine(const SimplicialMesh& mesh, std::span<const int> marked) {
  if (mesh.empty()) throw std::invalid_argument("refine: empty mesh");
  const int D = mesh.dim();
  SimplicialMesh out = mesh;
  out.previous_revision_ = mesh.revision_;
  out.revision_ = next_revision();
  if (marked.empty()) {
    // unchanged geometry; only the origin map needs to point at `mesh`
    for (std::size_t e = 0; e < out.elements_.size(); ++e) out.elements_[e].origin = static_cast<int>(e);
    return out;
  }

  std::vector<Element> current = mesh.elements_;
  for (std::size_t e = 0; e < current.size(); ++e) current[e].origin = static_cast<int>(e);
  std::vector<char> flag(current.size(), 0);
  for (int m : marked) {
    if (m < 0 || m >= mesh.num_elements()) throw std::out_of_range("refine: marked element index out of range");
    flag[m] = 1;
  }

  const int nedge = D * (D + 1) / 2;
  std::vector<Element> next;
  for (int round = 0;; ++round) {
    if (round > kMaxClosureRounds) throw std::runtime_error("refine: conformity closure did not terminate");
    next.clear();
    next.reserve(current.size() * 2);
    bool any = false;
    for (std::size_t e = 0; e < current.size(); ++e) {
      const Element& el = current[e];
      if (!flag[e]) {
        next.push_back(el);
        continue;
      }
      any = true;
      const int a = el.vertices[0];
      const int b = el.vertices[el.tag];
      auto [it, inserted] = out.midpoints_.try_emplace(edge_key(a, b), out.num_vertices());
      if (inserted) {
        const auto& xa = out.vertices_[a];
        const auto& xb = out.vertices_[b];
        out.vertices_.push_back({0.5 * (xa[0] + xb[0]), 0.5 * (xa[1] + xb[1]), 0.5 * (xa[2] + xb[2])});
      }
      for (Element child : bisect(el, D, it->second)) {
        child.id = static_cast<int>(out.history_.size());
        out.history_.push_back({child.vertices, child.generation, child.parent});
        next.push_back(child);
      }
    }
    if (!any) break;
    current.swap(next);
    flag.assign(current.size(), 0);
    for (std::size_t e = 0; e < current.size(); ++e) {
      const auto& v = current[e].vertices;
      for (int i = 0, n = 0; i < D && n < nedge; ++i)
        for (int j = i + 1; j <= D; ++j, ++n)
          if (out.midpoints_.count(edge_key(v[i], v[j]))) flag[e] = 1;
    }
  }
  out.elements_ = std::move(current);
  out.finalize_boundary();
  return out;
}

SimplicialMesh refine_all(const SimplicialMesh& mesh) {
  std::vector<int> all((mesh.num_elements()));
  std::iota(all.begin(), all.end(), 0);
  return refine(mesh, all);
}

std::string check_conformity(const SimplicialMesh& mesh) {
  std::map<FacetKey, int> count;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.element_vertices(e);
    for (int j = 0; j <= mesh.dim(); ++j) ++count[facet_key(mesh, e, j)];
    for (int i = 0; i < mesh.dim(); ++i)
      for (int j = i + 1; j <= mesh.dim(); ++j)
        if (mesh.midpoint(v[i], v[j]) >= 0)
          return fmt::format("element {} has a hanging node on edge ({}, {})", e, v[i], v[j]);
  }
  for (const auto& [key, n] : count)
    if (n > 2) return fmt::format("facet ({}, {}, {}) shared by {} elements", key[0], key[1], key[2], n);
  return {};
}

}  // namespace goast
