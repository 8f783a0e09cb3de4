#include "goast/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <fmt/core.h>

namespace goast {

void ProblemDefinition::validate() const {
  if (!(p > 1.0)) throw std::invalid_argument(fmt::format("problem: p must exceed 1, got {}", p));
  if (!(eps > 0.0)) throw std::invalid_argument(fmt::format("problem: eps must be positive, got {}", eps));
  if (d != 1 && d != 2) throw std::invalid_argument(fmt::format("problem: unsupported spatial dimension {}", d));
  if (!source) throw std::invalid_argument("problem: missing source term");
}

Vec2 flux(const Vec2& g, double p, double eps) {
  const double s = g[0] * g[0] + g[1] * g[1] + eps * eps;
  const double a = std::pow(s, 0.5 * (p - 2.0));
  return {a * g[0], a * g[1]};
}

Mat2 flux_jacobian(const Vec2& g, double p, double eps) {
  const double s = g[0] * g[0] + g[1] * g[1] + eps * eps;
  const double a = std::pow(s, 0.5 * (p - 2.0));
  const double b = (p - 2.0) * std::pow(s, 0.5 * (p - 4.0));
  return {{{a + b * g[0] * g[0], b * g[0] * g[1]}, {b * g[1] * g[0], a + b * g[1] * g[1]}}};
}

int quadrature_order(const FeSpace& space, const AssemblyOptions& opts) {
  return opts.quad_order >= 0 ? opts.quad_order : 2 * space.degree() + 2;
}

void zero_constrained(const FeSpace& space, std::span<double> v) {
  for (int i : space.constrained_dofs()) v[i] = 0.0;
}

void parallel_chunks(int n, int threads, const std::function<void(int, int, int)>& fn) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, begin, end, t] { fn(begin, end, t); });
  }
  for (auto& th : pool) th.join();
}

namespace {

void check(const FeSpace& space, const FeFunction& u, const ProblemDefinition& prob) {
  if (space.space_dim() != prob.d)
    throw std::invalid_argument(fmt::format("assembly: space dimension {} does not match problem dimension {}",
                                            space.space_dim(), prob.d));
  if (&u.space() != &space && u.size() != space.num_dofs())
    throw std::invalid_argument("assembly: function does not belong to the space");
}

struct QuadState {
  double u = 0.0;
  double ut = 0.0;
  Vec2 gx{0.0, 0.0};
};

// Basis gradients of element e at point q, [b][c].
void basis_gradients(const ShapeTable& t, const ElementGeometry& g, int q, std::span<Gradient> out) {
  for (int b = 0; b < t.nb; ++b) out[b] = physical_gradient(g, t.dl(q, b));
}

QuadState evaluate(const ShapeTable& t, int q, std::span<const Gradient> grads, std::span<const double> coeff,
                   std::span<const int> dofs, int D) {
  QuadState s;
  for (int b = 0; b < t.nb; ++b) {
    const double c = coeff[dofs[b]];
    s.u += c * t.value(q, b);
    for (int k = 0; k < D - 1; ++k) s.gx[k] += c * grads[b][k];
    s.ut += c * grads[b][D - 1];
  }
  return s;
}

}  // namespace

void local_residual(const FeSpace& space, const FeFunction& u, const ProblemDefinition& prob, int e, int order,
                    std::span<double> out) {
  const int D = space.dim();
  const auto& t = shape_table(D, space.degree(), order);
  const auto& rule = *t.rule;
  const auto g = element_geometry(space.mesh(), e);
  const auto dofs = space.element_dofs(e);
  std::array<Gradient, 10> grads{};
  std::fill(out.begin(), out.begin() + t.nb, 0.0);
  for (int q = 0; q < rule.size(); ++q) {
    basis_gradients(t, g, q, grads);
    const auto s = evaluate(t, q, grads, u.coefficients(), dofs, D);
    const Vec2 F = flux(s.gx, prob.p, prob.eps);
    const double f = prob.source(g.map(rule.points[q]));
    const double w = rule.weights[q] * g.det;
    for (int b = 0; b < t.nb; ++b) {
      double r = (s.ut - f) * t.value(q, b);
      for (int k = 0; k < D - 1; ++k) r += F[k] * grads[b][k];
      out[b] += w * r;
    }
  }
}

void local_jacobian(const FeSpace& space, const FeFunction& u, const ProblemDefinition& prob, int e, int order,
                    std::span<double> out) {
  const int D = space.dim();
  const auto& t = shape_table(D, space.degree(), order);
  const auto& rule = *t.rule;
  const auto g = element_geometry(space.mesh(), e);
  const auto dofs = space.element_dofs(e);
  const int nb = t.nb;
  std::array<Gradient, 10> grads{};
  std::array<Vec2, 10> mg{};
  std::fill(out.begin(), out.begin() + nb * nb, 0.0);
  for (int q = 0; q < rule.size(); ++q) {
    basis_gradients(t, g, q, grads);
    const auto s = evaluate(t, q, grads, u.coefficients(), dofs, D);
    const Mat2 M = flux_jacobian(s.gx, prob.p, prob.eps);
    const double w = rule.weights[q] * g.det;
    for (int c = 0; c < nb; ++c) {
      mg[c] = {0.0, 0.0};
      for (int i = 0; i < D - 1; ++i)
        for (int j = 0; j < D - 1; ++j) mg[c][i] += M[i][j] * grads[c][j];
    }
    for (int b = 0; b < nb; ++b) {
      const double phib = t.value(q, b);
      for (int c = 0; c < nb; ++c) {
        double v = phib * grads[c][D - 1];
        for (int k = 0; k < D - 1; ++k) v += mg[c][k] * grads[b][k];
        out[b * nb + c] += w * v;
      }
    }
  }
}

std::vector<double> assemble_residual(const FeSpace& space, const FeFunction& u, const ProblemDefinition& prob,
                                      const AssemblyOptions& opts) {
  check(space, u, prob);
  const int order = quadrature_order(space, opts);
  const int n = space.num_dofs();
  const int ne = space.mesh().num_elements();
  const int threads = std::clamp(opts.threads, 1, std::max(1, ne));
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(threads), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  parallel_chunks(ne, threads, [&](int begin, int end, int worker) {
    auto& r = partial[worker];
    std::array<double, 10> loc{};
    for (int e = begin; e < end; ++e) {
      local_residual(space, u, prob, e, order, loc);
      const auto dofs = space.element_dofs(e);
      for (int b = 0; b < space.dofs_per_element(); ++b) r[dofs[b]] += loc[b];
    }
  });
  std::vector<double> r = std::move(partial[0]);
  for (int t = 1; t < threads; ++t)
    for (int i = 0; i < n; ++i) r[i] += partial[t][i];
  zero_constrained(space, r);
  return r;
}

namespace {

template <class Kernel>
SparseOperator assemble_matrix(const FeSpace& space, int threads, Kernel&& kernel) {
  SparseOperator K = make_pattern(space);
  const int ne = space.mesh().num_elements();
  const int nb = space.dofs_per_element();
  threads = std::clamp(threads, 1, std::max(1, ne));
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(threads - 1), std::vector<double>(K.values().size(), 0.0));
  parallel_chunks(ne, threads, [&](int begin, int end, int worker) {
    auto& vals = worker == 0 ? K.values() : partial[worker - 1];
    std::array<double, 100> loc{};
    for (int e = begin; e < end; ++e) {
      kernel(e, std::span<double>(loc));
      const auto dofs = space.element_dofs(e);
      for (int b = 0; b < nb; ++b)
        for (int c = 0; c < nb; ++c) vals[K.find(dofs[b], dofs[c])] += loc[b * nb + c];
    }
  });
  for (const auto& p : partial)
    for (std::size_t k = 0; k < p.size(); ++k) K.values()[k] += p[k];
  K.constrain(space.constrained_dofs());
  return K;
}

}  // namespace

SparseOperator assemble_jacobian(const FeSpace& space, const FeFunction& u, const ProblemDefinition& prob,
                                 const AssemblyOptions& opts) {
  check(space, u, prob);
  const int order = quadrature_order(space, opts);
  return assemble_matrix(space, opts.threads,
                         [&](int e, std::span<double> out) { local_jacobian(space, u, prob, e, order, out); });
}

void local_time_matrix(const FeSpace& space, int e, int order, std::span<double> out) {
  const int D = space.dim();
  const auto& t = shape_table(D, space.degree(), order);
  const auto g = element_geometry(space.mesh(), e);
  std::array<Gradient, 10> grads{};
  std::fill(out.begin(), out.begin() + t.nb * t.nb, 0.0);
  for (int q = 0; q < t.rule->size(); ++q) {
    basis_gradients(t, g, q, grads);
    const double w = t.rule->weights[q] * g.det;
    for (int b = 0; b < t.nb; ++b)
      for (int c = 0; c < t.nb; ++c) out[b * t.nb + c] += w * t.value(q, b) * grads[c][D - 1];
  }
}

SparseOperator assemble_time_matrix(const FeSpace& space, const AssemblyOptions& opts) {
  const int order = quadrature_order(space, opts);
  return assemble_matrix(space, opts.threads,
                         [&](int e, std::span<double> out) { local_time_matrix(space, e, order, out); });
}

std::vector<double> assemble_load(const FeSpace& space, const ProblemDefinition& prob, const AssemblyOptions& opts) {
  const auto& t = shape_table(space.dim(), space.degree(), quadrature_order(space, opts));
  std::vector<double> f(static_cast<std::size_t>(space.num_dofs()), 0.0);
  for (int e = 0; e < space.mesh().num_elements(); ++e) {
    const auto g = element_geometry(space.mesh(), e);
    const auto dofs = space.element_dofs(e);
    for (int q = 0; q < t.rule->size(); ++q) {
      const double w = t.rule->weights[q] * g.det * prob.source(g.map(t.rule->points[q]));
      for (int b = 0; b < t.nb; ++b) f[dofs[b]] += w * t.value(q, b);
    }
  }
  zero_constrained(space, f);
  return f;
}

}  // namespace goast
