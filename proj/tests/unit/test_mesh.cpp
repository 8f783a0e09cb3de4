#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "goast/mesh.hpp"

using namespace goast;

namespace {

std::map<BoundaryTag, int> count_tags(const SimplicialMesh& m) {
  std::map<BoundaryTag, int> c;
  for (const auto& f : m.boundary()) ++c[f.tag];
  return c;
}

double min_quality(const SimplicialMesh& m) {
  double q = 1.0;
  for (int e = 0; e < m.num_elements(); ++e) q = std::min(q, m.quality(e));
  return q;
}

}  // namespace

TEST_CASE("box mesh counts and volume") {
  const auto m11 = build_box_mesh(1, 1);
  CHECK(m11.num_elements() == 2);
  CHECK(m11.num_vertices() == 4);
  CHECK(m11.total_volume() == doctest::Approx(1.0).epsilon(1e-14));

  const auto m12 = build_box_mesh(1, 2);
  CHECK(m12.num_elements() == 8);
  CHECK(m12.num_vertices() == 9);

  const auto m21 = build_box_mesh(2, 1);
  CHECK(m21.num_elements() == 6);
  CHECK(m21.num_vertices() == 8);
  CHECK(m21.total_volume() == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(build_box_mesh(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_box_mesh(1, 0), std::invalid_argument);
}

TEST_CASE("boundary classification on unit boxes") {
  const auto c1 = count_tags(build_box_mesh(1, 1));
  CHECK(c1.at(BoundaryTag::Bottom) == 1);
  CHECK(c1.at(BoundaryTag::Top) == 1);
  CHECK(c1.at(BoundaryTag::Lateral) == 2);

  const auto c2 = count_tags(build_box_mesh(1, 2));
  CHECK(c2.at(BoundaryTag::Bottom) == 2);
  CHECK(c2.at(BoundaryTag::Top) == 2);
  CHECK(c2.at(BoundaryTag::Lateral) == 4);

  const auto m = build_box_mesh(2, 2);
  const auto c3 = count_tags(m);
  // each of the six faces carries 2 * 2 * 2 triangles
  CHECK(c3.at(BoundaryTag::Bottom) == 8);
  CHECK(c3.at(BoundaryTag::Top) == 8);
  CHECK(c3.at(BoundaryTag::Lateral) == 32);

  const auto tags = classify_boundary(m);
  int interior = 0;
  for (const auto& [key, tag] : tags) interior += tag == BoundaryTag::Interior;
  // (4 * 48 - 48) / 2 interior facets
  CHECK(interior == (4 * m.num_elements() - 48) / 2);
}

TEST_CASE("refine: single mark, all marks, empty marks") {
  const auto m = build_box_mesh(1, 1);
  const std::vector<int> one{0};
  const auto r1 = refine(m, one);
  CHECK(check_conformity(r1).empty());
  CHECK(r1.total_volume() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r1.num_elements() >= 2);

  const std::vector<int> all{0, 1};
  const auto r2 = refine(m, all);
  CHECK(r2.num_elements() == 4);
  CHECK(check_conformity(r2).empty());

  const auto r0 = refine(m, std::vector<int>{});
  CHECK(r0.num_elements() == m.num_elements());
  CHECK(r0.num_vertices() == m.num_vertices());
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto a = m.element_vertices(e), b = r0.element_vertices(e);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("refine_all halves the mesh size after D rounds") {
  for (int d = 1; d <= 2; ++d) {
    auto m = build_box_mesh(d, 1);
    const int D = d + 1;
    for (int r = 0; r < D; ++r) m = refine_all(m);
    const auto ref = build_box_mesh(d, 2);
    CHECK(m.num_vertices() == ref.num_vertices());
    CHECK(m.num_elements() == ref.num_elements());
    CHECK(check_conformity(m).empty());
  }
}

TEST_CASE("random bisection sequences stay conforming and shape regular") {
  for (int d = 1; d <= 2; ++d) {
    std::mt19937_64 rng(7 + d);
    SimplicialMesh m = build_box_mesh(d, 2);
    const double q0 = min_quality(m);
    double qmin = q0;
    for (int step = 0; step < (d == 1 ? 25 : 12); ++step) {
      std::vector<int> marked;
      std::bernoulli_distribution pick(0.15);
      for (int e = 0; e < m.num_elements(); ++e)
        if (pick(rng)) marked.push_back(e);
      if (marked.empty()) marked.push_back(0);
      const auto next = refine(m, marked);

      REQUIRE(check_conformity(next).empty());
      CHECK(next.total_volume() == doctest::Approx(1.0).epsilon(1e-12));
      qmin = std::min(qmin, min_quality(next));

      // every marked element was bisected: none of them survives unchanged
      std::set<int> survivors;
      for (int e = 0; e < next.num_elements(); ++e)
        if (next.element(e).id == m.element(next.element(e).origin).id) survivors.insert(next.element(e).origin);
      for (int e : marked) CHECK(survivors.count(e) == 0);

      // genealogy
      for (int e = 0; e < next.num_elements(); ++e) {
        const auto& el = next.element(e);
        if (el.parent < 0) continue;
        const auto& parent = next.history()[el.parent];
        CHECK(el.generation == parent.generation + 1);
        int shared = 0;
        for (int i = 0; i <= d + 1; ++i)
          for (int j = 0; j <= d + 1; ++j) shared += el.vertices[i] == parent.vertices[j];
        CHECK(shared == d + 1);
      }
      m = next;
    }
    // bisection produces finitely many similarity classes
    CHECK(qmin > 0.2 * q0);
    INFO("d=" << d << " min quality " << qmin << " initial " << q0);
  }
}

TEST_CASE("refinement keeps boundary tags consistent with geometry") {
  auto m = build_box_mesh(2, 1);
  m = refine(m, std::vector<int>{0, 3});
  for (const auto& f : m.boundary()) {
    const auto v = m.element_vertices(f.element);
    for (int i = 0; i < 4; ++i) {
      if (i == f.opposite) continue;
      const auto& x = m.vertices()[v[i]];
      if (f.tag == BoundaryTag::Top) CHECK(x[2] == doctest::Approx(1.0));
      if (f.tag == BoundaryTag::Bottom) CHECK(x[2] == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("tensor meshes are symmetric and conforming") {
  const std::vector<double> xb{0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> tb{0.0, 0.1, 0.5, 0.9, 1.0};
  for (int d = 1; d <= 2; ++d) {
    const auto m = build_tensor_mesh(d, xb, tb);
    CHECK(check_conformity(m).empty());
    CHECK(m.total_volume() == doctest::Approx(1.0).epsilon(1e-13));
    auto r = m;
    for (int k = 0; k < 3; ++k) r = refine(r, std::vector<int>{0, r.num_elements() / 2});
    CHECK(check_conformity(r).empty());
  }
}

TEST_CASE("classify_boundary rejects non-box geometry") {
  std::vector<Point> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  Element e;
  e.vertices = {0, 1, 2, -1};
  e.tag = 2;
  CHECK_THROWS(SimplicialMesh(1 + 1, v, {e}));
}
