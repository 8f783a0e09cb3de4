#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "goast/io.hpp"
#include "goast/presets.hpp"
#include "goast/problems.hpp"
#include "goast/report.hpp"

using namespace goast;

namespace {

std::vector<ConvergenceRecord> synthetic(const std::vector<int>& dofs, const std::function<double(int)>& err) {
  std::vector<ConvergenceRecord> out;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    ConvergenceRecord r;
    r.level = static_cast<int>(i);
    r.dofs = dofs[i];
    r.elements = 2 * dofs[i];
    r.J_h = 1.0;
    r.J_error = -err(dofs[i]);
    r.l2_Q_error = err(dofs[i]);
    out.push_back(r);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("errors halving while dofs quadruple give order one") {
  const auto recs = synthetic({16, 64, 256, 1024}, [](int n) { return 4.0 / std::sqrt(static_cast<double>(n)); });
  const auto t = report_rates(recs, 1);
  const auto* row = t.find("l2_Q_error");
  REQUIRE(row != nullptr);
  REQUIRE(row->order_h.size() == 3);
  for (const auto& o : row->order_h) CHECK(*o == doctest::Approx(1.0));
  for (const auto& o : row->order_h_spatial) CHECK(*o == doctest::Approx(0.5));
  CHECK(*row->slope_dofs == doctest::Approx(-0.5));
  // the signed goal error is rated by magnitude
  CHECK(*t.find("J_error")->slope_dofs == doctest::Approx(-0.5));
  // absent quantities get no row
  CHECK(t.find("eta_h") == nullptr);
  CHECK(t.find("l2_h1_error") == nullptr);
}

TEST_CASE("identical errors give order zero") {
  const auto t = report_rates(synthetic({10, 40, 160}, [](int) { return 0.3; }), 2);
  for (const auto& o : t.find("l2_Q_error")->order_h) CHECK(*o == doctest::Approx(0.0));
  CHECK(*t.find("l2_Q_error")->slope_dofs == doctest::Approx(0.0));
}

TEST_CASE("least-squares fit recovers the slope") {
  const auto recs = synthetic({25, 61, 140, 377, 902, 2100},
                              [](int n) { return 3.0 * std::pow(static_cast<double>(n), -0.85); });
  const auto t = report_rates(recs, 1);
  CHECK(*t.find("l2_Q_error")->slope_dofs == doctest::Approx(-0.85).epsilon(0.01 / 0.85));
  CHECK(*tail_slope(recs, "J_error", 3) == doctest::Approx(-0.85));
  const std::vector<double> x{0.0, 1.0, 2.0}, y{1.0, 3.0, 5.0};
  CHECK(least_squares_slope(x, y) == doctest::Approx(2.0));
  CHECK_THROWS_AS(least_squares_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(least_squares_slope(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("rate report needs three records") {
  CHECK_THROWS_AS(report_rates(synthetic({10, 40}, [](int) { return 1.0; }), 1), std::invalid_argument);
  CHECK_THROWS_AS(record_quantity(ConvergenceRecord{}, "bogus"), std::invalid_argument);
}

TEST_CASE("rate footer lines are comments") {
  const auto t = report_rates(synthetic({16, 64, 256}, [](int n) { return 1.0 / n; }), 1);
  const auto text = format_rates(t);
  CHECK_FALSE(text.empty());
  for (const auto& line : split(text, '\n'))
    if (!line.empty()) CHECK(line[0] == '#');
  CHECK(text.find("l2_Q_error") != std::string::npos);
}

TEST_CASE("CSV schema") {
  const std::vector<std::string> expected{"level",   "dofs",    "elements",     "J_h",         "J_error",
                                          "eta_h",   "eta_h_p", "eta_h_a",      "eta_k",       "I_eff_h",
                                          "I_eff_p", "I_eff_a", "newton_iters", "inner_iters", "l2_Q_error",
                                          "l2_h1_error"};
  CHECK(csv_columns() == expected);
  ConvergenceRecord r;
  r.level = 3;
  r.dofs = 81;
  r.elements = 128;
  r.J_h = 0.1;
  r.eta_h = -2.5e-3;
  r.newton_iters = 4;
  r.inner_iters = 17;
  std::ostringstream os;
  write_csv(os, std::vector<ConvergenceRecord>{r}, "# footer\n");
  const auto lines = split(os.str(), '\n');
  REQUIRE(lines.size() == 4);
  CHECK(split(lines[0], ',') == expected);
  const auto f = split(lines[1], ',');
  REQUIRE(f.size() == expected.size());
  CHECK(f[0] == "3");
  CHECK(f[1] == "81");
  CHECK(f[2] == "128");
  CHECK(std::stod(f[3]) == 0.1);
  CHECK(f[4].empty());
  CHECK(std::stod(f[5]) == -2.5e-3);
  CHECK(f[12] == "4");
  CHECK(f[13] == "17");
  CHECK(f[15].empty());
  CHECK(lines[2] == "# footer");
}

TEST_CASE("real formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.718281828459045e-300, 1e300, 5e-324})
    CHECK(std::strtod(format_real(v).c_str(), nullptr) == v);
  CHECK(format_real(0.5) == "0.5");
}

TEST_CASE("VTK output structure") {
  for (int d = 1; d <= 2; ++d) {
    const auto m = refine(build_box_mesh(d, 1), std::vector<int>{0});
    VtkData data;
    data.point_data["u"] = std::vector<double>(m.num_vertices(), 1.5);
    data.cell_data["eta"] = std::vector<double>(m.num_elements(), -1.0);
    std::ostringstream os;
    write_vtk(os, m, data);
    const auto lines = split(os.str(), '\n');
    CHECK(lines[0] == "# vtk DataFile Version 3.0");
    CHECK(lines[2] == "ASCII");
    CHECK(lines[3] == "DATASET UNSTRUCTURED_GRID");
    CHECK(lines[4] == "POINTS " + std::to_string(m.num_vertices()) + " double");
    const std::size_t cells = 5 + m.num_vertices();
    CHECK(lines[cells] ==
          "CELLS " + std::to_string(m.num_elements()) + " " + std::to_string(m.num_elements() * (d + 3)));
    // every cell is listed with positive orientation
    for (int e = 0; e < m.num_elements(); ++e) {
      std::istringstream is(lines[cells + 1 + e]);
      int n = 0;
      is >> n;
      CHECK(n == d + 2);
      std::array<int, 4> c{};
      for (int i = 0; i < n; ++i) is >> c[i];
      const auto& P = m.vertices();
      double det;
      if (d == 1) {
        det = (P[c[1]][0] - P[c[0]][0]) * (P[c[2]][1] - P[c[0]][1]) - (P[c[2]][0] - P[c[0]][0]) * (P[c[1]][1] - P[c[0]][1]);
      } else {
        std::array<std::array<double, 3>, 3> a{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) a[i][j] = P[c[i + 1]][j] - P[c[0]][j];
        det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
              a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
      }
      CHECK(det > 0.0);
    }
    const std::size_t types = cells + 1 + m.num_elements();
    CHECK(lines[types] == "CELL_TYPES " + std::to_string(m.num_elements()));
    CHECK(lines[types + 1] == (d == 1 ? "5" : "10"));
    CHECK(os.str().find("POINT_DATA " + std::to_string(m.num_vertices())) != std::string::npos);
    CHECK(os.str().find("SCALARS eta double 1") != std::string::npos);

    VtkData bad;
    bad.cell_data["eta"] = {1.0};
    std::ostringstream sink;
    CHECK_THROWS_AS(write_vtk(sink, m, bad), std::invalid_argument);
  }
}

TEST_CASE("vertex values are the leading coefficients") {
  auto V = std::make_shared<const FeSpace>(std::make_shared<const SimplicialMesh>(build_box_mesh(1, 2)), 2);
  const auto f = interpolate(V, [](const Point& x) { return x[0] + 10.0 * x[1]; });
  const auto v = vertex_values(f);
  REQUIRE(static_cast<int>(v.size()) == V->mesh().num_vertices());
  for (int i = 0; i < V->mesh().num_vertices(); ++i)
    CHECK(v[i] == doctest::Approx(V->mesh().vertices()[i][0] + 10.0 * V->mesh().vertices()[i][1]));
}

TEST_CASE("presets") {
  CHECK(parse_preset("linear_goal") == Preset::LinearGoal);
  CHECK(parse_preset("smooth_convergence") == Preset::SmoothConvergence);
  CHECK_FALSE(parse_preset("bogus").has_value());
  for (auto p : {Preset::SmoothConvergence, Preset::LinearGoal, Preset::NonlinearGoal, Preset::Custom})
    CHECK(parse_preset(to_string(p)) == p);

  const auto lin = make_experiment(Preset::LinearGoal, 2, 4.0, 1e-5);
  CHECK(lin.goal.kind() == GoalKind::FinalTimeIntegral);
  CHECK(*lin.problem.exact_goal == doctest::Approx(1.10167812933171));
  const auto non = make_experiment(Preset::NonlinearGoal, 1, 4.0, 1.0);
  CHECK(non.goal.kind() == GoalKind::PEnergyRegion);
  CHECK(*non.problem.exact_goal == doctest::Approx(reference::kDiamondEnergyD1));
  CHECK(*make_experiment(Preset::NonlinearGoal, 2, 4.0, 1.0).problem.exact_goal ==
        doctest::Approx(0.01937125060566419));
  // the region value is only known for p = 4
  CHECK_FALSE(make_experiment(Preset::NonlinearGoal, 1, 3.0, 1.0).problem.exact_goal.has_value());
  CHECK(make_experiment(Preset::Custom, 1, 3.0, 1.0, "p_energy").goal.kind() == GoalKind::PEnergyRegion);
  CHECK_THROWS_AS(make_experiment(Preset::Custom, 1, 3.0, 1.0, "bogus"), std::invalid_argument);
}
