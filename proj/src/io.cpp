#include "goast/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/core.h>

namespace goast {

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"level",   "dofs",    "elements",     "J_h",         "J_error",
                                             "eta_h",   "eta_h_p", "eta_h_a",      "eta_k",       "I_eff_h",
                                             "I_eff_p", "I_eff_a", "newton_iters", "inner_iters", "l2_Q_error",
                                             "l2_h1_error"};
  return cols;
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

}  // namespace

void write_csv_header(std::ostream& os) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

void write_csv_row(std::ostream& os, const ConvergenceRecord& r) {
  os << r.level << ',' << r.dofs << ',' << r.elements << ',' << format_real(r.J_h) << ',' << opt(r.J_error) << ','
     << opt(r.eta_h) << ',' << opt(r.eta_h_p) << ',' << opt(r.eta_h_a) << ',' << opt(r.eta_k) << ','
     << opt(r.I_eff_h) << ',' << opt(r.I_eff_p) << ',' << opt(r.I_eff_a) << ',' << r.newton_iters << ','
     << r.inner_iters << ',' << opt(r.l2_Q_error) << ',' << opt(r.l2_h1_error) << '\n';
}

void write_csv(std::ostream& os, std::span<const ConvergenceRecord> records, const std::string& footer) {
  write_csv_header(os);
  for (const auto& r : records) write_csv_row(os, r);
  os << footer;
}

void write_vtk(std::ostream& os, const SimplicialMesh& mesh, const VtkData& data) {
  const int D = mesh.dim();
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_elements();
  for (const auto& [name, v] : data.point_data)
    if (static_cast<int>(v.size()) != nv) throw std::invalid_argument("write_vtk: point data '" + name + "' has wrong size");
  for (const auto& [name, v] : data.cell_data)
    if (static_cast<int>(v.size()) != ne) throw std::invalid_argument("write_vtk: cell data '" + name + "' has wrong size");

  os << "# vtk DataFile Version 3.0\nspace-time mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nv << " double\n";
  for (const auto& x : mesh.vertices())
    os << format_real(x[0]) << ' ' << format_real(x[1]) << ' ' << format_real(D == 3 ? x[2] : 0.0) << '\n';
  os << "CELLS " << ne << ' ' << ne * (D + 2) << '\n';
  for (int e = 0; e < ne; ++e) {
    auto v = mesh.element_vertices(e);
    std::array<int, 4> c{};
    std::copy(v.begin(), v.end(), c.begin());
    // positive orientation for viewers
    const auto& P = mesh.vertices();
    double det;
    if (D == 2) {
      det = (P[c[1]][0] - P[c[0]][0]) * (P[c[2]][1] - P[c[0]][1]) - (P[c[2]][0] - P[c[0]][0]) * (P[c[1]][1] - P[c[0]][1]);
    } else {
      std::array<std::array<double, 3>, 3> a{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = P[c[i + 1]][j] - P[c[0]][j];
      det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
            a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    }
    if (det < 0.0) std::swap(c[1], c[2]);
    os << D + 1;
    for (int i = 0; i <= D; ++i) os << ' ' << c[i];
    os << '\n';
  }
  os << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) os << (D == 2 ? 5 : 10) << '\n';
  if (!data.point_data.empty()) {
    os << "POINT_DATA " << nv << '\n';
    for (const auto& [name, v] : data.point_data) {
      os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double x : v) os << format_real(x) << '\n';
    }
  }
  if (!data.cell_data.empty()) {
    os << "CELL_DATA " << ne << '\n';
    for (const auto& [name, v] : data.cell_data) {
      os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double x : v) os << format_real(x) << '\n';
    }
  }
}

void write_vtk(const std::string& path, const SimplicialMesh& mesh, const VtkData& data) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_vtk(os, mesh, data);
  if (!os) throw std::runtime_error("failed writing " + path);
}

std::vector<double> vertex_values(const FeFunction& f) {
  const int nv = f.space().mesh().num_vertices();
  return {f.coefficients().begin(), f.coefficients().begin() + nv};
}

}  // namespace goast
