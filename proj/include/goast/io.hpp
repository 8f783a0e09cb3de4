#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "goast/adaptivity.hpp"

namespace goast {

// Column order of the per-level CSV.
const std::vector<std::string>& csv_columns();

// Round-trip formatting with 17 significant digits.
std::string format_real(double v);

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ConvergenceRecord& r);
void write_csv(std::ostream& os, std::span<const ConvergenceRecord> records, const std::string& footer = {});

struct VtkData {
  std::map<std::string, std::vector<double>> point_data;  // per mesh vertex
  std::map<std::string, std::vector<double>> cell_data;   // per element
};

// Legacy ASCII unstructured grid; triangles are embedded in the plane z = 0.
void write_vtk(std::ostream& os, const SimplicialMesh& mesh, const VtkData& data = {});
void write_vtk(const std::string& path, const SimplicialMesh& mesh, const VtkData& data = {});

// Vertex values of a Lagrange function (the first num_vertices coefficients).
std::vector<double> vertex_values(const FeFunction& f);

}  // namespace goast
