#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace goast {

// Space-time point. The last used coordinate (index D-1) is the time t;
// unused trailing entries stay zero.
using Point = std::array<double, 3>;

enum class BoundaryTag : std::uint8_t { Interior, Lateral, Bottom, Top };

const char* to_string(BoundaryTag tag);

// Simplex stored as an ordered vertex tuple. The ordering and `tag` encode
// the newest-vertex bisection state: the refinement edge joins local
// vertices 0 and `tag`.
struct Element {
  std::array<int, 4> vertices{-1, -1, -1, -1};
  int tag = 0;
  int generation = 0;
  int id = -1;      // index into SimplicialMesh::history()
  int parent = -1;  // history id of the element this one was bisected from
  int origin = -1;  // element index in the mesh this one was refined from
};

struct ElementRecord {
  std::array<int, 4> vertices{-1, -1, -1, -1};
  int generation = 0;
  int parent = -1;
};

// Sorted vertex ids of a facet; unused slots are -1.
using FacetKey = std::array<int, 3>;
using FacetTagMap = std::map<FacetKey, BoundaryTag>;

struct BoundaryFacet {
  int element = -1;
  int opposite = -1;  // local index of the element vertex not on the facet
  BoundaryTag tag = BoundaryTag::Interior;
};

struct EdgeKeyHash {
  std::size_t operator()(std::uint64_t k) const noexcept {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

/// Conforming simplicial mesh of the space-time box (0,1)^D, D = d + 1.
///
/// Vertex ids are stable under refinement: new vertices are appended, so a
/// refined mesh extends the vertex list of its predecessor.
class SimplicialMesh {
 public:
  SimplicialMesh() = default;
  SimplicialMesh(int dim, std::vector<Point> vertices, std::vector<Element> elements);

  int dim() const { return dim_; }
  int space_dim() const { return dim_ - 1; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  bool empty() const { return elements_.empty(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(int e) const { return elements_.at(static_cast<std::size_t>(e)); }
  const std::vector<ElementRecord>& history() const { return history_; }
  const std::vector<BoundaryFacet>& boundary() const { return boundary_; }
  const FacetTagMap& facet_tags() const { return facet_tags_; }

  // Vertices of element e in tuple order.
  std::span<const int> element_vertices(int e) const;
  double volume(int e) const;
  double total_volume() const;
  Point barycenter(int e) const;
  // Ratio D * inradius / circumradius, 1 for the regular simplex.
  double quality(int e) const;

  // Midpoint vertex of a bisected edge, or -1.
  int midpoint(int a, int b) const;

  // Revision counter; a mesh produced by refine() knows the revision of its
  // predecessor so solution transfer can validate `Element::origin`.
  std::uint64_t revision() const { return revision_; }
  std::uint64_t previous_revision() const { return previous_revision_; }

  friend SimplicialMesh refine(const SimplicialMesh& mesh, std::span<const int> marked);

 private:
  void finalize_boundary();

  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  std::vector<ElementRecord> history_;
  std::unordered_map<std::uint64_t, int, EdgeKeyHash> midpoints_;
  std::vector<BoundaryFacet> boundary_;
  FacetTagMap facet_tags_;
  std::uint64_t revision_ = 0;
  std::uint64_t previous_revision_ = 0;
};

// Tensor grid with the given breakpoints (spatial axes share `space_breaks`),
// every box split into D! Kuhn simplices. Boxes are mirrored so that their
// Kuhn corner points toward the spatial center and away from the temporal
// center; the mesh is then symmetric about x_i = 1/2 and t = 1/2, and
// diamond/octahedron regions around the center are unions of elements.
SimplicialMesh build_tensor_mesh(int d, std::span<const double> space_breaks,
                                 std::span<const double> time_breaks);

// Uniform n^D grid of (0,1)^D.
SimplicialMesh build_box_mesh(int d, int n);

// Bisects every marked element at least once, then closes hanging nodes.
SimplicialMesh refine(const SimplicialMesh& mesh, std::span<const int> marked);

// Refines every element once (D calls halve the mesh size).
SimplicialMesh refine_all(const SimplicialMesh& mesh);

// Tags every facet: Bottom (t = 0), Top (t = 1), Lateral (x_i in {0,1}),
// Interior (shared by two elements). Throws for non-box boundaries or
// non-conforming facets.
FacetTagMap classify_boundary(const SimplicialMesh& mesh);

// Facet of element e opposite local vertex `opposite`.
FacetKey facet_key(const SimplicialMesh& mesh, int e, int opposite);

// Checks conformity (each facet in at most two elements, no hanging
// midpoints) and returns a description of the first violation, or "".
std::string check_conformity(const SimplicialMesh& mesh);

}  // namespace goast
