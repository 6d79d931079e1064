#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace plateau {

using Vec3 = Eigen::Vector3d;

/// Thrown when a mesh file cannot be parsed. The message names the offending line.
class MeshParseError : public std::runtime_error {
 public:
  MeshParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Local edge (i, j) of a tetrahedron, i < j in local numbering.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Local facet k is the facet opposite local vertex k.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFacets{
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

/// Tetrahedral mesh with full edge/facet topology.
///
/// Orientation conventions:
///  - cells are stored with positive signed volume (vertices 1 and 2 are
///    swapped on input if needed);
///  - edges are stored as (a, b) with a < b and are oriented a -> b;
///  - facets are stored as sorted triples (a, b, c) and oriented by the
///    normal (x_b - x_a) x (x_c - x_a).
///
/// The per-cell sign arrays record how a cell's local entity relates to the
/// global one: for edges, +1 iff the local direction i -> j agrees with the
/// global low -> high direction; for facets, +1 iff the global facet normal
/// points out of the cell.
class TetMesh {
 public:
  TetMesh() = default;

  /// Builds topology from raw nodes and cells. Cells with negative signed
  /// volume are reoriented. Throws std::invalid_argument on out-of-range
  /// node references or degenerate (zero-volume) cells.
  static TetMesh from_cells(std::vector<Vec3> nodes, std::vector<std::array<int, 4>> cells,
                            std::vector<int> cell_tags = {});

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_facets() const { return facets_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& facets() const { return facets_; }
  const std::vector<std::array<int, 4>>& cells() const { return cells_; }

  const std::array<int, 6>& cell_edges(std::size_t c) const { return cell_edges_[c]; }
  const std::array<int8_t, 6>& cell_edge_signs(std::size_t c) const { return cell_edge_signs_[c]; }
  const std::array<int, 4>& cell_facets(std::size_t c) const { return cell_facets_[c]; }
  const std::array<int8_t, 4>& cell_facet_signs(std::size_t c) const { return cell_facet_signs_[c]; }
  /// The (up to) two cells adjacent to a facet; the second is -1 on the boundary.
  const std::array<int, 2>& facet_cells(std::size_t f) const { return facet_cells_[f]; }

  double cell_volume(std::size_t c) const { return cell_volumes_[c]; }
  const std::vector<double>& cell_volumes() const { return cell_volumes_; }
  const Vec3& cell_centroid(std::size_t c) const { return cell_centroids_[c]; }
  const std::vector<Vec3>& cell_centroids() const { return cell_centroids_; }

  /// Physical-group tags from imported meshes; empty for generated meshes.
  const std::vector<int>& cell_tags() const { return cell_tags_; }

  /// Gradients of the four barycentric coordinates on a cell (constant per cell).
  std::array<Vec3, 4> barycentric_gradients(std::size_t c) const;

  std::size_t num_boundary_facets() const;
  double total_volume() const;
  /// V - E + F - C.
  long euler_characteristic() const;

  /// Cells sharing a facet with cell c (boundary facets omitted).
  std::vector<int> facet_neighbors(std::size_t c) const;

  /// Restriction to a subset of cells. Nodes are renumbered compactly in
  /// increasing order of their original index so edge orientation survives.
  TetMesh subset(const std::vector<int>& keep_cells) const;

 private:
  void build_topology();

  std::vector<Vec3> nodes_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<int> cell_tags_;

  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> facets_;
  std::vector<std::array<int, 6>> cell_edges_;
  std::vector<std::array<int8_t, 6>> cell_edge_signs_;
  std::vector<std::array<int, 4>> cell_facets_;
  std::vector<std::array<int8_t, 4>> cell_facet_signs_;
  std::vector<std::array<int, 2>> facet_cells_;
  std::vector<double> cell_volumes_;
  std::vector<Vec3> cell_centroids_;
};

/// Signed volume of the tetrahedron (a, b, c, d).
double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Structured mesh of the box [-hx, hx] x [-hy, hy] x [-hz, hz], each
/// hexahedron split into 6 tetrahedra sharing its main diagonal
/// (Freudenthal/Kuhn subdivision). Throws std::invalid_argument on a zero
/// subdivision count or a nonpositive half-width.
TetMesh build_box_mesh(const std::array<int, 3>& subdivisions, const Vec3& box_halfwidths);

/// Same as above for an arbitrary axis-aligned box [lo, hi].
TetMesh build_box_mesh(const std::array<int, 3>& subdivisions, const Vec3& lo, const Vec3& hi);

/// Reads an ASCII Gmsh file (format 2.2 or 4.1). Only tetrahedra (element
/// type 4) are imported; their physical tags are kept as cell tags.
TetMesh read_msh(const std::filesystem::path& path);
TetMesh parse_msh(const std::string& text);

}  // namespace plateau
