#include "plateau/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include <Eigen/Dense>

namespace plateau {

namespace {

// Parity (+1 / -1) of the permutation that sorts three distinct values.
int sort_parity(int a, int b, int c) {
  int inversions = (a > b) + (a > c) + (b > c);
  return inversions % 2 == 0 ? 1 : -1;
}

template <std::size_t N>
int find_sorted(const std::vector<std::array<int, N>>& table, const std::array<int, N>& key) {
  auto it = std::lower_bound(table.begin(), table.end(), key);
  return static_cast<int>(it - table.begin());
}

}  // namespace

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

TetMesh TetMesh::from_cells(std::vector<Vec3> nodes, std::vector<std::array<int, 4>> cells,
                            std::vector<int> cell_tags) {
  if (!cell_tags.empty() && cell_tags.size() != cells.size()) {
    throw std::invalid_argument("cell tag count does not match cell count");
  }
  const int n = static_cast<int>(nodes.size());
  for (auto& cell : cells) {
    for (int v : cell) {
      if (v < 0 || v >= n) throw std::invalid_argument("cell references node out of range");
    }
    double vol = signed_volume(nodes[cell[0]], nodes[cell[1]], nodes[cell[2]], nodes[cell[3]]);
    if (vol < 0) std::swap(cell[1], cell[2]);
  }
  TetMesh mesh;
  mesh.nodes_ = std::move(nodes);
  mesh.cells_ = std::move(cells);
  mesh.cell_tags_ = std::move(cell_tags);
  mesh.build_topology();
  return mesh;
}

void TetMesh::build_topology() {
  const std::size_t nc = cells_.size();
  cell_volumes_.resize(nc);
  cell_centroids_.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& v = cells_[c];
    double vol = signed_volume(nodes_[v[0]], nodes_[v[1]], nodes_[v[2]], nodes_[v[3]]);
    if (!(vol > 0)) throw std::invalid_argument("degenerate cell " + std::to_string(c));
    cell_volumes_[c] = vol;
    cell_centroids_[c] = 0.25 * (nodes_[v[0]] + nodes_[v[1]] + nodes_[v[2]] + nodes_[v[3]]);
  }

  edges_.clear();
  facets_.clear();
  edges_.reserve(6 * nc);
  facets_.reserve(4 * nc);
  for (const auto& v : cells_) {
    for (const auto& le : kLocalEdges) {
      int a = v[le[0]], b = v[le[1]];
      edges_.push_back({std::min(a, b), std::max(a, b)});
    }
    for (const auto& lf : kLocalFacets) {
      std::array<int, 3> f{v[lf[0]], v[lf[1]], v[lf[2]]};
      std::sort(f.begin(), f.end());
      facets_.push_back(f);
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  std::sort(facets_.begin(), facets_.end());
  facets_.erase(std::unique(facets_.begin(), facets_.end()), facets_.end());
  edges_.shrink_to_fit();
  facets_.shrink_to_fit();

  cell_edges_.resize(nc);
  cell_edge_signs_.resize(nc);
  cell_facets_.resize(nc);
  cell_facet_signs_.resize(nc);
  facet_cells_.assign(facets_.size(), {-1, -1});

  for (std::size_t c = 0; c < nc; ++c) {
    const auto& v = cells_[c];
    for (int k = 0; k < 6; ++k) {
      int a = v[kLocalEdges[k][0]], b = v[kLocalEdges[k][1]];
      cell_edges_[c][k] = find_sorted(edges_, {std::min(a, b), std::max(a, b)});
      cell_edge_signs_[c][k] = a < b ? 1 : -1;
    }
    for (int k = 0; k < 4; ++k) {
      const auto& lf = kLocalFacets[k];
      int a = v[lf[0]], b = v[lf[1]], d = v[lf[2]];
      std::array<int, 3> f{a, b, d};
      std::sort(f.begin(), f.end());
      int fi = find_sorted(facets_, f);
      cell_facets_[c][k] = fi;
      // Local facet k in local order is outward for even k on a positively
      // oriented cell (boundary of [0,1,2,3] = [123] - [023] + [013] - [012]).
      int local_outward = (k % 2 == 0) ? 1 : -1;
      cell_facet_signs_[c][k] = static_cast<int8_t>(local_outward * sort_parity(a, b, d));
      auto& fc = facet_cells_[fi];
      if (fc[0] < 0) {
        fc[0] = static_cast<int>(c);
      } else if (fc[1] < 0) {
        fc[1] = static_cast<int>(c);
      } else {
        throw std::invalid_argument("facet shared by more than two cells");
      }
    }
  }
}

std::array<Vec3, 4> TetMesh::barycentric_gradients(std::size_t c) const {
  const auto& v = cells_[c];
  Eigen::Matrix3d jac;
  jac.col(0) = nodes_[v[1]] - nodes_[v[0]];
  jac.col(1) = nodes_[v[2]] - nodes_[v[0]];
  jac.col(2) = nodes_[v[3]] - nodes_[v[0]];
  Eigen::Matrix3d inv = jac.inverse();
  std::array<Vec3, 4> g;
  g[1] = inv.row(0).transpose();
  g[2] = inv.row(1).transpose();
  g[3] = inv.row(2).transpose();
  g[0] = -(g[1] + g[2] + g[3]);
  return g;
}

std::size_t TetMesh::num_boundary_facets() const {
  return static_cast<std::size_t>(std::count_if(facet_cells_.begin(), facet_cells_.end(),
                                                [](const auto& fc) { return fc[1] < 0; }));
}

double TetMesh::total_volume() const {
  return std::accumulate(cell_volumes_.begin(), cell_volumes_.end(), 0.0);
}

long TetMesh::euler_characteristic() const {
  return static_cast<long>(num_nodes()) - static_cast<long>(num_edges()) +
         static_cast<long>(num_facets()) - static_cast<long>(num_cells());
}

std::vector<int> TetMesh::facet_neighbors(std::size_t c) const {
  std::vector<int> out;
  for (int f : cell_facets_[c]) {
    const auto& fc = facet_cells_[f];
    int other = fc[0] == static_cast<int>(c) ? fc[1] : fc[0];
    if (other >= 0) out.push_back(other);
  }
  return out;
}

TetMesh TetMesh::subset(const std::vector<int>& keep_cells) const {
  std::vector<int> node_map(nodes_.size(), -1);
  for (int c : keep_cells) {
    for (int v : cells_.at(c)) node_map[v] = 0;
  }
  std::vector<Vec3> nodes;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (node_map[i] == 0) {
      node_map[i] = static_cast<int>(nodes.size());
      nodes.push_back(nodes_[i]);
    }
  }
  std::vector<std::array<int, 4>> cells;
  std::vector<int> tags;
  cells.reserve(keep_cells.size());
  for (int c : keep_cells) {
    const auto& v = cells_[c];
    cells.push_back({node_map[v[0]], node_map[v[1]], node_map[v[2]], node_map[v[3]]});
    if (!cell_tags_.empty()) tags.push_back(cell_tags_[c]);
  }
  return from_cells(std::move(nodes), std::move(cells), std::move(tags));
}

TetMesh build_box_mesh(const std::array<int, 3>& subdivisions, const Vec3& box_halfwidths) {
  return build_box_mesh(subdivisions, -box_halfwidths, box_halfwidths);
}

TetMesh build_box_mesh(const std::array<int, 3>& subdivisions, const Vec3& lo, const Vec3& hi) {
  for (int s : subdivisions) {
    if (s < 1) throw std::invalid_argument("box mesh subdivisions must be >= 1");
  }
  for (int d = 0; d < 3; ++d) {
    if (!(hi[d] > lo[d])) throw std::invalid_argument("box mesh extent must be positive");
  }
  const auto [nx, ny, nz] = subdivisions;
  auto node_id = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };

  std::vector<Vec3> nodes;
  nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k) {
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        nodes.emplace_back(lo[0] + (hi[0] - lo[0]) * i / nx, lo[1] + (hi[1] - lo[1]) * j / ny,
                           lo[2] + (hi[2] - lo[2]) * k / nz);
      }
    }
  }

  // Each tet walks from the low corner to the high corner of the hexahedron,
  // stepping along the axes in one of the six orders.
  static constexpr std::array<std::array<int, 3>, 6> kAxisOrders{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<std::array<int, 4>> cells;
  cells.reserve(6 * static_cast<std::size_t>(nx) * ny * nz);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        for (const auto& order : kAxisOrders) {
          std::array<int, 3> ijk{i, j, k};
          std::array<int, 4> tet{};
          tet[0] = node_id(ijk[0], ijk[1], ijk[2]);
          for (int s = 0; s < 3; ++s) {
            ijk[order[s]] += 1;
            tet[s + 1] = node_id(ijk[0], ijk[1], ijk[2]);
          }
          cells.push_back(tet);
        }
      }
    }
  }
  return TetMesh::from_cells(std::move(nodes), std::move(cells));
}

}  // namespace plateau
