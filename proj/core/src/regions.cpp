#include "plateau/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace plateau {

std::size_t RegionLabels::count(Region r) const {
  return static_cast<std::size_t>(std::count(region.begin(), region.end(), r));
}

namespace {

std::vector<double> node_levels(const TetMesh& mesh, const Shape& shape) {
  std::vector<double> levels(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) levels[i] = shape.level(mesh.nodes()[i]);
  return levels;
}

}  // namespace

RegionLabels classify_cells(const TetMesh& mesh, const Shape& shape, const RegionParams& params) {
  const auto levels = node_levels(mesh, shape);
  RegionLabels labels;
  labels.region.resize(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    bool any_nonneg = false, any_nonpos = false, all_neg = true;
    for (int v : mesh.cells()[c]) {
      double l = levels[v];
      any_nonneg |= l >= 0;
      any_nonpos |= l <= 0;
      all_neg &= l < 0;
    }
    if (all_neg) {
      labels.region[c] = Region::obstacle;
    } else if (any_nonneg && any_nonpos) {
      labels.region[c] = Region::layer;
    } else {
      labels.region[c] = Region::exterior;
    }
  }
  update_weights(labels, mesh, shape, params);
  return labels;
}

void update_weights(RegionLabels& labels, const TetMesh& mesh, const Shape& shape,
                    const RegionParams& params) {
  const std::size_t n = mesh.num_cells();
  labels.p_max.assign(n, 1.0);
  labels.q_max.assign(n, params.beta);
  const Vec3& field = shape.field();
  for (std::size_t c = 0; c < n; ++c) {
    switch (labels.region[c]) {
      case Region::obstacle:
        labels.p_max[c] = params.obstacle_weight;
        labels.q_max[c] = params.obstacle_weight;
        break;
      case Region::layer:
        labels.p_max[c] =
            std::max(std::abs(shape.normal(mesh.cell_centroid(c)).dot(field)), params.density_floor);
        break;
      case Region::exterior:
        break;
    }
  }
}

std::vector<int> cutout_cells(const TetMesh& mesh, const RegionLabels& labels) {
  std::vector<char> near_layer(mesh.num_nodes(), 0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (labels.region[c] != Region::layer) continue;
    for (int v : mesh.cells()[c]) near_layer[v] = 1;
  }
  std::vector<int> keep;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    bool drop = labels.region[c] == Region::obstacle;
    if (drop) {
      for (int v : mesh.cells()[c]) drop &= !near_layer[v];
    }
    if (!drop) keep.push_back(static_cast<int>(c));
  }
  return keep;
}

double layer_cell_size(const TetMesh& mesh, const RegionLabels& labels) {
  double volume = 0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (labels.region[c] == Region::layer) {
      volume += mesh.cell_volume(c);
      ++count;
    }
  }
  if (count == 0) {
    volume = mesh.total_volume();
    count = mesh.num_cells();
  }
  return std::cbrt(6.0 * volume / static_cast<double>(count));
}

std::vector<double> layer_patch_areas(const TetMesh& mesh, const RegionLabels& labels,
                                      const Shape& shape) {
  const auto levels = node_levels(mesh, shape);
  std::vector<double> areas(mesh.num_cells(), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (labels.region[c] != Region::layer) continue;
    const auto& v = mesh.cells()[c];
    // Zero crossings along the six edges of the linear interpolant.
    std::vector<Vec3> pts;
    for (const auto& le : kLocalEdges) {
      double la = levels[v[le[0]]], lb = levels[v[le[1]]];
      const Vec3& a = mesh.nodes()[v[le[0]]];
      const Vec3& b = mesh.nodes()[v[le[1]]];
      // Zero levels count as outside so every crossing is well defined.
      if ((la < 0) != (lb < 0)) {
        double t = la / (la - lb);
        pts.push_back(a + t * (b - a));
      }
    }
    double& area = areas[c];
    if (pts.size() == 3) {
      area = 0.5 * (pts[1] - pts[0]).cross(pts[2] - pts[0]).norm();
    } else if (pts.size() == 4) {
      // Planar quadrilateral: order the crossings by angle about their centroid.
      Vec3 centroid = 0.25 * (pts[0] + pts[1] + pts[2] + pts[3]);
      Vec3 normal = (pts[1] - pts[0]).cross(pts[2] - pts[0]);
      if (normal.norm() < 1e-300) normal = (pts[1] - pts[0]).cross(pts[3] - pts[0]);
      normal.normalize();
      Vec3 e1 = (pts[0] - centroid).normalized();
      Vec3 e2 = normal.cross(e1);
      std::sort(pts.begin(), pts.end(), [&](const Vec3& p, const Vec3& q) {
        return std::atan2((p - centroid).dot(e2), (p - centroid).dot(e1)) <
               std::atan2((q - centroid).dot(e2), (q - centroid).dot(e1));
      });
      area = 0.5 * (pts[1] - pts[0]).cross(pts[2] - pts[0]).norm();
      area += 0.5 * (pts[2] - pts[0]).cross(pts[3] - pts[0]).norm();
    }
  }
  return areas;
}

double layer_surface_area(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape) {
  const auto areas = layer_patch_areas(mesh, labels, shape);
  return std::accumulate(areas.begin(), areas.end(), 0.0);
}

}  // namespace plateau
