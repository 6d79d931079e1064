#pragma once

#include <cstdint>
#include <vector>

#include "plateau/mesh.hpp"
#include "plateau/shape.hpp"

namespace plateau {

enum class Region : std::uint8_t { obstacle = 0, layer = 1, exterior = 2 };

struct RegionParams {
  double obstacle_weight = 1e5;  // w_E
  double density_floor = 1e-6;   // epsilon
  double beta = 1.0;
};

/// Per-cell region and the weights of the two L1 terms.
///
///   p_max = w_E on obstacle, max(|nu . H|, eps) on the layer, 1 outside;
///   q_max = w_E on obstacle, beta elsewhere.
struct RegionLabels {
  std::vector<Region> region;
  std::vector<double> p_max;
  std::vector<double> q_max;

  std::size_t count(Region r) const;
};

/// Cell is obstacle iff all vertex levels are < 0, layer iff the vertex levels
/// change sign or touch zero, exterior otherwise. The surface density on
/// layer cells uses the shape normal at the cell centroid.
RegionLabels classify_cells(const TetMesh& mesh, const Shape& shape, const RegionParams& params);

/// Recomputes only the weights (region assignment is independent of H and beta).
void update_weights(RegionLabels& labels, const TetMesh& mesh, const Shape& shape,
                    const RegionParams& params);

/// Cells kept by the interior cut-out: everything except obstacle cells that
/// share no vertex with a layer cell.
std::vector<int> cutout_cells(const TetMesh& mesh, const RegionLabels& labels);

/// Typical cell size near the surface: cbrt(6 * mean layer cell volume),
/// which equals the grid spacing on a Freudenthal box mesh. Falls back to all
/// cells when there is no layer.
double layer_cell_size(const TetMesh& mesh, const RegionLabels& labels);

/// Per-cell area of the zero level set of the piecewise-linear interpolant
/// of the shape's level function; zero outside the layer.
std::vector<double> layer_patch_areas(const TetMesh& mesh, const RegionLabels& labels,
                                      const Shape& shape);
/// Area of the zero level set of the piecewise-linear interpolant of the
/// shape's level function, summed over layer cells.
double layer_surface_area(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape);

}  // namespace plateau
