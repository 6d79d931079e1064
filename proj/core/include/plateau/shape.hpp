#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "plateau/mesh.hpp"

namespace plateau {

/// Thrown when a normal is requested where the level-set gradient vanishes.
class DegeneratePointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class ShapeKind { sphere, peanut, donut, croissant, custom };

std::string to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& name);

struct SphereGeometry {
  double radius = 1.0;
};

/// Surface of revolution about the x3-axis: smooth union of two spheres.
struct PeanutGeometry {
  double lobe_radius = 0.65;
  double lobe_offset = 0.5;  // lobe centers at +-offset on the axis
  double blend = 0.15;       // smooth-minimum radius
};

/// Torus in the x1x2-plane.
struct DonutGeometry {
  double major_radius = 0.7;
  double minor_radius = 0.4;
};

/// Tube of radius r around a centerline made of a half circle of radius R
/// (x2 >= 0, in the x1x2-plane) continued by two straight pieces of length L
/// in the -x2 direction. The tube ends are hemispherical caps.
struct CroissantGeometry {
  double major_radius = 0.7;
  double minor_radius = 0.4;
  double arm_length = 0.5;
};

/// Level set sampled on a regular grid, trilinearly interpolated.
struct GridGeometry {
  std::array<int, 3> counts{};
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  std::vector<double> values;  // x fastest
};

/// H = R_x2(psi) R_x1(phi) e3.
Vec3 field_direction(double phi, double psi);

/// Obstacle geometry plus the external field direction H.
///
/// level() is negative strictly inside and positive strictly outside; for
/// the built-in shapes it is a signed distance (exact for sphere, donut and
/// croissant, approximate for the blended peanut).
class Shape {
 public:
  using Geometry =
      std::variant<SphereGeometry, PeanutGeometry, DonutGeometry, CroissantGeometry, GridGeometry>;

  static Shape sphere(double radius = 1.0);
  static Shape peanut(const PeanutGeometry& g = {});
  static Shape donut(double major_radius = 0.7, double minor_radius = 0.4);
  static Shape croissant(double major_radius = 0.7, double minor_radius = 0.4,
                         double arm_length = 0.5);
  static Shape from_grid(GridGeometry grid);
  /// Reads a sampled level set: "nx ny nz", "xmin ymin zmin xmax ymax zmax",
  /// then nx*ny*nz values with x varying fastest. '#' starts a comment.
  static Shape from_file(const std::filesystem::path& path);

  ShapeKind kind() const;
  const Geometry& geometry() const { return geometry_; }

  /// Returns a copy with field direction H = field_direction(phi, psi).
  Shape oriented(double phi, double psi) const;
  double phi() const { return phi_; }
  double psi() const { return psi_; }
  const Vec3& field() const { return field_; }

  double level(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  /// Outward unit normal; throws DegeneratePointError if |grad| < 1e-12.
  Vec3 normal(const Vec3& x) const;

  /// Radius of a ball about the origin containing the shape.
  double circumradius() const;
  /// Reference point for one-sidedness diagnostics.
  Vec3 center() const;

 private:
  explicit Shape(Geometry g) : geometry_(std::move(g)) {}

  Geometry geometry_;
  double phi_ = 0.0;
  double psi_ = 0.0;
  Vec3 field_ = Vec3::UnitZ();
};

}  // namespace plateau
