#include "plateau/shape.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace plateau {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct LevelAndGradient {
  double value;
  Vec3 gradient;
};

LevelAndGradient sphere_level(const Vec3& x, const Vec3& center, double radius) {
  Vec3 d = x - center;
  double r = d.norm();
  return {r - radius, r > 0 ? Vec3(d / r) : Vec3::Zero()};
}

// Quadratic smooth minimum; the gradient weight of the first argument is h.
LevelAndGradient smooth_min(const LevelAndGradient& a, const LevelAndGradient& b, double k) {
  double h = std::clamp(0.5 + 0.5 * (b.value - a.value) / k, 0.0, 1.0);
  double value = h * a.value + (1 - h) * b.value - k * h * (1 - h);
  return {value, h * a.gradient + (1 - h) * b.gradient};
}

LevelAndGradient tube_level(const Vec3& x, const Vec3& closest, double radius) {
  Vec3 d = x - closest;
  double r = d.norm();
  return {r - radius, r > 0 ? Vec3(d / r) : Vec3::Zero()};
}

Vec3 closest_on_segment(const Vec3& x, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return a + t * ab;
}

LevelAndGradient evaluate(const SphereGeometry& g, const Vec3& x) {
  return sphere_level(x, Vec3::Zero(), g.radius);
}

LevelAndGradient evaluate(const PeanutGeometry& g, const Vec3& x) {
  auto upper = sphere_level(x, Vec3(0, 0, g.lobe_offset), g.lobe_radius);
  auto lower = sphere_level(x, Vec3(0, 0, -g.lobe_offset), g.lobe_radius);
  return smooth_min(upper, lower, g.blend);
}

LevelAndGradient evaluate(const DonutGeometry& g, const Vec3& x) {
  double rho = std::hypot(x[0], x[1]);
  Vec3 closest(g.major_radius, 0, 0);
  if (rho > 0) closest = Vec3(x[0], x[1], 0) * (g.major_radius / rho);
  return tube_level(x, closest, g.minor_radius);
}

LevelAndGradient evaluate(const CroissantGeometry& g, const Vec3& x) {
  const double R = g.major_radius;
  Vec3 best(R, 0, 0);
  double best_d2 = (x - best).squaredNorm();
  auto consider = [&](const Vec3& p) {
    double d2 = (x - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = p;
    }
  };
  double rho = std::hypot(x[0], x[1]);
  if (x[1] >= 0 && rho > 0) consider(Vec3(x[0], x[1], 0) * (R / rho));
  consider(closest_on_segment(x, Vec3(R, 0, 0), Vec3(R, -g.arm_length, 0)));
  consider(closest_on_segment(x, Vec3(-R, 0, 0), Vec3(-R, -g.arm_length, 0)));
  return tube_level(x, best, g.minor_radius);
}

LevelAndGradient evaluate(const GridGeometry& g, const Vec3& x) {
  Vec3 spacing;
  for (int d = 0; d < 3; ++d) spacing[d] = (g.hi[d] - g.lo[d]) / (g.counts[d] - 1);
  Vec3 clamped = x.cwiseMax(g.lo).cwiseMin(g.hi);
  std::array<int, 3> cell{};
  Vec3 t;
  for (int d = 0; d < 3; ++d) {
    double s = (clamped[d] - g.lo[d]) / spacing[d];
    cell[d] = std::clamp(static_cast<int>(std::floor(s)), 0, g.counts[d] - 2);
    t[d] = s - cell[d];
  }
  auto at = [&](int i, int j, int k) {
    return g.values[static_cast<std::size_t>(i) +
                    static_cast<std::size_t>(g.counts[0]) * (j + static_cast<std::size_t>(g.counts[1]) * k)];
  };
  double value = 0;
  Vec3 grad = Vec3::Zero();
  for (int corner = 0; corner < 8; ++corner) {
    int di = corner & 1, dj = (corner >> 1) & 1, dk = (corner >> 2) & 1;
    double v = at(cell[0] + di, cell[1] + dj, cell[2] + dk);
    double wx = di ? t[0] : 1 - t[0];
    double wy = dj ? t[1] : 1 - t[1];
    double wz = dk ? t[2] : 1 - t[2];
    value += v * wx * wy * wz;
    grad[0] += v * (di ? 1 : -1) * wy * wz / spacing[0];
    grad[1] += v * (dj ? 1 : -1) * wx * wz / spacing[1];
    grad[2] += v * (dk ? 1 : -1) * wx * wy / spacing[2];
  }
  // Outside the sampled box, continue with the distance to the box.
  Vec3 outside = x - clamped;
  double excess = outside.norm();
  if (excess > 0) return {value + excess, outside / excess};
  return {value, grad};
}

}  // namespace

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::sphere: return "sphere";
    case ShapeKind::peanut: return "peanut";
    case ShapeKind::donut: return "donut";
    case ShapeKind::croissant: return "croissant";
    case ShapeKind::custom: return "custom";
  }
  return "unknown";
}

ShapeKind shape_kind_from_string(const std::string& name) {
  for (auto k : {ShapeKind::sphere, ShapeKind::peanut, ShapeKind::donut, ShapeKind::croissant,
                 ShapeKind::custom}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown shape '" + name + "'");
}

Vec3 field_direction(double phi, double psi) {
  return Vec3(std::cos(phi) * std::sin(psi), -std::sin(phi), std::cos(phi) * std::cos(psi));
}

Shape Shape::sphere(double radius) {
  if (!(radius > 0)) throw std::invalid_argument("sphere radius must be positive");
  return Shape(SphereGeometry{radius});
}

Shape Shape::peanut(const PeanutGeometry& g) {
  if (!(g.lobe_radius > 0 && g.blend > 0 && g.lobe_offset >= 0)) {
    throw std::invalid_argument("invalid peanut parameters");
  }
  return Shape(g);
}

Shape Shape::donut(double major_radius, double minor_radius) {
  if (!(minor_radius > 0 && major_radius > minor_radius)) {
    throw std::invalid_argument("donut radii must satisfy R > r > 0");
  }
  return Shape(DonutGeometry{major_radius, minor_radius});
}

Shape Shape::croissant(double major_radius, double minor_radius, double arm_length) {
  if (!(minor_radius > 0 && major_radius > minor_radius && arm_length >= 0)) {
    throw std::invalid_argument("croissant parameters must satisfy R > r > 0, L >= 0");
  }
  return Shape(CroissantGeometry{major_radius, minor_radius, arm_length});
}

Shape Shape::from_grid(GridGeometry grid) {
  for (int d = 0; d < 3; ++d) {
    if (grid.counts[d] < 2) throw std::invalid_argument("level-set grid needs >= 2 samples per axis");
    if (!(grid.hi[d] > grid.lo[d])) throw std::invalid_argument("level-set grid has empty extent");
  }
  std::size_t n = static_cast<std::size_t>(grid.counts[0]) * grid.counts[1] * grid.counts[2];
  if (grid.values.size() != n) throw std::invalid_argument("level-set grid value count mismatch");
  return Shape(std::move(grid));
}

Shape Shape::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open level-set file " + path.string());
  std::ostringstream clean;
  for (std::string line; std::getline(in, line);) {
    clean << line.substr(0, line.find('#')) << '\n';
  }
  std::istringstream ss(clean.str());
  GridGeometry g;
  if (!(ss >> g.counts[0] >> g.counts[1] >> g.counts[2])) {
    throw std::runtime_error("level-set file: missing grid counts");
  }
  if (!(ss >> g.lo[0] >> g.lo[1] >> g.lo[2] >> g.hi[0] >> g.hi[1] >> g.hi[2])) {
    throw std::runtime_error("level-set file: missing bounding box");
  }
  for (double v; ss >> v;) g.values.push_back(v);
  return from_grid(std::move(g));
}

ShapeKind Shape::kind() const {
  return std::visit(Overloaded{[](const SphereGeometry&) { return ShapeKind::sphere; },
                               [](const PeanutGeometry&) { return ShapeKind::peanut; },
                               [](const DonutGeometry&) { return ShapeKind::donut; },
                               [](const CroissantGeometry&) { return ShapeKind::croissant; },
                               [](const GridGeometry&) { return ShapeKind::custom; }},
                    geometry_);
}

Shape Shape::oriented(double phi, double psi) const {
  Shape s = *this;
  s.phi_ = phi;
  s.psi_ = psi;
  s.field_ = field_direction(phi, psi);
  return s;
}

double Shape::level(const Vec3& x) const {
  return std::visit([&](const auto& g) { return evaluate(g, x).value; }, geometry_);
}

Vec3 Shape::gradient(const Vec3& x) const {
  return std::visit([&](const auto& g) { return evaluate(g, x).gradient; }, geometry_);
}

Vec3 Shape::normal(const Vec3& x) const {
  Vec3 g = gradient(x);
  double n = g.norm();
  if (n < 1e-12) throw DegeneratePointError("level-set gradient vanishes; normal undefined");
  return g / n;
}

double Shape::circumradius() const {
  return std::visit(
      Overloaded{[](const SphereGeometry& g) { return g.radius; },
                 [](const PeanutGeometry& g) { return g.lobe_offset + g.lobe_radius; },
                 [](const DonutGeometry& g) { return g.major_radius + g.minor_radius; },
                 [](const CroissantGeometry& g) {
                   return std::max(g.major_radius,
                                   std::hypot(g.major_radius, g.arm_length)) +
                          g.minor_radius;
                 },
                 [](const GridGeometry& g) { return g.lo.cwiseAbs().cwiseMax(g.hi.cwiseAbs()).norm(); }},
      geometry_);
}

Vec3 Shape::center() const { return Vec3::Zero(); }

}  // namespace plateau
