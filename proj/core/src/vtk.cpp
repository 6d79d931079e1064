#include <cstdio>
#include <fstream>

#include "plateau/app.hpp"

namespace plateau {

namespace {

// Enough digits to round-trip a double.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_vtk(const std::filesystem::path& path, const TetMesh& mesh,
               const std::vector<Region>& region, const Eigen::VectorXd& p,
               const Eigen::VectorXd& q) {
  const std::size_t nc = mesh.num_cells();
  const auto nv = static_cast<Eigen::Index>(3 * nc);
  if (p.size() != nv || q.size() != nv) {
    throw std::invalid_argument("write_vtk: fields must hold three values per cell");
  }
  if (!region.empty() && region.size() != nc) {
    throw std::invalid_argument("write_vtk: region labels do not match the mesh");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open " + path.string());

  out << "# vtk DataFile Version 3.0\n"
      << "plateau cell fields\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const Vec3& x : mesh.nodes()) out << num(x[0]) << ' ' << num(x[1]) << ' ' << num(x[2]) << '\n';
  out << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (const auto& c : mesh.cells()) out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  out << "CELL_TYPES " << nc << '\n';
  for (std::size_t c = 0; c < nc; ++c) out << "10\n";

  out << "CELL_DATA " << nc << '\n';
  auto scalar = [&](const char* name, auto value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t c = 0; c < nc; ++c) out << num(value(static_cast<Eigen::Index>(c))) << '\n';
  };
  auto vector = [&](const char* name, const Eigen::VectorXd& f) {
    out << "VECTORS " << name << " double\n";
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(nc); ++c) {
      out << num(f[3 * c]) << ' ' << num(f[3 * c + 1]) << ' ' << num(f[3 * c + 2]) << '\n';
    }
  };
  scalar("p_mag", [&](Eigen::Index c) { return p.segment<3>(3 * c).norm(); });
  scalar("q_mag", [&](Eigen::Index c) { return q.segment<3>(3 * c).norm(); });
  scalar("region", [&](Eigen::Index c) {
    return region.empty() ? 0.0 : static_cast<double>(region[static_cast<std::size_t>(c)]);
  });
  vector("p", p);
  vector("q", q);
  if (!out) throw std::runtime_error("write_vtk: write failed for " + path.string());
}

}  // namespace plateau
