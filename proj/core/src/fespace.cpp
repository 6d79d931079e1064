#include "plateau/fespace.hpp"

#include <algorithm>
#include <cmath>

namespace plateau {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

constexpr double kDegenerateVolume = 1e-14;

void check_cell(const TetMesh& mesh, std::size_t c) {
  if (mesh.cell_volume(c) < kDegenerateVolume) {
    throw AssemblyError("degenerate cell " + std::to_string(c) + " in assembly");
  }
}

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Barycentric gradients and the Whitney basis on one cell.
struct CellBasis {
  std::array<Vec3, 4> grad;
  std::array<int8_t, 6> sign;

  CellBasis(const TetMesh& mesh, std::size_t c)
      : grad(mesh.barycentric_gradients(c)), sign(mesh.cell_edge_signs(c)) {}

  std::array<Vec3, 6> values(const std::array<double, 4>& l) const {
    std::array<Vec3, 6> n;
    for (int k = 0; k < 6; ++k) {
      int i = kLocalEdges[k][0], j = kLocalEdges[k][1];
      n[k] = sign[k] * (l[i] * grad[j] - l[j] * grad[i]);
    }
    return n;
  }

  std::array<Vec3, 6> curls() const {
    std::array<Vec3, 6> n;
    for (int k = 0; k < 6; ++k) {
      int i = kLocalEdges[k][0], j = kLocalEdges[k][1];
      n[k] = sign[k] * 2.0 * grad[i].cross(grad[j]);
    }
    return n;
  }
};

constexpr std::array<double, 4> kCentroid{0.25, 0.25, 0.25, 0.25};

SparseMatrix cell_vector_operator(const TetMesh& mesh, bool curl) {
  Triplets t;
  t.reserve(18 * mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    CellBasis basis(mesh, c);
    auto n = curl ? basis.curls() : basis.values(kCentroid);
    const auto& edges = mesh.cell_edges(c);
    for (int k = 0; k < 6; ++k) {
      for (int d = 0; d < 3; ++d) {
        if (n[k][d] != 0.0) t.emplace_back(static_cast<int>(3 * c + d), edges[k], n[k][d]);
      }
    }
  }
  return from_triplets(static_cast<Eigen::Index>(3 * mesh.num_cells()),
                       static_cast<Eigen::Index>(mesh.num_edges()), t);
}

}  // namespace

DofMap build_dof_map(const TetMesh& mesh, SpaceKind kind) {
  DofMap map;
  map.kind = kind;
  const std::size_t nc = mesh.num_cells();
  switch (kind) {
    case SpaceKind::p1:
      map.num_dofs = mesh.num_nodes();
      map.local_count = 4;
      break;
    case SpaceKind::ned:
      map.num_dofs = mesh.num_edges();
      map.local_count = 6;
      break;
    case SpaceKind::rt:
      map.num_dofs = mesh.num_facets();
      map.local_count = 4;
      break;
    case SpaceKind::p0:
      map.num_dofs = nc;
      map.local_count = 1;
      break;
    case SpaceKind::p0_vec:
      map.num_dofs = 3 * nc;
      map.local_count = 3;
      break;
  }
  map.indices.resize(nc * map.local_count);
  map.signs.assign(nc * map.local_count, 1);
  for (std::size_t c = 0; c < nc; ++c) {
    for (int k = 0; k < map.local_count; ++k) {
      std::size_t slot = c * map.local_count + k;
      switch (kind) {
        case SpaceKind::p1: map.indices[slot] = mesh.cells()[c][k]; break;
        case SpaceKind::ned:
          map.indices[slot] = mesh.cell_edges(c)[k];
          map.signs[slot] = mesh.cell_edge_signs(c)[k];
          break;
        case SpaceKind::rt:
          map.indices[slot] = mesh.cell_facets(c)[k];
          map.signs[slot] = mesh.cell_facet_signs(c)[k];
          break;
        case SpaceKind::p0: map.indices[slot] = static_cast<int>(c); break;
        case SpaceKind::p0_vec: map.indices[slot] = static_cast<int>(3 * c + k); break;
      }
    }
  }
  return map;
}

SparseMatrix discrete_gradient(const TetMesh& mesh) {
  Triplets t;
  t.reserve(2 * mesh.num_edges());
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& [a, b] = mesh.edges()[e];
    t.emplace_back(static_cast<int>(e), a, -1.0);
    t.emplace_back(static_cast<int>(e), b, 1.0);
  }
  return from_triplets(static_cast<Eigen::Index>(mesh.num_edges()),
                       static_cast<Eigen::Index>(mesh.num_nodes()), t);
}

SparseMatrix discrete_curl(const TetMesh& mesh) {
  const auto& edges = mesh.edges();
  auto edge_index = [&](int a, int b) {
    auto it = std::lower_bound(edges.begin(), edges.end(), std::array<int, 2>{a, b});
    return static_cast<int>(it - edges.begin());
  };
  Triplets t;
  t.reserve(3 * mesh.num_facets());
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const auto& [a, b, c] = mesh.facets()[f];
    t.emplace_back(static_cast<int>(f), edge_index(a, b), 1.0);
    t.emplace_back(static_cast<int>(f), edge_index(b, c), 1.0);
    t.emplace_back(static_cast<int>(f), edge_index(a, c), -1.0);
  }
  return from_triplets(static_cast<Eigen::Index>(mesh.num_facets()),
                       static_cast<Eigen::Index>(mesh.num_edges()), t);
}

bool is_symmetric(const SparseMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  SparseMatrix diff = SparseMatrix(a.transpose()) - a;
  double scale = a.coeffs().size() ? a.coeffs().cwiseAbs().maxCoeff() : 0.0;
  double err = diff.coeffs().size() ? diff.coeffs().cwiseAbs().maxCoeff() : 0.0;
  return err <= tol * scale;
}

const TetQuadrature& tet_quadrature() {
  static const TetQuadrature rule = [] {
    const double a = 0.5854101966249685, b = 0.1381966011250105;
    TetQuadrature q;
    q.points = {{{a, b, b, b}, {b, a, b, b}, {b, b, a, b}, {b, b, b, a}}};
    q.weights = {0.25, 0.25, 0.25, 0.25};
    return q;
  }();
  return rule;
}

std::array<Vec3, 6> ned_basis(const TetMesh& mesh, std::size_t c, const std::array<double, 4>& bary) {
  return CellBasis(mesh, c).values(bary);
}

std::array<Vec3, 6> ned_basis_curls(const TetMesh& mesh, std::size_t c) {
  return CellBasis(mesh, c).curls();
}

Vec3 evaluate_ned(const TetMesh& mesh, const Eigen::VectorXd& u, std::size_t c,
                  const std::array<double, 4>& bary) {
  auto n = ned_basis(mesh, c, bary);
  Vec3 value = Vec3::Zero();
  for (int k = 0; k < 6; ++k) value += u[mesh.cell_edges(c)[k]] * n[k];
  return value;
}

Eigen::VectorXd interpolate_ned(const TetMesh& mesh, const VectorFunction& f) {
  const double g = 0.5 / std::sqrt(3.0);
  Eigen::VectorXd dofs(static_cast<Eigen::Index>(mesh.num_edges()));
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Vec3& a = mesh.nodes()[mesh.edges()[e][0]];
    const Vec3& b = mesh.nodes()[mesh.edges()[e][1]];
    Vec3 t = b - a;
    dofs[e] = 0.5 * (f(a + (0.5 - g) * t) + f(a + (0.5 + g) * t)).dot(t);
  }
  return dofs;
}

Eigen::VectorXd interpolate_rt(const TetMesh& mesh, const VectorFunction& f) {
  static constexpr std::array<std::array<double, 3>, 3> kPoints{
      {{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}}};
  Eigen::VectorXd dofs(static_cast<Eigen::Index>(mesh.num_facets()));
  for (std::size_t i = 0; i < mesh.num_facets(); ++i) {
    const auto& [ia, ib, ic] = mesh.facets()[i];
    const Vec3& a = mesh.nodes()[ia];
    const Vec3& b = mesh.nodes()[ib];
    const Vec3& c = mesh.nodes()[ic];
    Vec3 area_normal = 0.5 * (b - a).cross(c - a);
    double flux = 0;
    for (const auto& p : kPoints) flux += f(p[0] * a + p[1] * b + p[2] * c).dot(area_normal) / 3.0;
    dofs[i] = flux;
  }
  return dofs;
}

Eigen::VectorXd interpolate_p1(const TetMesh& mesh, const std::function<double(const Vec3&)>& f) {
  Eigen::VectorXd dofs(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) dofs[i] = f(mesh.nodes()[i]);
  return dofs;
}

CellOperators assemble_mixed(const TetMesh& mesh) {
  return {cell_vector_operator(mesh, false), cell_vector_operator(mesh, true)};
}

namespace {

void check_ned_size(const TetMesh& mesh, const Eigen::VectorXd& u, const char* who) {
  if (u.size() != static_cast<Eigen::Index>(mesh.num_edges())) {
    throw std::invalid_argument(std::string(who) + ": expected one coefficient per edge");
  }
}

}  // namespace

Eigen::VectorXd project_p0(const TetMesh& mesh, const Eigen::VectorXd& u) {
  check_ned_size(mesh, u, "project_p0");
  return cell_vector_operator(mesh, false) * u;
}

Eigen::VectorXd cell_curl(const TetMesh& mesh, const Eigen::VectorXd& u) {
  check_ned_size(mesh, u, "cell_curl");
  return cell_vector_operator(mesh, true) * u;
}

SparseMatrix assemble_mass_ned(const TetMesh& mesh) {
  const auto& quad = tet_quadrature();
  Triplets t;
  t.reserve(36 * mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    check_cell(mesh, c);
    CellBasis basis(mesh, c);
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (int q = 0; q < 4; ++q) {
      auto n = basis.values(quad.points[q]);
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) local(i, j) += quad.weights[q] * n[i].dot(n[j]);
      }
    }
    local *= mesh.cell_volume(c);
    const auto& edges = mesh.cell_edges(c);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) t.emplace_back(edges[i], edges[j], local(i, j));
    }
  }
  auto n = static_cast<Eigen::Index>(mesh.num_edges());
  return from_triplets(n, n, t);
}

SparseMatrix assemble_curlcurl(const TetMesh& mesh) {
  Triplets t;
  t.reserve(36 * mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    check_cell(mesh, c);
    auto curls = CellBasis(mesh, c).curls();
    const auto& edges = mesh.cell_edges(c);
    const double vol = mesh.cell_volume(c);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) t.emplace_back(edges[i], edges[j], vol * curls[i].dot(curls[j]));
    }
  }
  auto n = static_cast<Eigen::Index>(mesh.num_edges());
  return from_triplets(n, n, t);
}

SparseMatrix assemble_centroid_mass(const TetMesh& mesh) {
  Triplets t;
  t.reserve(36 * mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    check_cell(mesh, c);
    auto n = CellBasis(mesh, c).values(kCentroid);
    const auto& edges = mesh.cell_edges(c);
    const double vol = mesh.cell_volume(c);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) t.emplace_back(edges[i], edges[j], vol * n[i].dot(n[j]));
    }
  }
  auto n = static_cast<Eigen::Index>(mesh.num_edges());
  return from_triplets(n, n, t);
}

}  // namespace plateau
