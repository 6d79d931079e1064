#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "plateau/mesh.hpp"

namespace plateau {

using SparseMatrix = Eigen::SparseMatrix<double>;

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowest-order spaces of the discrete de Rham complex, plus vector P0.
enum class SpaceKind { p1, ned, rt, p0, p0_vec };

/// Cell-local to global degree-of-freedom map with orientation signs.
struct DofMap {
  SpaceKind kind = SpaceKind::p1;
  std::size_t num_dofs = 0;
  int local_count = 0;
  std::vector<int> indices;  // num_cells * local_count
  std::vector<int8_t> signs;

  int index(std::size_t cell, int local) const { return indices[cell * local_count + local]; }
  int sign(std::size_t cell, int local) const { return signs[cell * local_count + local]; }
};

DofMap build_dof_map(const TetMesh& mesh, SpaceKind kind);

// Fields are plain coefficient vectors. P0^3 fields are laid out cell-major:
// entry 3*c + k is component k on cell c.

/// Incidence matrix NED x P1: row (a, b) has -1 at a and +1 at b.
SparseMatrix discrete_gradient(const TetMesh& mesh);

/// Incidence matrix RT x NED: for facet (a, b, c) the entries are +1 on
/// edges (a, b) and (b, c), -1 on (a, c).
SparseMatrix discrete_curl(const TetMesh& mesh);

/// Symmetric part check: max |A - A^T| <= tol * max |A|.
bool is_symmetric(const SparseMatrix& a, double tol = 1e-12);

/// Degree-2 four-point rule on the reference tetrahedron (barycentric
/// coordinates), weights sum to one.
struct TetQuadrature {
  std::array<std::array<double, 4>, 4> points;
  std::array<double, 4> weights;
};
const TetQuadrature& tet_quadrature();

/// Globally signed Whitney basis functions of cell c at barycentric point l.
std::array<Vec3, 6> ned_basis(const TetMesh& mesh, std::size_t c, const std::array<double, 4>& bary);
/// Globally signed curls of the Whitney basis functions of cell c.
std::array<Vec3, 6> ned_basis_curls(const TetMesh& mesh, std::size_t c);

/// Value of a NED field at a point of cell c.
Vec3 evaluate_ned(const TetMesh& mesh, const Eigen::VectorXd& u, std::size_t c,
                  const std::array<double, 4>& bary);

using VectorFunction = std::function<Vec3(const Vec3&)>;

/// Edge integrals of f . t_e (two-point Gauss rule per edge).
Eigen::VectorXd interpolate_ned(const TetMesh& mesh, const VectorFunction& f);

/// Facet fluxes of f through the oriented facets (three-point rule per facet).
Eigen::VectorXd interpolate_rt(const TetMesh& mesh, const VectorFunction& f);

/// Nodal interpolation into P1.
Eigen::VectorXd interpolate_p1(const TetMesh& mesh, const std::function<double(const Vec3&)>& f);

/// Operators taking NED coefficients to P0^3 cell values.
struct CellOperators {
  SparseMatrix centroid_value;  // u(c_T), equal to the cell average of u
  SparseMatrix cell_curl;       // curl(u) on T (constant)
};

/// The couplings <P0^3, NED> and <P0^3, curl NED> reduce to these operators
/// weighted by cell volumes: <p, v> = sum_T |T| p_T . v(c_T).
CellOperators assemble_mixed(const TetMesh& mesh);

/// Per-cell averages of a NED field.
Eigen::VectorXd project_p0(const TetMesh& mesh, const Eigen::VectorXd& u);
/// Per-cell curl of a NED field.
Eigen::VectorXd cell_curl(const TetMesh& mesh, const Eigen::VectorXd& u);

/// Full NED mass matrix <u, v>.
SparseMatrix assemble_mass_ned(const TetMesh& mesh);
/// Curl-curl matrix <curl u, curl v>.
SparseMatrix assemble_curlcurl(const TetMesh& mesh);
/// Mass of the centroid values: sum_T |T| u(c_T) . v(c_T). Together with the
/// curl-curl matrix this is positive definite on NED.
SparseMatrix assemble_centroid_mass(const TetMesh& mesh);

}  // namespace plateau
