#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "plateau/fespace.hpp"
#include "plateau/linsolve.hpp"
#include "plateau/mesh.hpp"
#include "plateau/regions.hpp"
#include "plateau/shape.hpp"

namespace plateau {

/// Raised when the iteration produces non-finite values.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : std::runtime_error(what + " at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Mass term of the u-step system.
enum class MassKind {
  full,      // NED mass matrix <u, v>
  centroid,  // sum_T |T| u(c_T) . v(c_T), the exact augmented-Lagrangian term
};

struct AdmmParams {
  double gamma_m = 1.0;
  double gamma_c = 1.0;
  double beta = 1.0;
  double obstacle_weight = 1e5;  // w_E
  double density_floor = 1e-6;   // epsilon
  /// Shift of the u0 construction along H; defaults to the layer cell size.
  std::optional<double> shift;
  int iterations = 2000;
  double alpha = 1.6;      // over-relaxation, 1 disables
  double tolerance = 0.0;  // stop once max(r_p, r_q) drops below; 0 disables
  MassKind mass = MassKind::full;
  SolverKind solver = SolverKind::cholesky;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  RegionParams region_params() const { return {obstacle_weight, density_floor, beta}; }
};

/// Boundary datum: u0 lives on obstacle edges, its curl marks the curve
/// {nu . H = 0} on the surface.
struct Gamma0Field {
  Eigen::VectorXd u0;       // NED
  Eigen::VectorXd curl_u0;  // P0^3
};

/// u0 = grad g masked to edges of obstacle cells, where g is the indicator of
/// {nu(x - shift * H) . H > 0} on the obstacle nodes next to the layer.
/// Throws std::invalid_argument if there are no obstacle cells.
Gamma0Field build_u0(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape,
                     double shift);

/// argmin_q  w|q| + lambda . q + (gamma/2)|q - c|^2  with pbar = lambda - gamma c:
///   (1/gamma) (1 / max(|pbar|/w, 1) - 1) pbar.
/// Throws std::invalid_argument if gamma <= 0 or w < 0.
Vec3 prox_weighted_l1(const Vec3& pbar, double w, double gamma);

/// Mesh operators shared by every run with the same (mesh, gamma_m, gamma_c).
struct AdmmOperators {
  SparseMatrix pi;         // NED -> P0^3 centroid values
  SparseMatrix curl;       // NED -> P0^3 cell curls
  Eigen::VectorXd weight;  // |T| per P0^3 entry
  SparseMatrix system;     // gamma_c K + gamma_m M
  Factorization factorization;
  double gamma_m = 1.0;
  double gamma_c = 1.0;
  MassKind mass = MassKind::full;
};

AdmmOperators build_operators(const TetMesh& mesh, double gamma_m, double gamma_c,
                              MassKind mass = MassKind::full,
                              SolverKind solver = SolverKind::cholesky);

struct AdmmState {
  Eigen::VectorXd u;       // NED
  Eigen::VectorXd p, q;    // P0^3
  Eigen::VectorXd lambda;  // multiplier of q = curl u + curl u0
  Eigen::VectorXd mu;      // multiplier of p = Pi u
  int iteration = 0;
  std::vector<double> energy_history;
  std::vector<double> rp_history;
  std::vector<double> rq_history;
};

AdmmState initial_state(const TetMesh& mesh);

/// Minimizer over u of
///   -<mu, Pi u> + gamma_m/2 |p - Pi u|^2 - <lambda, curl u> + gamma_c/2 |q - curl u - curl u0|^2
/// with the mass term replaced by the NED mass when operators.mass is full.
Eigen::VectorXd solve_u_step(const AdmmState& state, const Gamma0Field& gamma0,
                             const AdmmOperators& ops);

/// sum over non-obstacle cells of |T| (p_max |p_T| + beta |q_T|).
double discrete_energy(const TetMesh& mesh, const RegionLabels& labels, const Eigen::VectorXd& p,
                       const Eigen::VectorXd& q, double beta);

struct RunResult {
  AdmmState state;
  Gamma0Field gamma0;
  double energy = 0.0;
  double c_m = 0.0;
  double r_p = 0.0;
  double r_q = 0.0;
  double shift = 0.0;
  int iterations = 0;
};

using ProgressCallback = std::function<void(const AdmmState&)>;

/// Runs the ADMM loop. `labels` must carry the weights for params.beta and the
/// shape's field direction. If `ops` is null the operators are built here.
/// The callback, if set, sees the state after every iteration.
RunResult admm_run(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape,
                   const AdmmParams& params, const AdmmOperators* ops = nullptr,
                   const ProgressCallback& progress = {});

/// Orientation constant (1/2) sum_layer |T| / delta_T (1 - |nu(c_T) . H|) with
/// the local layer thickness delta_T = |T| / A_T, A_T the area of the
/// reconstructed surface patch in T.
double compute_c_m(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape);

struct Diagnostics {
  double obstacle_mass = 0.0;  // sum |T| |p_T| per region
  double layer_mass = 0.0;
  double exterior_mass = 0.0;
  int component_count = 0;     // facet-connected clusters of strong q cells
  double side_fraction = 0.0;  // share of p mass at centroids with (x - center) . H > 0
};

/// Cells with |T||q_T| > threshold * max count toward component_count.
Diagnostics diagnostics(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape,
                        const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                        double threshold = 0.1);

}  // namespace plateau
