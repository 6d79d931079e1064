#include "plateau/admm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace plateau {

void AdmmParams::validate() const {
  auto require = [](bool ok, const char* name, const char* what) {
    if (!ok) throw std::invalid_argument(std::string(name) + ": " + what);
  };
  require(gamma_m > 0 && std::isfinite(gamma_m), "gamma-m", "must be positive");
  require(gamma_c > 0 && std::isfinite(gamma_c), "gamma-c", "must be positive");
  require(beta >= 0 && std::isfinite(beta), "beta", "must be nonnegative");
  require(obstacle_weight >= 0, "w-e", "must be nonnegative");
  require(density_floor >= 0, "eps", "must be nonnegative");
  require(!shift || std::isfinite(*shift), "d-gamma", "must be finite");
  require(iterations >= 0, "iters", "must be nonnegative");
  require(alpha >= 1 && alpha < 2, "alpha", "must lie in [1, 2)");
  require(tolerance >= 0, "tol", "must be nonnegative");
}

Gamma0Field build_u0(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape,
                     double shift) {
  const std::size_t nc = mesh.num_cells();
  std::vector<char> obstacle_node(mesh.num_nodes(), 0), layer_node(mesh.num_nodes(), 0);
  bool any_obstacle = false;
  for (std::size_t c = 0; c < nc; ++c) {
    if (labels.region[c] == Region::obstacle) {
      any_obstacle = true;
      for (int v : mesh.cells()[c]) obstacle_node[v] = 1;
    } else if (labels.region[c] == Region::layer) {
      for (int v : mesh.cells()[c]) layer_node[v] = 1;
    }
  }
  if (!any_obstacle) throw std::invalid_argument("build_u0: mesh has no obstacle cells");

  // Indicator of the H-facing side. The sign of grad . H equals that of nu . H
  // and is 0 at critical points of the level set, where nu is undefined.
  const Vec3& field = shape.field();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (std::size_t v = 0; v < mesh.num_nodes(); ++v) {
    if (!obstacle_node[v] || !layer_node[v]) continue;
    const Vec3 x = mesh.nodes()[v] - shift * field;
    g[v] = shape.gradient(x).dot(field) > 0 ? 1.0 : 0.0;
  }

  std::vector<char> keep(mesh.num_edges(), 0);
  for (std::size_t c = 0; c < nc; ++c) {
    if (labels.region[c] != Region::obstacle) continue;
    for (int e : mesh.cell_edges(c)) keep[e] = 1;
  }
  Gamma0Field out;
  out.u0 = discrete_gradient(mesh) * g;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    if (!keep[e]) out.u0[static_cast<Eigen::Index>(e)] = 0.0;
  }
  out.curl_u0 = cell_curl(mesh, out.u0);
  return out;
}

Vec3 prox_weighted_l1(const Vec3& pbar, double w, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("prox_weighted_l1: gamma must be positive");
  if (w < 0) throw std::invalid_argument("prox_weighted_l1: weight must be nonnegative");
  const double norm = pbar.norm();
  if (norm <= w) return Vec3::Zero();
  // (1/max(|pbar|/w, 1) - 1) = w/|pbar| - 1 in this branch, and -1 when w = 0.
  return ((w / norm - 1.0) / gamma) * pbar;
}

AdmmOperators build_operators(const TetMesh& mesh, double gamma_m, double gamma_c, MassKind mass,
                              SolverKind solver) {
  if (!(gamma_m > 0) || !(gamma_c > 0)) {
    throw std::invalid_argument("build_operators: step sizes must be positive");
  }
  AdmmOperators ops;
  CellOperators cell = assemble_mixed(mesh);
  ops.pi = std::move(cell.centroid_value);
  ops.curl = std::move(cell.cell_curl);
  ops.weight.resize(3 * static_cast<Eigen::Index>(mesh.num_cells()));
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    ops.weight.segment<3>(3 * static_cast<Eigen::Index>(c)).setConstant(mesh.cell_volume(c));
  }
  const SparseMatrix m =
      mass == MassKind::full ? assemble_mass_ned(mesh) : assemble_centroid_mass(mesh);
  ops.system = gamma_c * assemble_curlcurl(mesh) + gamma_m * m;
  ops.factorization = Factorization::factorize(ops.system, solver);
  ops.gamma_m = gamma_m;
  ops.gamma_c = gamma_c;
  ops.mass = mass;
  return ops;
}

AdmmState initial_state(const TetMesh& mesh) {
  const auto ne = static_cast<Eigen::Index>(mesh.num_edges());
  const auto nv = 3 * static_cast<Eigen::Index>(mesh.num_cells());
  AdmmState s;
  s.u = Eigen::VectorXd::Zero(ne);
  s.p = Eigen::VectorXd::Zero(nv);
  s.q = Eigen::VectorXd::Zero(nv);
  s.lambda = Eigen::VectorXd::Zero(nv);
  s.mu = Eigen::VectorXd::Zero(nv);
  return s;
}

Eigen::VectorXd solve_u_step(const AdmmState& state, const Gamma0Field& gamma0,
                             const AdmmOperators& ops) {
  const Eigen::VectorXd rhs_p = ops.weight.cwiseProduct(state.mu + ops.gamma_m * state.p);
  const Eigen::VectorXd rhs_q =
      ops.weight.cwiseProduct(state.lambda + ops.gamma_c * (state.q - gamma0.curl_u0));
  const Eigen::VectorXd rhs = ops.pi.transpose() * rhs_p + ops.curl.transpose() * rhs_q;
  if (state.u.size() != rhs.size()) return ops.factorization.solve(rhs);
  return ops.factorization.solve(rhs, state.u);
}

double discrete_energy(const TetMesh& mesh, const RegionLabels& labels, const Eigen::VectorXd& p,
                       const Eigen::VectorXd& q, double beta) {
  double e = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (labels.region[c] == Region::obstacle) continue;
    const auto i = 3 * static_cast<Eigen::Index>(c);
    e += mesh.cell_volume(c) *
         (labels.p_max[c] * p.segment<3>(i).norm() + beta * q.segment<3>(i).norm());
  }
  return e;
}

namespace {

double weighted_norm(const Eigen::VectorXd& weight, const Eigen::VectorXd& v) {
  return std::sqrt(weight.dot(v.cwiseAbs2()));
}

void prox_all(Eigen::VectorXd& out, const Eigen::VectorXd& pbar, const std::vector<double>& w,
              double gamma) {
  const auto n = static_cast<Eigen::Index>(w.size());
  for (Eigen::Index c = 0; c < n; ++c) {
    out.segment<3>(3 * c) = prox_weighted_l1(pbar.segment<3>(3 * c), w[c], gamma);
  }
}

}  // namespace

RunResult admm_run(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape,
                   const AdmmParams& params, const AdmmOperators* ops,
                   const ProgressCallback& progress) {
  params.validate();
  if (labels.region.size() != mesh.num_cells()) {
    throw std::invalid_argument("admm_run: labels do not match the mesh");
  }
  std::optional<AdmmOperators> owned;
  if (!ops) {
    owned = build_operators(mesh, params.gamma_m, params.gamma_c, params.mass, params.solver);
    ops = &*owned;
  }

  RunResult result;
  result.shift = params.shift.value_or(layer_cell_size(mesh, labels));
  result.gamma0 = build_u0(mesh, labels, shape, result.shift);
  const Eigen::VectorXd& c0 = result.gamma0.curl_u0;
  AdmmState& s = result.state;
  s = initial_state(mesh);

  const double gm = ops->gamma_m, gc = ops->gamma_c, a = params.alpha;
  Eigen::VectorXd pi_u, curl_u, hp, hq, pbar(s.p.size());
  for (int it = 1; it <= params.iterations; ++it) {
    s.u = solve_u_step(s, result.gamma0, *ops);
    pi_u = ops->pi * s.u;
    curl_u = ops->curl * s.u + c0;
    hp = a * pi_u + (1.0 - a) * s.p;
    hq = a * curl_u + (1.0 - a) * s.q;

    pbar = s.lambda - gc * hq;
    prox_all(s.q, pbar, labels.q_max, gc);
    pbar = s.mu - gm * hp;
    prox_all(s.p, pbar, labels.p_max, gm);

    s.lambda += gc * (s.q - hq);
    s.mu += gm * (s.p - hp);

    s.iteration = it;
    const double energy = discrete_energy(mesh, labels, s.p, s.q, params.beta);
    const double rp = weighted_norm(ops->weight, s.p - pi_u);
    const double rq = weighted_norm(ops->weight, s.q - curl_u);
    s.energy_history.push_back(energy);
    s.rp_history.push_back(rp);
    s.rq_history.push_back(rq);
    if (progress) progress(s);
    if (!std::isfinite(energy) || !std::isfinite(rp) || !std::isfinite(rq)) {
      throw DivergenceError("non-finite iterate", it);
    }
    if (params.tolerance > 0 && std::max(rp, rq) < params.tolerance) break;
  }

  result.iterations = s.iteration;
  result.energy = discrete_energy(mesh, labels, s.p, s.q, params.beta);
  result.r_p = s.rp_history.empty() ? 0.0 : s.rp_history.back();
  result.r_q = s.rq_history.empty() ? 0.0 : s.rq_history.back();
  result.c_m = compute_c_m(mesh, labels, shape);
  return result;
}

double compute_c_m(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape) {
  // |T| / delta with a per-cell thickness delta_T = |T| / A_T is the patch area A_T.
  const auto areas = layer_patch_areas(mesh, labels, shape);
  double integral = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (areas[c] == 0.0) continue;
    integral += areas[c] * (1.0 - std::abs(shape.normal(mesh.cell_centroid(c)).dot(shape.field())));
  }
  return 0.5 * integral;
}

Diagnostics diagnostics(const TetMesh& mesh, const RegionLabels& labels, const Shape& shape,
                        const Eigen::VectorXd& p, const Eigen::VectorXd& q, double threshold) {
  Diagnostics d;
  const std::size_t nc = mesh.num_cells();
  const Vec3& field = shape.field();
  const double center = shape.center().dot(field);
  double plus_side = 0.0;
  std::vector<double> line_mass(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto i = 3 * static_cast<Eigen::Index>(c);
    const double vol = mesh.cell_volume(c);
    const double m = vol * p.segment<3>(i).norm();
    switch (labels.region[c]) {
      case Region::obstacle: d.obstacle_mass += m; break;
      case Region::layer: d.layer_mass += m; break;
      case Region::exterior: d.exterior_mass += m; break;
    }
    if (mesh.cell_centroid(c).dot(field) > center) plus_side += m;
    line_mass[c] = vol * q.segment<3>(i).norm();
  }
  const double total = d.obstacle_mass + d.layer_mass + d.exterior_mass;
  d.side_fraction = total > 0 ? plus_side / total : 0.0;

  const double max_mass = nc ? *std::max_element(line_mass.begin(), line_mass.end()) : 0.0;
  std::vector<char> strong(nc, 0);
  for (std::size_t c = 0; c < nc; ++c) {
    strong[c] = line_mass[c] > threshold * max_mass && line_mass[c] > 0;
  }
  std::vector<char> seen(nc, 0);
  std::vector<int> stack;
  for (std::size_t c = 0; c < nc; ++c) {
    if (!strong[c] || seen[c]) continue;
    ++d.component_count;
    seen[c] = 1;
    stack.assign(1, static_cast<int>(c));
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int nb : mesh.facet_neighbors(static_cast<std::size_t>(cur))) {
        if (strong[nb] && !seen[nb]) {
          seen[nb] = 1;
          stack.push_back(nb);
        }
      }
    }
  }
  return d;
}

}  // namespace plateau
