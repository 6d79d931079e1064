#pragma once

#include <cmath>
#include <filesystem>
#include <random>

#include <Eigen/Dense>

#include "plateau/mesh.hpp"

namespace plateau::test {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(PLATEAU_TEST_DATA_DIR) / name;
}

inline TetMesh single_tet() {
  return TetMesh::from_cells({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)},
                             {{0, 1, 2, 3}});
}

inline TetMesh unit_cube() { return build_box_mesh({1, 1, 1}, Vec3(0, 0, 0), Vec3(1, 1, 1)); }

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

/// Numeric rank via column-pivoted QR of a dense copy.
template <typename Matrix>
Eigen::Index dense_rank(const Matrix& m, double tol = 1e-9) {
  Eigen::MatrixXd d(m);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d);
  qr.setThreshold(tol);
  return qr.rank();
}

}  // namespace plateau::test
