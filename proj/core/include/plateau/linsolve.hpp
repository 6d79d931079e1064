#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "plateau/fespace.hpp"

namespace plateau {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolverKind {
  cholesky,            // sparse Cholesky (CHOLMOD when available), factorized once
  conjugate_gradient,  // Jacobi-preconditioned CG, relative tolerance 1e-10
};

/// Factorize-once / solve-many handle for a sparse SPD matrix.
///
/// Immutable after construction; solve() may be called concurrently.
class Factorization {
 public:
  /// Throws std::invalid_argument for non-square input and
  /// SingularMatrixError if a pivot falls below 1e-14 * max diagonal.
  static Factorization factorize(const SparseMatrix& a, SolverKind kind = SolverKind::cholesky);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Same as solve(); the iterative backend starts from `guess`.
  Eigen::VectorXd solve(const Eigen::VectorXd& b, const Eigen::VectorXd& guess) const;

  Eigen::Index size() const { return size_; }
  /// Smallest over largest pivot of the LDL^T factor (CHOLMOD's rcond
  /// estimate); 0 for the iterative backend.
  double pivot_ratio() const;
  /// Which backend holds the factors, e.g. "cholmod-supernodal".
  std::string backend_name() const;
  SolverKind kind() const { return kind_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  Eigen::Index size_ = 0;
  SolverKind kind_ = SolverKind::cholesky;
};

}  // namespace plateau
