#include "plateau/linsolve.hpp"

#include <mutex>
#include <random>

#include <Eigen/SparseCholesky>

#ifdef PLATEAU_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

namespace plateau {

namespace {

constexpr double kPivotTolerance = 1e-14;
constexpr double kCgTolerance = 1e-10;
// A direct solve whose residual exceeds this on a probe vector is rejected.
constexpr double kProbeTolerance = 1e-10;

#ifdef PLATEAU_HAVE_CHOLMOD
// Exposes the CHOLMOD factor so the pivot ratio can be checked.
template <typename Base>
class CholmodWithRcond : public Base {
 public:
  // Indefinite input is reported through SingularMatrixError; keep CHOLMOD quiet.
  CholmodWithRcond() { this->cholmod().print = 0; }
  double rcond() {
    if (!this->m_cholmodFactor) return 0.0;
    return cholmod_rcond(this->m_cholmodFactor, &this->cholmod());
  }
};
using Supernodal = CholmodWithRcond<Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower>>;
using Simplicial = CholmodWithRcond<Eigen::CholmodSimplicialLDLT<SparseMatrix, Eigen::Lower>>;
#endif

using EigenLdlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

Eigen::VectorXd jacobi_cg(const SparseMatrix& a, const Eigen::VectorXd& inv_diag,
                          const Eigen::VectorXd& b, Eigen::VectorXd x) {
  const double b_norm = b.norm();
  if (b_norm == 0.0) return Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b - a * x;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const Eigen::Index max_iter = 10 * a.rows() + 100;
  for (Eigen::Index it = 0; it < max_iter; ++it) {
    if (r.norm() <= kCgTolerance * b_norm) return x;
    Eigen::VectorXd ap = a * p;
    double alpha = rz / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    z = inv_diag.cwiseProduct(r);
    double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  if (r.norm() <= kCgTolerance * b_norm) return x;
  throw SolverError("conjugate gradient did not converge");
}

double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  return (a * x - b).norm() / b.norm();
}

}  // namespace

struct Factorization::Impl {
  enum class Backend { supernodal, simplicial, eigen_ldlt, cg };
  Backend backend = Backend::cg;
#ifdef PLATEAU_HAVE_CHOLMOD
  // CHOLMOD keeps workspace in its common struct, so solves are serialized.
  mutable std::mutex mutex;
  mutable Supernodal supernodal;
  mutable Simplicial simplicial;
#endif
  EigenLdlt ldlt;
  double pivot_ratio = 0.0;
  SparseMatrix matrix;
  Eigen::VectorXd inv_diag;

  Eigen::VectorXd direct_solve(const Eigen::VectorXd& b) const {
    switch (backend) {
#ifdef PLATEAU_HAVE_CHOLMOD
      case Backend::supernodal: {
        std::lock_guard lock(mutex);
        return supernodal.solve(b);
      }
      case Backend::simplicial: {
        std::lock_guard lock(mutex);
        return simplicial.solve(b);
      }
#endif
      default:
        return ldlt.solve(b);
    }
  }

  bool probe_ok(const SparseMatrix& a) const {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd b(a.rows());
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = dist(rng);
    Eigen::VectorXd x = direct_solve(b);
    return x.allFinite() && relative_residual(a, x, b) <= kProbeTolerance;
  }
};

Factorization Factorization::factorize(const SparseMatrix& a, SolverKind kind) {
  if (a.rows() != a.cols()) throw std::invalid_argument("factorize: matrix is not square");
  auto impl = std::make_shared<Impl>();
  const Eigen::VectorXd diag = a.diagonal();
  const double max_diag = diag.size() ? diag.cwiseAbs().maxCoeff() : 0.0;
  if (diag.size() && !(diag.minCoeff() > kPivotTolerance * max_diag)) {
    throw SingularMatrixError("factorize: nonpositive or tiny diagonal entry");
  }

  using Backend = Impl::Backend;
  if (kind == SolverKind::cholesky && a.rows() > 0) {
    bool done = false;
#ifdef PLATEAU_HAVE_CHOLMOD
    // For LL^T rcond is the squared pivot ratio; for LDL^T it is the D ratio.
    impl->supernodal.compute(a);
    if (impl->supernodal.info() == Eigen::Success) {
      if (impl->supernodal.rcond() <= kPivotTolerance) {
        throw SingularMatrixError("factorize: pivot below tolerance (matrix numerically singular)");
      }
      impl->backend = Backend::supernodal;
      impl->pivot_ratio = impl->supernodal.rcond();
      done = impl->probe_ok(a);
    }
    if (!done) {
      // The supernodal path depends on the BLAS; fall back when it misbehaves.
      impl->simplicial.compute(a);
      if (impl->simplicial.info() != Eigen::Success) {
        throw SingularMatrixError("factorize: matrix is not positive definite");
      }
      if (impl->simplicial.rcond() <= kPivotTolerance) {
        throw SingularMatrixError("factorize: pivot below tolerance (matrix numerically singular)");
      }
      impl->backend = Backend::simplicial;
      impl->pivot_ratio = impl->simplicial.rcond();
      done = true;
    }
#endif
    if (!done) {
      impl->ldlt.compute(a);
      if (impl->ldlt.info() != Eigen::Success) {
        throw SingularMatrixError("factorize: symbolic or numeric factorization failed");
      }
      const Eigen::VectorXd& pivots = impl->ldlt.vectorD();
      if (!(pivots.minCoeff() > kPivotTolerance * max_diag)) {
        throw SingularMatrixError("factorize: pivot below tolerance (matrix numerically singular)");
      }
      impl->backend = Backend::eigen_ldlt;
      impl->pivot_ratio = pivots.minCoeff() / pivots.maxCoeff();
    }
  } else if (kind == SolverKind::conjugate_gradient) {
    impl->matrix = a;
    impl->inv_diag = diag.cwiseInverse();
  }

  Factorization f;
  f.impl_ = std::move(impl);
  f.size_ = a.rows();
  f.kind_ = kind;
  return f;
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b) const {
  return solve(b, Eigen::VectorXd::Zero(b.size()));
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b, const Eigen::VectorXd& guess) const {
  if (b.size() != size_) throw std::invalid_argument("solve: dimension mismatch");
  if (size_ == 0) return Eigen::VectorXd();
  if (kind_ == SolverKind::cholesky) {
    Eigen::VectorXd x = impl_->direct_solve(b);
    if (!x.allFinite()) throw SolverError("solve: non-finite solution");
    return x;
  }
  if (guess.size() != size_) throw std::invalid_argument("solve: guess dimension mismatch");
  return jacobi_cg(impl_->matrix, impl_->inv_diag, b, guess);
}

double Factorization::pivot_ratio() const { return impl_ ? impl_->pivot_ratio : 0.0; }

std::string Factorization::backend_name() const {
  if (!impl_) return "none";
  switch (impl_->backend) {
    case Impl::Backend::supernodal: return "cholmod-supernodal";
    case Impl::Backend::simplicial: return "cholmod-simplicial";
    case Impl::Backend::eigen_ldlt: return "eigen-ldlt";
    case Impl::Backend::cg: return "jacobi-cg";
  }
  return "none";
}

}  // namespace plateau
