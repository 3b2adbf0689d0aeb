#include <binoed/model/prior.hpp>

#include <Eigen/SparseCholesky>

namespace binoed {

struct PriorModel::Factor {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
};

PriorModel::PriorModel(SparseMatrix stiffness, Vector mass_diag, double alpha, double beta)
    : mass_(std::move(mass_diag)), alpha_(alpha), beta_(beta) {
  const Index n = mass_.size();
  if (stiffness.rows() != n || stiffness.cols() != n) {
    throw ConfigError("PriorModel: stiffness is " + std::to_string(stiffness.rows()) + "x" +
                      std::to_string(stiffness.cols()) + " but mass has size " +
                      std::to_string(n));
  }
  if (n == 0) throw ConfigError("PriorModel: empty discretization");
  if ((mass_.array() <= 0.0).any()) throw ConfigError("PriorModel: mass_diag must be positive");
  if (n > kExactTraceLimit) {
    throw LimitExceeded("PriorModel: n = " + std::to_string(n) +
                        " exceeds the exact-trace limit " + std::to_string(kExactTraceLimit));
  }
  stiffness.makeCompressed();
  stiffness_ = std::make_shared<const SparseMatrix>(std::move(stiffness));
  auto factor = std::make_shared<Factor>();
  factor->ldlt.compute(*stiffness_);
  if (factor->ldlt.info() != Eigen::Success || (factor->ldlt.vectorD().array() <= 0.0).any()) {
    throw NumericalError("PriorModel: stiffness is not symmetric positive definite");
  }
  factor_ = factor;
  Matrix g = whitened_sqrt_dense();
  trace_c0_ = g.squaredNorm();
}

PriorModel PriorModel::identity(Index n) {
  SparseMatrix k(n, n);
  k.setIdentity();
  return PriorModel(std::move(k), Vector::Ones(n));
}

Vector PriorModel::stiffness_solve(const Vector& x) const {
  if (x.size() != n()) throw ConfigError("PriorModel: vector size mismatch");
  return factor_->ldlt.solve(x);
}

Matrix PriorModel::stiffness_solve(const Matrix& x) const {
  if (x.rows() != n()) throw ConfigError("PriorModel: matrix row count mismatch");
  return factor_->ldlt.solve(x);
}

Vector PriorModel::sqrt_apply(const Vector& x) const {
  return stiffness_solve(Vector(mass_.cwiseProduct(x)));
}

Vector PriorModel::sqrt_adjoint_apply(const Vector& x) const {
  return mass_.cwiseProduct(stiffness_solve(x));
}

Vector PriorModel::sqrt_inverse_apply(const Vector& x) const {
  if (x.size() != n()) throw ConfigError("PriorModel: vector size mismatch");
  return Vector(*stiffness_ * x).cwiseQuotient(mass_);
}

Vector PriorModel::covariance_apply(const Vector& x) const { return sqrt_apply(sqrt_apply(x)); }

Vector PriorModel::whitened_covariance_apply(const Vector& x) const {
  Vector sq = mass_.cwiseSqrt();
  return sq.cwiseProduct(covariance_apply(Vector(x.cwiseQuotient(sq))));
}

Matrix PriorModel::whitened_sqrt_dense() const {
  Vector sq = mass_.cwiseSqrt();
  Matrix rhs = sq.asDiagonal();
  Matrix g = sq.asDiagonal() * stiffness_solve(rhs);
  return 0.5 * (g + g.transpose());
}

Vector PriorModel::pointwise_variance() const {
  Matrix g = whitened_sqrt_dense();
  return g.colwise().squaredNorm().transpose().cwiseQuotient(mass_);
}

}  // namespace binoed
