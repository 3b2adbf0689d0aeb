#pragma once

#include <binoed/types.hpp>

#include <memory>

namespace binoed {

// Gaussian prior with covariance C0 = K^{-1} M K^{-1} M on R^n_M.
// K is the (sparse, SPD) stiffness of alpha*(-Laplace) + I with a Robin
// boundary term; M is a lumped (diagonal) mass matrix.
class PriorModel {
 public:
  static constexpr Index kExactTraceLimit = 5000;

  PriorModel(SparseMatrix stiffness, Vector mass_diag, double alpha = 0.0,
             double beta = 0.0);

  // K = M = I.
  static PriorModel identity(Index n);

  Index n() const { return mass_.size(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const Vector& mass_diag() const { return mass_; }
  const SparseMatrix& stiffness() const { return *stiffness_; }
  double trace_C0() const { return trace_c0_; }

  Vector stiffness_solve(const Vector& x) const;          // K^{-1} x
  Vector sqrt_apply(const Vector& x) const;               // C0^{1/2} x = K^{-1} M x
  Vector sqrt_adjoint_apply(const Vector& x) const;       // M K^{-1} x
  Vector sqrt_inverse_apply(const Vector& x) const;       // C0^{-1/2} x = M^{-1} K x
  Vector covariance_apply(const Vector& x) const;         // C0 x
  Vector whitened_covariance_apply(const Vector& x) const;  // M^{1/2} C0 M^{-1/2} x

  Matrix stiffness_solve(const Matrix& x) const;

  // G = M^{1/2} K^{-1} M^{1/2}; G^2 = M^{1/2} C0 M^{-1/2}. Dense, n <= limit.
  Matrix whitened_sqrt_dense() const;

  // diag(C0 M^{-1}), the prior pointwise variance field.
  Vector pointwise_variance() const;

 private:
  struct Factor;
  std::shared_ptr<const SparseMatrix> stiffness_;
  std::shared_ptr<const Factor> factor_;
  Vector mass_;
  double alpha_;
  double beta_;
  double trace_c0_ = 0.0;
};

}  // namespace binoed
