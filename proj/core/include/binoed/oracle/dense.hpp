#pragma once

#include <binoed/model/linear_map.hpp>
#include <binoed/model/noise.hpp>
#include <binoed/model/prior.hpp>
#include <binoed/types.hpp>

#include <functional>

namespace binoed {

// Dense reference problem. Everything here is built from explicit matrices
// and shares no kernels with the low-rank path.
struct DenseInstance {
  Matrix F;       // (m m_obs) x n raw forward matrix
  Vector sigma;   // noise standard deviations
  Matrix K;       // stiffness
  Vector mass;    // lumped mass diagonal
  Matrix C0;      // K^{-1} M K^{-1} M
  Matrix Fb;      // Gamma^{-1/2} F K^{-1} M^{1/2}
  Index m = 0;
  Index m_obs = 1;

  static constexpr Index kLimit = 500;
};

DenseInstance make_dense_instance(const Matrix& forward, const PriorModel& prior,
                                  const Vector& sigma, Index m, Index m_obs);

// Materializes the dense forward matrix of a map, then builds the instance.
DenseInstance make_dense_instance(const LinearMap& forward, const PriorModel& prior,
                                  const DiagonalNoise& noise, Index m, Index m_obs);

double dense_objective(const DenseInstance& inst, const Vector& w);
// Same trace through C0^{1/2} M^{-1/2} (Fb^T W Fb + I)^{-1} M^{1/2} C0^{1/2}.
double dense_objective_woodbury(const DenseInstance& inst, const Vector& w);
Vector dense_gradient(const DenseInstance& inst, const Vector& w);
Matrix dense_hessian(const DenseInstance& inst, const Vector& w);

struct DensePosterior {
  Vector mean;
  Matrix covariance;  // operator on R^n_M
};

// Literal Bayes formulas with the M-adjoint F* = M^{-1} F^T.
DensePosterior dense_posterior(const DenseInstance& inst, const Vector& w, const Vector& g,
                               const Vector& prior_mean);

// Misfit Hessian Fb^T W Fb + I (n x n).
Matrix dense_misfit_hessian(const DenseInstance& inst, const Vector& w);

}  // namespace binoed
