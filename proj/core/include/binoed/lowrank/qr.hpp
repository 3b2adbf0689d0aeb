#pragma once

#include <binoed/model/linear_map.hpp>
#include <binoed/types.hpp>

#include <string>

namespace binoed {

// Frozen thin factorization Fb^T ~= Q R with Q column-orthonormal.
struct QRModel {
  Matrix Q;  // n x l
  Matrix R;  // l x (m * m_obs)
  double residual_estimate = 0.0;
  Index m = 0;
  Index m_obs = 1;
  std::uint64_t seed = 0;
  int subspace_iterations = 0;
  double drop_tol = 0.0;
  bool exact = false;
  std::vector<std::string> warnings;

  Index rank() const { return Q.cols(); }
  Index n() const { return Q.rows(); }
  Index columns() const { return R.cols(); }

  // Sets the sensor layout; columns() must equal m * m_obs.
  void set_layout(Index sensors, Index observations);
};

struct RandomizedQROptions {
  Index rank = 1;
  int subspace_iterations = 2;
  double drop_tol = 1e-6;
  std::uint64_t seed = 0;
  int residual_probes = 8;
};

// Randomized subspace iteration for A = Fb^T given as a map R^{m m_obs} -> R^n.
QRModel randomized_qr(const LinearMap& a, const RandomizedQROptions& opts);

// Full-accuracy thin QR with column pivoting; numerical rank at rank_tol relative.
QRModel exact_qr(const Matrix& a, double rank_tol = 1e-12);

// [Q_1 R_1, ..., Q_K R_K] recompressed to a single thin factorization.
QRModel block_concat(const std::vector<QRModel>& blocks, double rank_tol = 1e-12);

// Relative Frobenius residual of Q R against a dense reference.
double qr_residual(const QRModel& model, const Matrix& reference);

}  // namespace binoed
