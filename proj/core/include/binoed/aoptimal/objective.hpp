#pragma once

#include <binoed/lowrank/qr.hpp>
#include <binoed/model/noise.hpp>
#include <binoed/model/prior.hpp>
#include <binoed/optimality/certificate.hpp>
#include <binoed/types.hpp>

#include <Eigen/Cholesky>

#include <optional>

namespace binoed {

// A-optimal objective J(w) = tr C0 - tr Chat + tr(L_w^{-1} Chat) with
// L_w = R diag_expand(w) R^T + I, frozen from a thin QR of Fb^T.
class LowRankObjective {
 public:
  static constexpr Index kDefaultDenseLimit = 1000;

  LowRankObjective(Matrix r, Matrix chat, double trace_c0, Index m, Index m_obs);

  static LowRankObjective assemble(const QRModel& qr, const PriorModel& prior);

  const Matrix& R() const { return r_; }
  const Matrix& chat() const { return chat_; }
  const Matrix& chat_half() const { return chat_half_; }  // chat = chat_half^T chat_half
  double trace_C0() const { return trace_c0_; }
  double trace_chat() const { return trace_chat_; }
  Index m() const { return m_; }
  Index m_obs() const { return m_obs_; }
  Index rank() const { return r_.rows(); }
  double chat_norm() const { return chat_norm_; }

  // w (size m) replicated across the m_obs blocks, block-major.
  Vector expand(const Vector& w) const;
  // Sum of each m-th entry across blocks: size m*m_obs -> m.
  Vector collapse(const Vector& full) const;

  double objective(const Vector& w) const;
  Vector gradient(const Vector& w) const;
  Matrix hessian(const Vector& w, Index dense_limit = kDefaultDenseLimit) const;
  Vector hessian_matvec(const Vector& w, const Vector& v) const;

  // Objective over the remaining indices with w = 1 on ones and w = 0 on
  // zeros; the fixed ones are absorbed into L_w and the result recompressed.
  LowRankObjective restrict(const IndexList& ones, const IndexList& zeros) const;

 private:
  Matrix r_;
  Matrix chat_;
  Matrix chat_half_;
  double trace_c0_;
  double trace_chat_;
  double chat_norm_;
  Index m_;
  Index m_obs_;
};

// Per-design factorization of L_w, reused across evaluations at that design.
class Workspace {
 public:
  Workspace(const LowRankObjective& obj, const Vector& w);

  const Vector& design() const { return w_; }
  double objective();
  Vector gradient();
  Vector hessian_matvec(const Vector& v);
  Matrix hessian(Index dense_limit = LowRankObjective::kDefaultDenseLimit);

  // L_w^{-1} R, computed on first use and cached.
  const Matrix& linv_r();
  bool has_linv_r() const { return linv_r_.has_value(); }
  Vector linv_eigenvalues() const;
  const Eigen::LLT<Matrix>& factor() const { return llt_; }

 private:
  const Matrix& linv_chalf_t();

  const LowRankObjective* obj_;
  Vector w_;
  Vector wexp_;
  Eigen::LLT<Matrix> llt_;
  std::optional<Matrix> linv_chalf_t_;
  std::optional<Matrix> linv_r_;
};

// L = 2 l^2 |Chat| |R R^T|^2 (or the uncorrected l^2 |Chat| |R R^T|^2), scaled
// by sqrt(m0), sqrt(m - m0), sqrt(2 m0).
LipschitzConstants lipschitz_constants(const LowRankObjective& obj, Index m0,
                                       bool uncorrected_constant = false);

// Posterior mean for data g (size m*m_obs) under design w.
Vector posterior_mean(const LowRankObjective& obj, const QRModel& qr, const PriorModel& prior,
                      const DiagonalNoise& noise, const Vector& w, const Vector& g,
                      const Vector& prior_mean);

// diag(C_post(w) M^{-1}); sum_i var_i * mass_i = J(w).
Vector posterior_pointwise_variance(const LowRankObjective& obj, const QRModel& qr,
                                    const PriorModel& prior, const Vector& w,
                                    Index limit = PriorModel::kExactTraceLimit);

}  // namespace binoed
