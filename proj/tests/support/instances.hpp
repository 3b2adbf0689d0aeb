#pragma once

#include <binoed/aoptimal/objective.hpp>
#include <binoed/lowrank/qr.hpp>
#include <binoed/model/preconditioned.hpp>
#include <binoed/model/synthetic.hpp>
#include <binoed/oracle/dense.hpp>
#include <binoed/rng.hpp>

#include <cmath>
#include <random>

namespace binoed::testing {

// A synthetic problem with both the dense reference and the low-rank objective.
struct Instance {
  SyntheticProblem problem;
  DiagonalNoise noise;
  DenseInstance dense;
  QRModel qr;
  LowRankObjective obj;
};

inline Instance make_instance(std::uint64_t seed, Index n, Index m, Index m_obs = 1,
                              double decay = 0.0) {
  SyntheticConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.m_obs = m_obs;
  cfg.decay = decay;
  cfg.seed = seed;
  SyntheticProblem p = make_synthetic(cfg);
  DiagonalNoise noise(p.sigma);
  LinearMap fb = preconditioned_operator(LinearMap::from_matrix(p.forward), p.prior, noise);
  QRModel qr = exact_qr(fb.adjoint().materialize());
  qr.set_layout(m, m_obs);
  LowRankObjective obj = LowRankObjective::assemble(qr, p.prior);
  DenseInstance dense = make_dense_instance(p.forward, p.prior, p.sigma, m, m_obs);
  return Instance{std::move(p), std::move(noise), std::move(dense), std::move(qr), std::move(obj)};
}

// Objective built directly from a random R and a random PSD Chat.
inline LowRankObjective random_objective(std::uint64_t seed, Index rank, Index m, Index m_obs = 1) {
  auto gen = make_stream(seed, "test-objective");
  Matrix r = gaussian_matrix(rank, m * m_obs, gen);
  Matrix b = gaussian_matrix(rank, rank, gen);
  Matrix chat = b.transpose() * b / static_cast<double>(rank);
  double tr = chat.trace() + 1.0;
  return LowRankObjective(std::move(r), std::move(chat), tr, m, m_obs);
}

// Interior design in [lo, hi]^m.
inline Vector random_design(std::mt19937_64& gen, Index m, double lo = 0.1, double hi = 0.9) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector w(m);
  for (Index i = 0; i < m; ++i) w(i) = u(gen);
  return w;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace binoed::testing
