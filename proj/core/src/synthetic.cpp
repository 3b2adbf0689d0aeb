#include <binoed/model/synthetic.hpp>
#include <binoed/rng.hpp>

#include <cmath>

namespace binoed {

namespace {

PriorModel random_prior(Index n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  std::vector<Eigen::Triplet<double>> trip;
  for (Index i = 0; i < n; ++i) {
    trip.emplace_back(i, i, unit(gen));
    if (i + 1 < n) {
      double w = 0.5 * unit(gen);
      trip.emplace_back(i, i, w);
      trip.emplace_back(i + 1, i + 1, w);
      trip.emplace_back(i, i + 1, -w);
      trip.emplace_back(i + 1, i, -w);
    }
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());
  Vector mass(n);
  for (Index i = 0; i < n; ++i) mass(i) = unit(gen);
  return PriorModel(std::move(k), std::move(mass), 1.0, 0.0);
}

}  // namespace

SyntheticProblem make_synthetic(const SyntheticConfig& cfg) {
  if (cfg.n < 1 || cfg.m < 1 || cfg.m_obs < 1) {
    throw ConfigError("synthetic: n, m and m_obs must be >= 1");
  }
  auto gen = make_stream(cfg.seed, "synthetic");
  Matrix forward = gaussian_matrix(cfg.m * cfg.m_obs, cfg.n, gen);
  if (cfg.decay > 0.0) {
    for (Index j = 0; j < cfg.n; ++j) {
      forward.col(j) *= std::exp(-cfg.decay * static_cast<double>(j) / static_cast<double>(cfg.n));
    }
  }
  PriorModel prior = cfg.random_prior ? random_prior(cfg.n, gen) : PriorModel::identity(cfg.n);
  std::uniform_real_distribution<double> sig(0.5, 2.0);
  Vector sigma(cfg.m * cfg.m_obs);
  for (Index i = 0; i < sigma.size(); ++i) sigma(i) = sig(gen);
  return SyntheticProblem{std::move(forward), std::move(prior), std::move(sigma)};
}

}  // namespace binoed
