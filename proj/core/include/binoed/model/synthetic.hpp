#pragma once

#include <binoed/model/linear_map.hpp>
#include <binoed/model/prior.hpp>
#include <binoed/types.hpp>

namespace binoed {

struct SyntheticConfig {
  Index n = 20;           // parameter dimension
  Index m = 12;           // sensors
  Index m_obs = 1;        // observations per sensor
  double decay = 0.0;     // column scaling exp(-decay * j / n) of the forward matrix
  bool random_prior = true;
  std::uint64_t seed = 0;
};

struct SyntheticProblem {
  Matrix forward;  // (m*m_obs) x n dense forward matrix
  PriorModel prior;
  Vector sigma;
};

// Random dense forward matrix with a random sparse SPD stiffness and positive
// lumped mass (or the identity prior when random_prior is false).
SyntheticProblem make_synthetic(const SyntheticConfig& cfg);

}  // namespace binoed
