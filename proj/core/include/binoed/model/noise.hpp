#pragma once

#include <binoed/model/linear_map.hpp>
#include <binoed/types.hpp>

#include <optional>

namespace binoed {

class PriorModel;

// Uncorrelated Gaussian noise, one standard deviation per data channel.
struct DiagonalNoise {
  Vector sigma;

  explicit DiagonalNoise(Vector s);
  static DiagonalNoise uniform(Index channels, double s);

  Index size() const { return sigma.size(); }
};

struct NoiseCalibration {
  Index n_samples = 1000;
  double fraction = 0.01;
  std::uint64_t seed = 0;
  // Push samples through C0^{1/2} before applying the map.
  bool through_prior = false;
};

// sigma^2 = fraction^2 / N * sum_i |map(s_i)|^2 with standard Gaussian s_i.
double calibrate_noise(const LinearMap& map, const NoiseCalibration& opts,
                       const PriorModel* prior = nullptr);

}  // namespace binoed
