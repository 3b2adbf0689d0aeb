#include <binoed/model/noise.hpp>
#include <binoed/model/prior.hpp>
#include <binoed/rng.hpp>

namespace binoed {

DiagonalNoise::DiagonalNoise(Vector s) : sigma(std::move(s)) {
  if (sigma.size() == 0) throw ConfigError("DiagonalNoise: empty sigma");
  if (!(sigma.array() > 0.0).all() || !sigma.allFinite()) {
    throw ConfigError("DiagonalNoise: sigma entries must be finite and positive");
  }
}

DiagonalNoise DiagonalNoise::uniform(Index channels, double s) {
  return DiagonalNoise(Vector::Constant(channels, s));
}

double calibrate_noise(const LinearMap& map, const NoiseCalibration& opts,
                       const PriorModel* prior) {
  if (opts.n_samples < 1) throw ConfigError("calibrate_noise: n_samples must be >= 1");
  if (!(opts.fraction > 0.0)) throw ConfigError("calibrate_noise: fraction must be > 0");
  if (opts.through_prior && prior == nullptr) {
    throw ConfigError("calibrate_noise: through_prior requires a prior");
  }
  auto gen = make_stream(opts.seed, "calibrate_noise");
  double total = 0.0;
  for (Index i = 0; i < opts.n_samples; ++i) {
    Vector s = gaussian_vector(map.n_in(), gen);
    if (opts.through_prior) s = prior->sqrt_apply(s);
    total += map.apply(s).squaredNorm();
  }
  return opts.fraction * opts.fraction / static_cast<double>(opts.n_samples) * total;
}

}  // namespace binoed
