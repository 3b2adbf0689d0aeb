#include <binoed/model/preconditioned.hpp>

namespace binoed {

LinearMap preconditioned_operator(const LinearMap& forward, const PriorModel& prior,
                                  const DiagonalNoise& noise) {
  if (forward.n_in() != prior.n()) {
    throw ConfigError("preconditioned_operator: forward input size " +
                      std::to_string(forward.n_in()) + " != prior size " +
                      std::to_string(prior.n()));
  }
  if (forward.n_out() != noise.size()) {
    throw ConfigError("preconditioned_operator: forward output size " +
                      std::to_string(forward.n_out()) + " != noise channels " +
                      std::to_string(noise.size()));
  }
  Vector sqrt_mass = prior.mass_diag().cwiseSqrt();
  Vector sigma = noise.sigma;
  auto apply = [forward, prior, sqrt_mass, sigma](const Vector& x) -> Vector {
    Vector y = forward.apply(prior.sqrt_apply(Vector(x.cwiseQuotient(sqrt_mass))));
    return y.cwiseQuotient(sigma);
  };
  auto adjoint = [forward, prior, sqrt_mass, sigma](const Vector& y) -> Vector {
    Vector z = forward.apply_adjoint(Vector(y.cwiseQuotient(sigma)));
    return sqrt_mass.cwiseProduct(prior.stiffness_solve(z));
  };
  return LinearMap(forward.n_in(), forward.n_out(), apply, adjoint);
}

}  // namespace binoed
