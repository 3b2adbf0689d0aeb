#pragma once

#include <binoed/model/linear_map.hpp>
#include <binoed/model/noise.hpp>
#include <binoed/model/prior.hpp>

namespace binoed {

// Fb = Gamma^{-1/2} F C0^{1/2} M^{-1/2}, Fb^T = M^{1/2} K^{-1} F^T Gamma^{-1/2}.
LinearMap preconditioned_operator(const LinearMap& forward, const PriorModel& prior,
                                  const DiagonalNoise& noise);

}  // namespace binoed
