#pragma once

#include <binoed/aoptimal/objective.hpp>
#include <binoed/rng.hpp>

namespace binoed::bench {

inline LowRankObjective random_objective(Index ell, Index m, std::uint64_t seed = 1) {
  auto gen = make_stream(seed, "bench");
  Matrix r = gaussian_matrix(ell, m, gen) / std::sqrt(static_cast<double>(m));
  Matrix a = gaussian_matrix(ell, ell, gen);
  Matrix chat = a * a.transpose() / static_cast<double>(ell);
  return LowRankObjective(std::move(r), chat, 2.0 * chat.trace(), m, 1);
}

inline Vector interior_design(Index m) { return Vector::Constant(m, 0.3); }

}  // namespace binoed::bench
