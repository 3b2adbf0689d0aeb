#pragma once

#include <binoed/types.hpp>

namespace binoed {

// Euclidean projection onto {0 <= z <= 1, sum z <= budget, z = 1 on ones, z = 0 on zeros}.
Vector project_capped_simplex(const Vector& v, double budget, const IndexList& ones = {},
                              const IndexList& zeros = {});

}  // namespace binoed
