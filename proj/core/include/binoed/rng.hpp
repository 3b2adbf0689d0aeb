#pragma once

#include <binoed/types.hpp>

#include <random>
#include <string_view>

namespace binoed {

// Independent stream per (seed, call site); the site tag keeps streams
// for different purposes decorrelated under a shared user seed.
std::mt19937_64 make_stream(std::uint64_t seed, std::string_view site);

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& gen);
Vector gaussian_vector(Index n, std::mt19937_64& gen);

// FNV-1a over a byte string.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace binoed
