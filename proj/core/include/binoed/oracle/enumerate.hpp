#pragma once

#include <binoed/types.hpp>

#include <functional>

namespace binoed {

using ObjectiveFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

struct EnumerationRow {
  IndexList ones;
  double J = 0.0;
};

struct EnumerationTable {
  Index m = 0;
  Index m0 = 0;
  std::vector<EnumerationRow> rows;  // exactly m0 ones, ascending J (ties by lexicographic index set)
  EnumerationRow best_at_most;       // best design with at most m0 ones
};

std::uint64_t binomial(Index n, Index k);

EnumerationTable enumerate_binary(const ObjectiveFn& J, Index m, Index m0,
                                  std::uint64_t limit = 1000000);

// Rank (0-based) of a value among the table rows: number of rows with J < value.
Index rank_in_table(const EnumerationTable& table, double value, double tol = 0.0);

Vector design_from_ones(const IndexList& ones, Index m);

// Central differences.
Vector fd_gradient(const ObjectiveFn& J, const Vector& w, double h = 1e-5);
Vector fd_hvp(const GradientFn& grad, const Vector& w, const Vector& v, double h = 1e-4);

struct BaselineStats {
  std::uint64_t seed = 0;
  Index m = 0;
  Index m0 = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  std::vector<double> values;
  std::vector<IndexList> designs;
};

// Uniformly random binary designs with exactly m0 ones.
BaselineStats random_designs(const ObjectiveFn& J, Index m, Index m0, Index count, std::uint64_t seed);

// Fraction of sampled designs with J strictly greater than value.
double fraction_beaten(const BaselineStats& stats, double value);

}  // namespace binoed
