#include <binoed/oracle/enumerate.hpp>
#include <binoed/rng.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace binoed {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  double pos = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

BaselineStats random_designs(const ObjectiveFn& J, Index m, Index m0, Index count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("random_designs: count must be >= 1");
  if (m < 1 || m0 < 0 || m0 > m) throw ConfigError("random_designs: need 0 <= m0 <= m");
  auto gen = make_stream(seed, "random_designs");
  BaselineStats st;
  st.seed = seed;
  st.m = m;
  st.m0 = m0;
  IndexList perm(static_cast<std::size_t>(m));
  for (Index c = 0; c < count; ++c) {
    std::iota(perm.begin(), perm.end(), Index{0});
    // Partial Fisher-Yates: the first m0 slots form a uniform m0-subset.
    for (Index i = 0; i < m0; ++i) {
      std::uniform_int_distribution<Index> pick(i, m - 1);
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(gen))]);
    }
    IndexList ones(perm.begin(), perm.begin() + m0);
    std::sort(ones.begin(), ones.end());
    st.values.push_back(J(design_from_ones(ones, m)));
    st.designs.push_back(std::move(ones));
  }
  std::vector<double> sorted = st.values;
  std::sort(sorted.begin(), sorted.end());
  st.min = sorted.front();
  st.max = sorted.back();
  st.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  st.q05 = quantile(sorted, 0.05);
  st.q25 = quantile(sorted, 0.25);
  st.q50 = quantile(sorted, 0.50);
  st.q75 = quantile(sorted, 0.75);
  st.q95 = quantile(sorted, 0.95);
  return st;
}

double fraction_beaten(const BaselineStats& stats, double value) {
  if (stats.values.empty()) return 0.0;
  std::size_t n = 0;
  for (double v : stats.values) n += v > value ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(stats.values.size());
}

}  // namespace binoed
