#include <binoed/oracle/enumerate.hpp>

#include <algorithm>

namespace binoed {

std::uint64_t binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (Index i = 1; i <= k; ++i) {
    out = out * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return out;
}

Vector design_from_ones(const IndexList& ones, Index m) {
  Vector w = Vector::Zero(m);
  for (Index k : ones) w(k) = 1.0;
  return w;
}

namespace {

// Visits every k-subset of {0..m-1} in lexicographic order.
template <typename Visit>
void for_each_subset(Index m, Index k, Visit&& visit) {
  IndexList idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

EnumerationTable enumerate_binary(const ObjectiveFn& J, Index m, Index m0, std::uint64_t limit) {
  if (m < 1 || m0 < 0 || m0 > m) throw ConfigError("enumerate_binary: need 0 <= m0 <= m, m >= 1");
  std::uint64_t total = 0;
  for (Index k = 0; k <= m0; ++k) total += binomial(m, k);
  if (binomial(m, m0) > limit || total > 2 * limit) {
    throw LimitExceeded("enumerate_binary: C(" + std::to_string(m) + ", " + std::to_string(m0) +
                        ") exceeds the limit " + std::to_string(limit));
  }
  EnumerationTable table;
  table.m = m;
  table.m0 = m0;
  bool have_best = false;
  for (Index k = 0; k <= m0; ++k) {
    for_each_subset(m, k, [&](const IndexList& ones) {
      double value = J(design_from_ones(ones, m));
      if (k == m0) table.rows.push_back({ones, value});
      if (!have_best || value < table.best_at_most.J) {
        table.best_at_most = {ones, value};
        have_best = true;
      }
    });
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const EnumerationRow& a, const EnumerationRow& b) { return a.J < b.J; });
  return table;
}

Index rank_in_table(const EnumerationTable& table, double value, double tol) {
  Index r = 0;
  for (const auto& row : table.rows) r += row.J < value - tol ? 1 : 0;
  return r;
}

}  // namespace binoed
