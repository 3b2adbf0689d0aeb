#include <binoed/solve/projection.hpp>

#include <algorithm>
#include <cmath>

namespace binoed {

Vector project_capped_simplex(const Vector& v, double budget, const IndexList& ones,
                              const IndexList& zeros) {
  const Index m = v.size();
  if (!v.allFinite()) throw NumericalError("project_capped_simplex: input is not finite");
  std::vector<int> state(static_cast<std::size_t>(m), 0);
  for (Index k : ones) {
    if (k < 0 || k >= m) throw InfeasibleDesign("project_capped_simplex: fixed index out of range");
    state[static_cast<std::size_t>(k)] = 1;
  }
  for (Index k : zeros) {
    if (k < 0 || k >= m) throw InfeasibleDesign("project_capped_simplex: fixed index out of range");
    if (state[static_cast<std::size_t>(k)] == 1) {
      throw InfeasibleDesign("project_capped_simplex: index " + std::to_string(k) + " fixed to both 0 and 1");
    }
    state[static_cast<std::size_t>(k)] = -1;
  }
  Index n_ones = 0;
  for (int s : state) n_ones += s == 1 ? 1 : 0;
  const double rest = budget - static_cast<double>(n_ones);
  if (rest < -1e-12) {
    throw InfeasibleDesign("project_capped_simplex: " + std::to_string(n_ones) +
                           " fixed ones exceed the budget " + std::to_string(budget));
  }

  Vector out = Vector::Zero(m);
  IndexList free;
  for (Index k = 0; k < m; ++k) {
    if (state[static_cast<std::size_t>(k)] == 1) {
      out(k) = 1.0;
    } else if (state[static_cast<std::size_t>(k)] == 0) {
      free.push_back(k);
    }
  }
  auto mass = [&](double tau) {
    double s = 0.0;
    for (Index k : free) s += std::clamp(v(k) - tau, 0.0, 1.0);
    return s;
  };
  const double b = std::max(rest, 0.0);
  double tau = 0.0;
  if (mass(0.0) > b) {
    std::vector<double> bp;
    bp.reserve(2 * free.size());
    for (Index k : free) {
      if (v(k) > 0.0) bp.push_back(v(k));
      if (v(k) - 1.0 > 0.0) bp.push_back(v(k) - 1.0);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    // mass is non-increasing and piecewise linear between breakpoints; it
    // vanishes at the largest one. Find the first breakpoint with mass <= b.
    std::size_t lo = 0;
    std::size_t hi = bp.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (mass(bp[mid]) <= b) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    double right = bp[lo];
    double left = lo == 0 ? 0.0 : bp[lo - 1];
    double ml = mass(left);
    double mr = mass(right);
    tau = ml == mr ? right : left + (ml - b) / (ml - mr) * (right - left);
  }
  for (Index k : free) out(k) = std::clamp(v(k) - tau, 0.0, 1.0);
  return out;
}

}  // namespace binoed
