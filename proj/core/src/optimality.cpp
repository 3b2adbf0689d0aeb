#include <binoed/optimality/certificate.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace binoed {

std::string to_string(GapCase c) {
  switch (c) {
    case GapCase::strict_gap:
      return "strict_gap";
    case GapCase::tie:
      return "tie";
    case GapCase::partial:
      return "partial";
  }
  return "unknown";
}

namespace {

IndexList ascending_order(const Vector& grad) {
  IndexList order(static_cast<std::size_t>(grad.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return grad(a) < grad(b); });
  return order;
}

void check_m0(Index m0, Index m) {
  if (m0 < 0 || m0 > m) {
    throw ConfigError("m0 = " + std::to_string(m0) + " must lie in [0, " + std::to_string(m) + "]");
  }
}

}  // namespace

double default_tie_tol(const Vector& grad, Index m0) {
  if (grad.size() == 0) return 0.0;
  if (m0 <= 0) return 1e-6 * grad.cwiseAbs().maxCoeff();
  IndexList order = ascending_order(grad);
  double mx = 0.0;
  for (Index i = 0; i < std::min<Index>(m0, grad.size()); ++i) {
    mx = std::max(mx, std::abs(grad(order[static_cast<std::size_t>(i)])));
  }
  return 1e-6 * mx;
}

Classification classify(const Vector& grad, Index m0, std::optional<double> tie_tol) {
  const Index m = grad.size();
  check_m0(m0, m);
  if (!grad.allFinite()) throw NumericalError("classify: gradient is not finite");
  Classification c;
  c.order = ascending_order(grad);
  c.tie_tol = tie_tol.value_or(default_tie_tol(grad, m0));
  auto at = [&](Index pos) { return grad(c.order[static_cast<std::size_t>(pos)]); };

  const bool strict = m0 == 0 || m0 == m || at(m0) - at(m0 - 1) > c.tie_tol;
  if (strict) {
    c.gap_case = GapCase::strict_gap;
    c.m0_lower = m0;
    c.m0_upper = m0 + 1;
  } else {
    c.gap_case = GapCase::tie;
    const double pivot = at(m0 - 1);
    c.m0_lower = 0;
    for (Index pos = 0; pos < m; ++pos) {
      if (at(pos) < pivot - c.tie_tol) c.m0_lower = pos + 1;
    }
    c.m0_upper = m + 1;
    for (Index pos = m - 1; pos >= 0; --pos) {
      if (at(pos) > pivot + c.tie_tol) c.m0_upper = pos + 1;
    }
  }
  for (Index pos = 0; pos < m; ++pos) {
    Index k = c.order[static_cast<std::size_t>(pos)];
    if (pos < c.m0_lower) {
      c.dominant.push_back(k);
    } else if (pos + 1 >= c.m0_upper) {
      c.redundant.push_back(k);
    } else {
      c.free.push_back(k);
    }
  }
  std::sort(c.dominant.begin(), c.dominant.end());
  std::sort(c.redundant.begin(), c.redundant.end());
  std::sort(c.free.begin(), c.free.end());
  return c;
}

Vector lmo(const Vector& grad, Index m0) {
  check_m0(m0, grad.size());
  IndexList order = ascending_order(grad);
  Vector s = Vector::Zero(grad.size());
  for (Index i = 0; i < m0; ++i) {
    Index k = order[static_cast<std::size_t>(i)];
    if (grad(k) >= 0.0) break;
    s(k) = 1.0;
  }
  return s;
}

double fw_gap(const Vector& w, const Vector& grad, Index m0) {
  if (w.size() != grad.size()) throw ConfigError("fw_gap: design and gradient sizes differ");
  return grad.dot(w - lmo(grad, m0));
}

void check_feasible(const Vector& w, Index m0, double tol) {
  check_m0(m0, w.size());
  for (Index k = 0; k < w.size(); ++k) {
    if (!std::isfinite(w(k))) throw InfeasibleDesign("design entry " + std::to_string(k) + " is not finite");
    if (w(k) < -tol) {
      std::ostringstream os;
      os << "lower bound violated: w[" << k << "] = " << w(k) << " < 0";
      throw InfeasibleDesign(os.str());
    }
    if (w(k) > 1.0 + tol) {
      std::ostringstream os;
      os << "upper bound violated: w[" << k << "] = " << w(k) << " > 1";
      throw InfeasibleDesign(os.str());
    }
  }
  if (w.sum() > static_cast<double>(m0) + tol) {
    std::ostringstream os;
    os << "budget violated: sum(w) = " << w.sum() << " > m0 = " << m0;
    throw InfeasibleDesign(os.str());
  }
}

bool is_feasible(const Vector& w, Index m0, double tol) {
  try {
    check_feasible(w, m0, tol);
  } catch (const InfeasibleDesign&) {
    return false;
  }
  return true;
}

OptimalityReport verify_global(const Vector& w, const Vector& grad, Index m0, double tol,
                               std::optional<double> tie_tol) {
  if (w.size() != grad.size()) throw ConfigError("verify_global: design and gradient sizes differ");
  check_feasible(w, m0, std::max(tol, 1e-9));
  OptimalityReport rep;
  rep.classification = classify(grad, m0, tie_tol);
  rep.sum_w = w.sum();
  rep.fw_gap = fw_gap(w, grad, m0);
  const auto& c = rep.classification;
  bool dominant_ok = std::all_of(c.dominant.begin(), c.dominant.end(), [&](Index k) { return w(k) >= 1.0 - tol; });
  bool redundant_ok = std::all_of(c.redundant.begin(), c.redundant.end(), [&](Index k) { return w(k) <= tol; });
  if (!dominant_ok) rep.violations.emplace_back("(a) dominant not saturated");
  if (!redundant_ok) rep.violations.emplace_back("(b) redundant not zero");
  if (c.gap_case == GapCase::tie && std::abs(rep.sum_w - static_cast<double>(m0)) > tol) {
    rep.violations.emplace_back("(c) budget not exhausted");
  }
  rep.is_global = rep.violations.empty();
  return rep;
}

Classification apriori_classify(const Vector& grad0, const Vector& grad1, const Vector& gradw,
                                const LipschitzConstants& constants, Index m0) {
  const Index m = grad0.size();
  if (grad1.size() != m || gradw.size() != m) throw ConfigError("apriori_classify: gradient sizes differ");
  check_m0(m0, m);
  auto count_above = [m](const Vector& g, Index k, double shift) {
    Index n = 0;
    for (Index j = 0; j < m; ++j) n += g(k) + shift < g(j) ? 1 : 0;
    return n;
  };
  auto count_below = [m](const Vector& g, Index k, double shift) {
    Index n = 0;
    for (Index j = 0; j < m; ++j) n += g(k) - shift > g(j) ? 1 : 0;
    return n;
  };
  Classification c;
  c.gap_case = GapCase::partial;
  c.order = ascending_order(gradw);
  for (Index k = 0; k < m; ++k) {
    bool dom = count_above(grad0, k, 2.0 * constants.L0) >= m - m0 ||
               count_above(grad1, k, 2.0 * constants.L1) >= m - m0 ||
               count_above(gradw, k, 2.0 * constants.L2) >= m - m0;
    bool red = count_below(grad0, k, 2.0 * constants.L0) >= m0 ||
               count_below(grad1, k, 2.0 * constants.L1) >= m0 ||
               count_below(gradw, k, 2.0 * constants.L2) >= m0;
    if (dom && !red) {
      c.dominant.push_back(k);
    } else if (red && !dom) {
      c.redundant.push_back(k);
    } else {
      c.free.push_back(k);
    }
  }
  c.m0_lower = static_cast<Index>(c.dominant.size());
  c.m0_upper = m + 1 - static_cast<Index>(c.redundant.size());
  return c;
}

}  // namespace binoed
