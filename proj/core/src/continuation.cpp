#include <binoed/solve/projection.hpp>
#include <binoed/solve/solver.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace binoed {

namespace {

Vector pow_entries(const Vector& z, double e) {
  Vector out(z.size());
  for (Index k = 0; k < z.size(); ++k) out(k) = z(k) > 0.0 ? std::pow(z(k), e) : 0.0;
  return out;
}

Index count_near_binary(const Vector& w, double thr) {
  Index n = 0;
  for (Index k = 0; k < w.size(); ++k) n += (w(k) <= thr || w(k) >= 1.0 - thr) ? 1 : 0;
  return n;
}

double pg_norm(const Vector& z, const Vector& g, double budget, const IndexList& ones, const IndexList& zeros) {
  return (z - project_capped_simplex(z - g, budget, ones, zeros)).lpNorm<Eigen::Infinity>();
}

}  // namespace

double p_objective(const DesignObjective& obj, const Vector& z, double p) {
  return obj.value(pow_entries(z, 1.0 / p));
}

Vector p_gradient(const DesignObjective& obj, const Vector& z, double p) {
  Vector w = pow_entries(z, 1.0 / p);
  return (obj.gradient(w).cwiseProduct(pow_entries(z, 1.0 / p - 1.0))) / p;
}

PStepResult solve_p_step(const DesignObjective& obj, Index m0, double p, const Vector& z_init,
                         const IndexList& ones, const IndexList& zeros, const SolverConfig& config,
                         std::vector<TraceRow>* trace, int outer) {
  config.validate();
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("solve_p_step: p must lie in (0, 1)");
  if (z_init.size() != obj.dim) throw ConfigError("solve_p_step: z_init has wrong size");
  const double budget = static_cast<double>(m0);
  check_feasible(z_init, m0, 1e-9);
  PStepResult res;
  res.z = project_capped_simplex(z_init, budget, ones, zeros);
  res.J = p_objective(obj, res.z, p);
  Vector g = p_gradient(obj, res.z, p);
  double t = 1.0 / std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  int it = 0;
  for (; it < config.p_step_max_iters; ++it) {
    res.pg_norm = pg_norm(res.z, g, budget, ones, zeros);
    if (trace) trace->push_back({outer, it, p, res.J, res.pg_norm, t});
    if (res.pg_norm <= config.p_step_tol) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    t *= 2.0;
    Vector zn;
    double jn = res.J;
    for (int b = 0; b < config.max_backtracks; ++b, t *= config.backtrack) {
      zn = project_capped_simplex(res.z - t * g, budget, ones, zeros);
      Vector d = zn - res.z;
      if (d.lpNorm<Eigen::Infinity>() == 0.0) break;
      jn = p_objective(obj, zn, p);
      if (jn <= res.J + config.armijo * g.dot(d)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    res.z = std::move(zn);
    res.J = jn;
    g = p_gradient(obj, res.z, p);
  }
  res.iterations = it;
  res.w = pow_entries(res.z, 1.0 / p);
  return res;
}

namespace {

Vector embed(const Vector& sub, const IndexList& free, const IndexList& ones, Index m) {
  Vector w = Vector::Zero(m);
  for (Index k : ones) w(k) = 1.0;
  for (std::size_t j = 0; j < free.size(); ++j) w(free[j]) = sub(static_cast<Index>(j));
  return w;
}

}  // namespace

ContinuationResult p_continuation(const DesignObjective& obj, Index m0, double delta,
                                  const SolverConfig& config) {
  config.validate();
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("p_continuation: delta must lie in (0, 1)");
  const Index m = obj.dim;
  ContinuationResult res;
  res.convex = solve_convex(obj, m0, config);
  if (!res.convex.report.is_global) {
    res.warnings.push_back("p_continuation: convex solve did not certify a global optimum");
  }
  const auto& cls = res.convex.report.classification;
  res.fixed_ones = cls.dominant;
  res.fixed_zeros = cls.redundant;
  IndexList free = cls.free;
  const Index budget = m0 - static_cast<Index>(res.fixed_ones.size());

  Vector w = res.convex.w;
  for (Index k : res.fixed_ones) w(k) = 1.0;
  for (Index k : res.fixed_zeros) w(k) = 0.0;
  res.path.push_back({1.0, w, obj.value(w), count_near_binary(w, config.binary_threshold)});

  Vector wf(static_cast<Index>(free.size()));
  for (std::size_t j = 0; j < free.size(); ++j) wf(static_cast<Index>(j)) = w(free[j]);

  if (!free.empty()) {
    DesignObjective sub;
    IndexList sub_ones;
    IndexList sub_zeros;
    if (obj.restrict) {
      sub = obj.restrict(res.fixed_ones, res.fixed_zeros);
    } else {
      // Without a reduced objective, optimize over the free entries of the full one.
      Vector base = w;
      sub.dim = static_cast<Index>(free.size());
      auto lift = [base, free](const Vector& x) {
        Vector full = base;
        for (std::size_t j = 0; j < free.size(); ++j) full(free[j]) = x(static_cast<Index>(j));
        return full;
      };
      sub.value = [obj, lift](const Vector& x) { return obj.value(lift(x)); };
      sub.gradient = [obj, lift, free](const Vector& x) {
        Vector g = obj.gradient(lift(x));
        Vector out(static_cast<Index>(free.size()));
        for (std::size_t j = 0; j < free.size(); ++j) out(static_cast<Index>(j)) = g(free[j]);
        return out;
      };
    }
    double p = 1.0;
    int outer = 0;
    while (true) {
      if (count_near_binary(wf, config.binary_threshold) == wf.size()) {
        res.binary = true;
        break;
      }
      p *= 1.0 - delta;
      if (p < config.p_floor) {
        res.warnings.push_back("p_continuation: p fell below p_floor before the design became binary");
        break;
      }
      ++outer;
      Vector z = pow_entries(wf, p);
      if (z.sum() > static_cast<double>(budget) + 1e-12) {
        z = project_capped_simplex(z, static_cast<double>(budget), sub_ones, sub_zeros);
      }
      PStepResult step = solve_p_step(sub, budget, p, z, sub_ones, sub_zeros, config, &res.trace, outer);
      wf = step.w;
      Vector full = embed(wf, free, res.fixed_ones, m);
      res.path.push_back({p, full, obj.value(full), count_near_binary(full, config.binary_threshold)});
    }
  } else {
    res.binary = true;
  }

  // Round: keep the largest entries >= 1/2, never more than the remaining budget.
  IndexList order(free.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return wf(a) > wf(b); });
  Vector wb = Vector::Zero(m);
  for (Index k : res.fixed_ones) wb(k) = 1.0;
  Index placed = 0;
  for (Index j : order) {
    if (placed >= budget || wf(j) < 0.5) break;
    wb(free[static_cast<std::size_t>(j)]) = 1.0;
    ++placed;
  }
  if (config.greedy_completion) {
    // J is monotone, so an unused budget slot can only help; fill greedily.
    while (placed < budget) {
      Index best = -1;
      double best_j = 0.0;
      for (Index k : free) {
        if (wb(k) != 0.0) continue;
        wb(k) = 1.0;
        double jk = obj.value(wb);
        wb(k) = 0.0;
        if (best < 0 || jk < best_j) {
          best = k;
          best_j = jk;
        }
      }
      if (best < 0) break;
      wb(best) = 1.0;
      ++placed;
      ++res.greedy_added;
    }
  }
  check_feasible(wb, m0, 0.0);
  res.w_binary = wb;
  res.J_binary = obj.value(wb);
  return res;
}

ContinuationResult p_continuation(const LowRankObjective& obj, Index m0, double delta,
                                  const SolverConfig& config) {
  return p_continuation(make_design_objective(obj, config.dense_limit), m0, delta, config);
}

}  // namespace binoed
