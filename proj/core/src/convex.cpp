#include <binoed/solve/projection.hpp>
#include <binoed/solve/solver.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace binoed {

void SolverConfig::validate() const {
  if (max_iters < 1) throw ConfigError("solver.max_iters must be >= 1");
  if (!(gap_tol > 0.0)) throw ConfigError("solver.gap_tol must be > 0");
  if (!(armijo > 0.0 && armijo < 1.0)) throw ConfigError("solver.armijo must lie in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ConfigError("solver.backtrack must lie in (0, 1)");
  if (max_backtracks < 1) throw ConfigError("solver.max_backtracks must be >= 1");
  if (!(binary_threshold > 0.0 && binary_threshold < 0.5)) {
    throw ConfigError("solver.binary_threshold must lie in (0, 0.5)");
  }
  if (!(p_floor > 0.0 && p_floor < 1.0)) throw ConfigError("solver.p_floor must lie in (0, 1)");
  if (p_step_max_iters < 1) throw ConfigError("solver.p_step_max_iters must be >= 1");
  if (!(p_step_tol > 0.0)) throw ConfigError("solver.p_step_tol must be > 0");
}

DesignObjective make_design_objective(const LowRankObjective& obj, Index dense_limit) {
  auto shared = std::make_shared<const LowRankObjective>(obj);
  DesignObjective d;
  d.dim = obj.m();
  d.value = [shared](const Vector& w) { return shared->objective(w); };
  d.gradient = [shared](const Vector& w) { return shared->gradient(w); };
  if (obj.m() <= dense_limit) {
    d.hessian = [shared, dense_limit](const Vector& w) { return shared->hessian(w, dense_limit); };
  }
  d.restrict = [shared, dense_limit](const IndexList& ones, const IndexList& zeros) {
    return make_design_objective(shared->restrict(ones, zeros), dense_limit);
  };
  return d;
}

namespace {

// A step is taken when it lowers J, or when J is unchanged up to rounding and the
// Frank-Wolfe gap (an upper bound on J - J*) shrinks.
bool within_rounding(double jn, double j) {
  return jn <= j + 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(j), 1.0);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Newton step on the face {w_F free, budget active or not}; accepted only on decrease.
bool newton_polish(const DesignObjective& obj, Index m0, Vector& w, double& J, Vector& g) {
  const Index m = w.size();
  IndexList face;
  for (Index k = 0; k < m; ++k) {
    if (w(k) > 0.0 && w(k) < 1.0) face.push_back(k);
  }
  if (face.empty()) return false;
  const Index nf = static_cast<Index>(face.size());
  const bool budget_active = w.sum() >= static_cast<double>(m0) - 1e-12 * std::max<double>(1.0, m0);
  Matrix h = obj.hessian(w);
  Matrix hf(nf, nf);
  Vector gf(nf);
  for (Index i = 0; i < nf; ++i) {
    gf(i) = g(face[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < nf; ++j) hf(i, j) = h(face[static_cast<std::size_t>(i)], face[static_cast<std::size_t>(j)]);
  }
  double reg = 1e-12 * std::max(hf.trace() / static_cast<double>(nf), 1e-300);
  hf.diagonal().array() += reg;
  Vector df;
  if (budget_active) {
    Matrix kkt = Matrix::Zero(nf + 1, nf + 1);
    kkt.topLeftCorner(nf, nf) = hf;
    kkt.topRightCorner(nf, 1).setOnes();
    kkt.bottomLeftCorner(1, nf).setOnes();
    Vector rhs = Vector::Zero(nf + 1);
    rhs.head(nf) = -gf;
    df = kkt.fullPivLu().solve(rhs).head(nf);
  } else {
    df = hf.ldlt().solve(-gf);
  }
  if (!df.allFinite()) return false;
  Vector d = Vector::Zero(m);
  for (Index i = 0; i < nf; ++i) d(face[static_cast<std::size_t>(i)]) = df(i);
  double alpha = 1.0;
  for (int t = 0; t < 20; ++t, alpha *= 0.5) {
    Vector wn = project_capped_simplex(w + alpha * d, static_cast<double>(m0));
    double jn = obj.value(wn);
    if (jn < J) {
      w = std::move(wn);
      J = jn;
      g = obj.gradient(w);
      return true;
    }
    if (within_rounding(jn, J)) {
      Vector gn = obj.gradient(wn);
      if (fw_gap(wn, gn, m0) < fw_gap(w, g, m0)) {
        w = std::move(wn);
        J = jn;
        g = std::move(gn);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

ConvexResult solve_convex(const DesignObjective& obj, Index m0, const SolverConfig& config) {
  config.validate();
  const Index m = obj.dim;
  if (m < 1) throw ConfigError("solve_convex: empty design space");
  if (m0 < 0 || m0 > m) throw ConfigError("solve_convex: need 0 <= m0 <= m");
  ConvexResult res;
  res.w = Vector::Constant(m, static_cast<double>(m0) / static_cast<double>(m));
  res.J = obj.value(res.w);
  res.grad = obj.gradient(res.w);
  double t = 1.0 / std::max(res.grad.cwiseAbs().maxCoeff(), 1e-300);
  int it = 0;
  for (; it < config.max_iters; ++it) {
    double gap = fw_gap(res.w, res.grad, m0);
    if (gap <= config.gap_tol) {
      res.converged = true;
      res.trace.push_back({0, it, 1.0, res.J, gap, 0.0});
      break;
    }
    bool accepted = false;
    t *= 2.0;
    Vector wn;
    Vector gn;
    double jn = res.J;
    for (int b = 0; b < config.max_backtracks; ++b, t *= config.backtrack) {
      wn = project_capped_simplex(res.w - t * res.grad, static_cast<double>(m0));
      Vector d = wn - res.w;
      if (d.lpNorm<Eigen::Infinity>() == 0.0) break;
      jn = obj.value(wn);
      if (jn <= res.J + config.armijo * res.grad.dot(d)) {
        gn = obj.gradient(wn);
        accepted = true;
        break;
      }
      if (within_rounding(jn, res.J)) {
        gn = obj.gradient(wn);
        if (fw_gap(wn, gn, m0) < gap) {
          accepted = true;
          break;
        }
      }
    }
    res.trace.push_back({0, it, 1.0, res.J, gap, accepted ? t : 0.0});
    if (accepted) {
      res.w = std::move(wn);
      res.J = jn;
      res.grad = std::move(gn);
    }
    bool polished = false;
    if (config.newton_polish && obj.hessian) polished = newton_polish(obj, m0, res.w, res.J, res.grad);
    if (!accepted && !polished) {
      res.warnings.push_back("solve_convex: no further decrease possible at gap " + sci(gap));
      break;
    }
  }
  res.iterations = it;
  if (!res.converged && it >= config.max_iters) {
    res.warnings.push_back("solve_convex: max_iters reached with gap " + sci(fw_gap(res.w, res.grad, m0)));
  }
  res.report = verify_global(res.w, res.grad, m0, config.verify_tol);
  if (!res.converged) res.report.is_global = false;
  return res;
}

ConvexResult solve_convex(const LowRankObjective& obj, Index m0, const SolverConfig& config) {
  return solve_convex(make_design_objective(obj, config.dense_limit), m0, config);
}

}  // namespace binoed
