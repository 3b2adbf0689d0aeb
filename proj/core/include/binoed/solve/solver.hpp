#pragma once

#include <binoed/aoptimal/objective.hpp>
#include <binoed/optimality/certificate.hpp>
#include <binoed/types.hpp>

#include <functional>
#include <string>

namespace binoed {

struct SolverConfig {
  int max_iters = 5000;
  double gap_tol = 1e-10;          // Frank-Wolfe gap stopping tolerance (absolute)
  double armijo = 1e-4;            // sufficient decrease constant
  double backtrack = 0.5;          // step reduction factor
  int max_backtracks = 60;
  double projection_tol = 1e-12;
  bool newton_polish = true;       // Newton step on the active face after each step
  Index dense_limit = LowRankObjective::kDefaultDenseLimit;
  double verify_tol = 1e-6;        // tolerance handed to verify_global
  // p-continuation
  double binary_threshold = 1e-3;
  double p_floor = 1e-3;
  int p_step_max_iters = 500;
  double p_step_tol = 1e-8;        // projected-gradient norm tolerance of a p-step
  bool greedy_completion = true;   // fill to exactly m0 ones after rounding

  void validate() const;
};

// Objective interface consumed by the solvers; any convex, monotone,
// twice differentiable objective on [0,1]^m fits.
struct DesignObjective {
  Index dim = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;  // optional
  // Optional: the objective over the free indices given fixed ones/zeros.
  std::function<DesignObjective(const IndexList&, const IndexList&)> restrict;
};

DesignObjective make_design_objective(const LowRankObjective& obj,
                                      Index dense_limit = LowRankObjective::kDefaultDenseLimit);

struct TraceRow {
  int outer = 0;  // continuation step (0 for the convex solve)
  int iter = 0;
  double p = 1.0;
  double J = 0.0;
  double gap = 0.0;  // fw_gap for p = 1, projected-gradient norm otherwise
  double step = 0.0;
};

struct ConvexResult {
  Vector w;
  Vector grad;
  double J = 0.0;
  OptimalityReport report;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;
  std::vector<TraceRow> trace;
};

ConvexResult solve_convex(const DesignObjective& obj, Index m0, const SolverConfig& config);
ConvexResult solve_convex(const LowRankObjective& obj, Index m0, const SolverConfig& config);

struct PStepResult {
  Vector w;  // z^{1/p}
  Vector z;
  double J = 0.0;
  double pg_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// J^p(z) = J(z^{1/p}) with gradient (1/p) grad J(z^{1/p}) z^{1/p - 1}.
double p_objective(const DesignObjective& obj, const Vector& z, double p);
Vector p_gradient(const DesignObjective& obj, const Vector& z, double p);

PStepResult solve_p_step(const DesignObjective& obj, Index m0, double p, const Vector& z_init,
                         const IndexList& ones, const IndexList& zeros, const SolverConfig& config,
                         std::vector<TraceRow>* trace = nullptr, int outer = 0);

struct ContinuationStep {
  double p = 1.0;
  Vector w;
  double J = 0.0;
  Index near_binary = 0;  // entries within binary_threshold of {0,1}
};

struct ContinuationResult {
  Vector w_binary;
  double J_binary = 0.0;
  ConvexResult convex;
  IndexList fixed_ones;
  IndexList fixed_zeros;
  std::vector<ContinuationStep> path;
  bool binary = false;          // loop guard met before the p floor
  Index greedy_added = 0;       // sensors added after rounding to reach m0
  std::vector<std::string> warnings;
  std::vector<TraceRow> trace;
};

ContinuationResult p_continuation(const DesignObjective& obj, Index m0, double delta,
                                  const SolverConfig& config);
ContinuationResult p_continuation(const LowRankObjective& obj, Index m0, double delta,
                                  const SolverConfig& config);

}  // namespace binoed
