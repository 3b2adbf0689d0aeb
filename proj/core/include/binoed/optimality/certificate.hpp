#pragma once

#include <binoed/types.hpp>

#include <optional>
#include <string>

namespace binoed {

enum class GapCase { strict_gap, tie, partial };

std::string to_string(GapCase c);

// Dominant / redundant / free partition of the sensor indices (0-based).
struct Classification {
  IndexList dominant;
  IndexList redundant;
  IndexList free;
  Index m0_lower = 0;  // number of sorted entries strictly below the m0-th
  Index m0_upper = 0;  // 1-based position of the first sorted entry strictly above (m + 1 if none)
  double tie_tol = 0.0;
  GapCase gap_case = GapCase::strict_gap;
  IndexList order;  // ascending gradient order, stable in the original index
};

struct OptimalityReport {
  bool is_global = false;
  double fw_gap = 0.0;
  double sum_w = 0.0;
  std::vector<std::string> violations;
  Classification classification;
};

struct LipschitzConstants {
  double L = 0.0;
  double L0 = 0.0;  // bound on |grad J(w) - grad J(0)| slack
  double L1 = 0.0;  // bound against grad J(1)
  double L2 = 0.0;  // bound against grad J(w) for a feasible w
};

// Gradient tie tolerance: 1e-6 times the largest |grad| among the m0 leading
// sorted entries (falls back to max |grad| when m0 = 0).
double default_tie_tol(const Vector& grad, Index m0);

Classification classify(const Vector& grad, Index m0, std::optional<double> tie_tol = {});

// Vertex of the capped simplex maximizing <-grad, s>.
Vector lmo(const Vector& grad, Index m0);

// <grad, w - lmo(grad, m0)>, the Frank-Wolfe gap.
double fw_gap(const Vector& w, const Vector& grad, Index m0);

// Throws InfeasibleDesign naming the violated constraint.
void check_feasible(const Vector& w, Index m0, double tol = 1e-9);
bool is_feasible(const Vector& w, Index m0, double tol = 1e-9);

OptimalityReport verify_global(const Vector& w, const Vector& grad, Index m0, double tol,
                               std::optional<double> tie_tol = {});

// A-priori partial classification from gradients at 0, 1 and a feasible w.
Classification apriori_classify(const Vector& grad0, const Vector& grad1, const Vector& gradw,
                                const LipschitzConstants& constants, Index m0);

}  // namespace binoed
