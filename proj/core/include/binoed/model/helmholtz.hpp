#pragma once

#include <binoed/model/linear_map.hpp>
#include <binoed/model/prior.hpp>
#include <binoed/types.hpp>

#include <array>
#include <memory>

namespace binoed {

using Point = std::array<double, 2>;

struct SensorRing {
  double radius = 0.0;
  Index count = 0;
  double phase = 0.0;  // angular offset in radians
};

struct HelmholtzConfig {
  Index grid = 41;  // nodes per side of [0,1]^2
  std::vector<double> wavenumbers{20, 25, 30, 35, 40, 45, 50};
  Point center{0.5, 0.5};
  double source_radius = 0.15;
  std::vector<SensorRing> rings{{0.25, 16, 0.0}, {0.33, 16, 0.0}, {0.41, 16, 0.0}};

  static HelmholtzConfig desk();
};

// Five-point finite-difference Helmholtz model -Lap u - k^2 u = f on the unit
// square with impedance boundary du/dn = i k u, written in the symmetric
// (cell-area weighted) form A_k u = diag(a) f so that A_k is complex symmetric.
class HelmholtzModel {
 public:
  explicit HelmholtzModel(HelmholtzConfig config);

  const HelmholtzConfig& config() const { return config_; }
  Index grid() const { return config_.grid; }
  double spacing() const { return h_; }
  Index n_nodes() const { return config_.grid * config_.grid; }
  Index n_source() const { return static_cast<Index>(source_nodes_.size()); }
  Index n_sensors() const { return static_cast<Index>(sensor_nodes_.size()); }
  Index m_obs() const { return 2 * static_cast<Index>(config_.wavenumbers.size()); }

  const IndexList& source_nodes() const { return source_nodes_; }
  const IndexList& sensor_nodes() const { return sensor_nodes_; }
  Point node_point(Index node) const;
  std::vector<Point> source_points() const;
  std::vector<Point> sensor_points() const;

  // Full-grid field for a source given on the source nodes.
  ComplexVector solve(double k, const Vector& f_source) const;
  // Full-grid field for an arbitrary right-hand side density on the grid.
  ComplexVector solve_grid(double k, const ComplexVector& f_grid) const;

  // Re(h) on the source nodes, h the solution of the conjugated-boundary
  // problem driven by point sources v at the sensors. This is the
  // L^2(Omega)-adjoint; the Euclidean transpose is mass * adjoint_solve.
  Vector adjoint_solve(double k, const ComplexVector& v_sensor) const;
  // Same problem solved through the conjugated forward factorization.
  Vector adjoint_solve_via_conjugate(double k, const ComplexVector& v_sensor) const;

  ComplexVector observe(const ComplexVector& field) const;

  // Stack [Re O S_k1; Im O S_k1; ...], wavenumber-major, real before imaginary.
  LinearMap forward_stack() const;
  // Block j of the stack applied alone.
  LinearMap component(Index block) const;

  // Prior on the source nodes: K = alpha*graph Laplacian + h^2 I + Robin term.
  PriorModel make_prior(double alpha, double beta) const;
  Vector source_mass() const;
  Vector four_bump_source() const;  // reference source on the source nodes

 private:
  struct Factorization;
  Index wavenumber_index(double k) const;

  HelmholtzConfig config_;
  double h_;
  IndexList source_nodes_;
  IndexList sensor_nodes_;
  std::vector<char> in_source_;
  Vector area_;
  std::vector<std::shared_ptr<const Factorization>> factors_;
};

// 1D analogue on [0,1]: -u'' - k^2 u = f, u'(0) = -i k u(0), u'(1) = i k u(1),
// discretized with the same symmetric ghost-point boundary rows. N nodes.
ComplexVector helmholtz1d_solve(Index nodes, double k, const Vector& f);

}  // namespace binoed
