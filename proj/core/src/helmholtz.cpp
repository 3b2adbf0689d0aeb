#include <binoed/model/helmholtz.hpp>

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace binoed {

namespace {

using ComplexLU = Eigen::SparseLU<ComplexSparseMatrix, Eigen::COLAMDOrdering<int>>;

bool on_boundary(Index i, Index n) { return i == 0 || i == n - 1; }

}  // namespace

struct HelmholtzModel::Factorization {
  double k = 0.0;
  ComplexLU forward;    // A_k
  ComplexLU conjugate;  // conj(A_k), impedance sign flipped
};

HelmholtzConfig HelmholtzConfig::desk() { return HelmholtzConfig{}; }

HelmholtzModel::HelmholtzModel(HelmholtzConfig config) : config_(std::move(config)) {
  const Index n = config_.grid;
  if (n < 5) throw ConfigError("helmholtz.grid must be at least 5");
  if (config_.wavenumbers.empty()) throw ConfigError("helmholtz.wavenumbers must be non-empty");
  for (double k : config_.wavenumbers) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("helmholtz.wavenumbers must be > 0");
  }
  if (!(config_.source_radius > 0.0)) throw ConfigError("helmholtz.source_radius must be > 0");
  h_ = 1.0 / static_cast<double>(n - 1);

  in_source_.assign(static_cast<std::size_t>(n * n), 0);
  for (Index node = 0; node < n * n; ++node) {
    Point p = node_point(node);
    double dx = p[0] - config_.center[0];
    double dy = p[1] - config_.center[1];
    if (std::hypot(dx, dy) <= config_.source_radius + 1e-12) {
      Index i = node % n;
      Index j = node / n;
      if (on_boundary(i, n) || on_boundary(j, n)) {
        throw ConfigError("helmholtz.source_radius: source region touches the outer boundary");
      }
      in_source_[static_cast<std::size_t>(node)] = 1;
      source_nodes_.push_back(node);
    }
  }
  if (source_nodes_.empty()) throw ConfigError("helmholtz.source_radius: source region is empty");

  std::vector<char> taken(static_cast<std::size_t>(n * n), 0);
  for (std::size_t r = 0; r < config_.rings.size(); ++r) {
    const auto& ring = config_.rings[r];
    if (ring.count < 1 || !(ring.radius > 0.0)) {
      throw ConfigError("helmholtz.rings[" + std::to_string(r) + "]: need radius > 0 and count >= 1");
    }
    for (Index s = 0; s < ring.count; ++s) {
      double theta = ring.phase + 2.0 * std::numbers::pi * static_cast<double>(s) /
                                      static_cast<double>(ring.count);
      double x = config_.center[0] + ring.radius * std::cos(theta);
      double y = config_.center[1] + ring.radius * std::sin(theta);
      if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
        throw ConfigError("helmholtz.rings[" + std::to_string(r) + "]: sensor outside the unit square");
      }
      Index i = static_cast<Index>(std::lround(x / h_));
      Index j = static_cast<Index>(std::lround(y / h_));
      Index node = j * n + i;
      if (in_source_[static_cast<std::size_t>(node)]) {
        throw ConfigError("helmholtz.rings[" + std::to_string(r) + "]: sensor inside source region");
      }
      if (taken[static_cast<std::size_t>(node)]) {
        throw ConfigError("helmholtz.rings[" + std::to_string(r) +
                          "]: two sensors snap to the same grid node; refine the grid");
      }
      taken[static_cast<std::size_t>(node)] = 1;
      sensor_nodes_.push_back(node);
    }
  }
  if (sensor_nodes_.empty()) throw ConfigError("helmholtz.rings: no sensors configured");

  // Cell areas, boundary lengths and edge weights of the symmetric form.
  area_.resize(n * n);
  Vector boundary_len = Vector::Zero(n * n);
  std::vector<Eigen::Triplet<double>> lap;
  lap.reserve(static_cast<std::size_t>(5 * n * n));
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      Index node = j * n + i;
      double fx = on_boundary(i, n) ? 0.5 : 1.0;
      double fy = on_boundary(j, n) ? 0.5 : 1.0;
      area_(node) = h_ * h_ * fx * fy;
      if (on_boundary(i, n) || on_boundary(j, n)) boundary_len(node) = h_;
      if (i + 1 < n) {
        double w = on_boundary(j, n) ? 0.5 : 1.0;
        Index q = node + 1;
        lap.emplace_back(node, node, w);
        lap.emplace_back(q, q, w);
        lap.emplace_back(node, q, -w);
        lap.emplace_back(q, node, -w);
      }
      if (j + 1 < n) {
        double w = on_boundary(i, n) ? 0.5 : 1.0;
        Index q = node + n;
        lap.emplace_back(node, node, w);
        lap.emplace_back(q, q, w);
        lap.emplace_back(node, q, -w);
        lap.emplace_back(q, node, -w);
      }
    }
  }
  SparseMatrix laplacian(n * n, n * n);
  laplacian.setFromTriplets(lap.begin(), lap.end());

  for (double k : config_.wavenumbers) {
    auto f = std::make_shared<Factorization>();
    f->k = k;
    ComplexSparseMatrix a = laplacian.cast<Complex>();
    ComplexSparseMatrix ac = a;
    for (Index node = 0; node < n * n; ++node) {
      Complex shift(-k * k * area_(node), -k * boundary_len(node));
      a.coeffRef(node, node) += shift;
      ac.coeffRef(node, node) += std::conj(shift);
    }
    a.makeCompressed();
    ac.makeCompressed();
    f->forward.compute(a);
    f->conjugate.compute(ac);
    if (f->forward.info() != Eigen::Success || f->conjugate.info() != Eigen::Success) {
      std::ostringstream os;
      os << "helmholtz: factorization failed for k = " << k;
      throw NumericalError(os.str());
    }
    factors_.push_back(std::move(f));
  }
}

Point HelmholtzModel::node_point(Index node) const {
  const Index n = config_.grid;
  return {static_cast<double>(node % n) * h_, static_cast<double>(node / n) * h_};
}

std::vector<Point> HelmholtzModel::source_points() const {
  std::vector<Point> out;
  for (Index node : source_nodes_) out.push_back(node_point(node));
  return out;
}

std::vector<Point> HelmholtzModel::sensor_points() const {
  std::vector<Point> out;
  for (Index node : sensor_nodes_) out.push_back(node_point(node));
  return out;
}

Index HelmholtzModel::wavenumber_index(double k) const {
  for (std::size_t j = 0; j < config_.wavenumbers.size(); ++j) {
    if (config_.wavenumbers[j] == k) return static_cast<Index>(j);
  }
  std::ostringstream os;
  os << "helmholtz: wavenumber " << k << " is not part of the model";
  throw ConfigError(os.str());
}

ComplexVector HelmholtzModel::solve_grid(double k, const ComplexVector& f_grid) const {
  if (f_grid.size() != n_nodes()) throw ConfigError("helmholtz: grid source has wrong size");
  const auto& f = *factors_[static_cast<std::size_t>(wavenumber_index(k))];
  ComplexVector rhs = f_grid.cwiseProduct(area_.cast<Complex>());
  return f.forward.solve(rhs);
}

ComplexVector HelmholtzModel::solve(double k, const Vector& f_source) const {
  if (f_source.size() != n_source()) throw ConfigError("helmholtz: source vector has wrong size");
  ComplexVector f_grid = ComplexVector::Zero(n_nodes());
  for (Index s = 0; s < n_source(); ++s) f_grid(source_nodes_[static_cast<std::size_t>(s)]) = f_source(s);
  return solve_grid(k, f_grid);
}

ComplexVector HelmholtzModel::observe(const ComplexVector& field) const {
  ComplexVector out(n_sensors());
  for (Index s = 0; s < n_sensors(); ++s) out(s) = field(sensor_nodes_[static_cast<std::size_t>(s)]);
  return out;
}

Vector HelmholtzModel::adjoint_solve(double k, const ComplexVector& v_sensor) const {
  if (v_sensor.size() != n_sensors()) throw ConfigError("helmholtz: sensor vector has wrong size");
  const auto& f = *factors_[static_cast<std::size_t>(wavenumber_index(k))];
  ComplexVector rhs = ComplexVector::Zero(n_nodes());
  for (Index s = 0; s < n_sensors(); ++s) rhs(sensor_nodes_[static_cast<std::size_t>(s)]) += v_sensor(s);
  ComplexVector hfield = f.conjugate.solve(rhs);
  Vector out(n_source());
  for (Index s = 0; s < n_source(); ++s) out(s) = hfield(source_nodes_[static_cast<std::size_t>(s)]).real();
  return out;
}

Vector HelmholtzModel::adjoint_solve_via_conjugate(double k, const ComplexVector& v_sensor) const {
  if (v_sensor.size() != n_sensors()) throw ConfigError("helmholtz: sensor vector has wrong size");
  const auto& f = *factors_[static_cast<std::size_t>(wavenumber_index(k))];
  ComplexVector rhs = ComplexVector::Zero(n_nodes());
  for (Index s = 0; s < n_sensors(); ++s) {
    rhs(sensor_nodes_[static_cast<std::size_t>(s)]) += std::conj(v_sensor(s));
  }
  ComplexVector hfield = f.forward.solve(rhs).conjugate();
  Vector out(n_source());
  for (Index s = 0; s < n_source(); ++s) out(s) = hfield(source_nodes_[static_cast<std::size_t>(s)]).real();
  return out;
}

Vector HelmholtzModel::source_mass() const {
  Vector out(n_source());
  for (Index s = 0; s < n_source(); ++s) out(s) = area_(source_nodes_[static_cast<std::size_t>(s)]);
  return out;
}

Vector HelmholtzModel::four_bump_source() const {
  // Four alternating Gaussian bumps on a square, sized for a source disk of radius 0.2.
  const double s = config_.source_radius / 0.2;
  const double r = s * 0.35 / 3.0;
  const double width = 800.0 / (s * s);
  const std::array<Point, 4> centers{{{r, -r}, {-r, -r}, {-r, r}, {r, r}}};
  Vector f(n_source());
  for (Index i = 0; i < n_source(); ++i) {
    Point x = node_point(source_nodes_[static_cast<std::size_t>(i)]);
    double dx = x[0] - config_.center[0], dy = x[1] - config_.center[1];
    double v = 0.0;
    for (std::size_t b = 0; b < centers.size(); ++b) {
      double ex = dx - centers[b][0], ey = dy - centers[b][1];
      v += (b % 2 ? -1.0 : 1.0) * std::exp(-width * (ex * ex + ey * ey));
    }
    f(i) = v;
  }
  return f;
}

LinearMap HelmholtzModel::forward_stack() const {
  auto self = std::make_shared<const HelmholtzModel>(*this);
  const Index m = n_sensors();
  const Index blocks = m_obs();
  Vector mass = source_mass();
  auto apply = [self, m, blocks](const Vector& f) -> Vector {
    Vector y(m * blocks);
    for (std::size_t j = 0; j < self->config_.wavenumbers.size(); ++j) {
      ComplexVector obs = self->observe(self->solve(self->config_.wavenumbers[j], f));
      y.segment(static_cast<Index>(2 * j) * m, m) = obs.real();
      y.segment(static_cast<Index>(2 * j + 1) * m, m) = obs.imag();
    }
    return y;
  };
  auto adjoint = [self, m, mass](const Vector& y) -> Vector {
    Vector x = Vector::Zero(self->n_source());
    for (std::size_t j = 0; j < self->config_.wavenumbers.size(); ++j) {
      ComplexVector v(m);
      v.real() = y.segment(static_cast<Index>(2 * j) * m, m);
      v.imag() = y.segment(static_cast<Index>(2 * j + 1) * m, m);
      x += self->adjoint_solve(self->config_.wavenumbers[j], v);
    }
    return mass.cwiseProduct(x);
  };
  return LinearMap(n_source(), m * blocks, apply, adjoint);
}

LinearMap HelmholtzModel::component(Index block) const {
  if (block < 0 || block >= m_obs()) throw ConfigError("helmholtz: block index out of range");
  auto self = std::make_shared<const HelmholtzModel>(*this);
  double k = config_.wavenumbers[static_cast<std::size_t>(block / 2)];
  bool imag = block % 2 == 1;
  Vector mass = source_mass();
  auto apply = [self, k, imag](const Vector& f) -> Vector {
    ComplexVector obs = self->observe(self->solve(k, f));
    return imag ? Vector(obs.imag()) : Vector(obs.real());
  };
  auto adjoint = [self, k, imag, mass](const Vector& g) -> Vector {
    ComplexVector v = imag ? ComplexVector(Complex(0.0, 1.0) * g.cast<Complex>())
                           : ComplexVector(g.cast<Complex>());
    return mass.cwiseProduct(self->adjoint_solve(k, v));
  };
  return LinearMap(n_source(), n_sensors(), apply, adjoint);
}

PriorModel HelmholtzModel::make_prior(double alpha, double beta) const {
  if (!(alpha > 0.0)) throw ConfigError("prior.alpha must be > 0");
  if (!(beta >= 0.0)) throw ConfigError("prior.beta must be >= 0");
  const Index n = config_.grid;
  std::vector<Index> local(static_cast<std::size_t>(n * n), -1);
  for (Index s = 0; s < n_source(); ++s) local[static_cast<std::size_t>(source_nodes_[static_cast<std::size_t>(s)])] = s;
  std::vector<Eigen::Triplet<double>> trip;
  for (Index s = 0; s < n_source(); ++s) {
    Index node = source_nodes_[static_cast<std::size_t>(s)];
    const Index neighbours[4] = {node - 1, node + 1, node - n, node + n};
    int missing = 0;
    for (Index q : neighbours) {
      Index lq = local[static_cast<std::size_t>(q)];
      if (lq < 0) {
        ++missing;
        continue;
      }
      trip.emplace_back(s, s, alpha);
      trip.emplace_back(s, lq, -alpha);
    }
    trip.emplace_back(s, s, h_ * h_ + alpha * beta * h_ * missing);
  }
  SparseMatrix k(n_source(), n_source());
  k.setFromTriplets(trip.begin(), trip.end());
  return PriorModel(std::move(k), source_mass(), alpha, beta);
}

ComplexVector helmholtz1d_solve(Index nodes, double k, const Vector& f) {
  if (nodes < 3) throw ConfigError("helmholtz1d: need at least 3 nodes");
  if (f.size() != nodes) throw ConfigError("helmholtz1d: source has wrong size");
  const double h = 1.0 / static_cast<double>(nodes - 1);
  std::vector<Eigen::Triplet<Complex>> trip;
  ComplexVector rhs(nodes);
  for (Index i = 0; i < nodes; ++i) {
    bool end = i == 0 || i == nodes - 1;
    double a = end ? 0.5 * h : h;
    Complex diag(-k * k * a, end ? -k : 0.0);
    if (i > 0) {
      diag += 1.0 / h;
      trip.emplace_back(i, i - 1, -1.0 / h);
    }
    if (i + 1 < nodes) {
      diag += 1.0 / h;
      trip.emplace_back(i, i + 1, -1.0 / h);
    }
    trip.emplace_back(i, i, diag);
    rhs(i) = a * f(i);
  }
  ComplexSparseMatrix a(nodes, nodes);
  a.setFromTriplets(trip.begin(), trip.end());
  ComplexLU lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw NumericalError("helmholtz1d: factorization failed");
  return lu.solve(rhs);
}

}  // namespace binoed
