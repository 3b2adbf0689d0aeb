#include <binoed/model/helmholtz.hpp>
#include <binoed/model/preconditioned.hpp>
#include <binoed/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace binoed {
namespace {

HelmholtzConfig small_config() {
  HelmholtzConfig c;
  c.grid = 25;
  c.wavenumbers = {5.0, 9.0};
  c.rings = {{0.3, 6, 0.0}, {0.4, 6, 0.2}};
  return c;
}

TEST(Helmholtz, ZeroSourceGivesZeroField) {
  HelmholtzModel h(small_config());
  EXPECT_EQ(h.solve(5.0, Vector::Zero(h.n_source())).norm(), 0.0);
  EXPECT_EQ(h.adjoint_solve(5.0, ComplexVector::Zero(h.n_sensors())).norm(), 0.0);
}

TEST(Helmholtz, DeskConfigurationHasFourteenObservations) {
  HelmholtzConfig c;
  EXPECT_EQ(c.wavenumbers.size(), 7u);
  HelmholtzModel h(c);
  EXPECT_EQ(h.m_obs(), 14);
  EXPECT_EQ(h.n_sensors(), 48);
  EXPECT_EQ(h.forward_stack().n_out(), 48 * 14);
}

TEST(Helmholtz, AdjointIdentity) {
  HelmholtzModel h(small_config());
  auto gen = make_stream(3, "helm-adjoint");
  Vector mass = h.source_mass();
  for (int t = 0; t < 20; ++t) {
    Vector f = gaussian_vector(h.n_source(), gen);
    ComplexVector g(h.n_sensors());
    for (Index i = 0; i < g.size(); ++i) g(i) = Complex(gen() % 1000 / 500.0 - 1.0, gen() % 1000 / 500.0 - 1.0);
    for (double k : h.config().wavenumbers) {
      // Re <O S f, g> against the L2(Omega) pairing with the adjoint field.
      double lhs = (h.observe(h.solve(k, f)).conjugate().transpose() * g)(0).real();
      double rhs = f.dot(mass.cwiseProduct(h.adjoint_solve(k, g)));
      EXPECT_NEAR(lhs, rhs, 1e-8 * std::max(std::abs(lhs), 1e-12));
    }
  }
}

TEST(Helmholtz, ConjugatedFactorizationAgrees) {
  HelmholtzModel h(small_config());
  auto gen = make_stream(4, "helm-conj");
  ComplexVector v(h.n_sensors());
  for (Index i = 0; i < v.size(); ++i) v(i) = Complex(static_cast<double>(gen() % 97) - 48, static_cast<double>(gen() % 89) - 44);
  for (double k : h.config().wavenumbers) {
    Vector a = h.adjoint_solve(k, v);
    Vector b = h.adjoint_solve_via_conjugate(k, v);
    EXPECT_LT((a - b).norm(), 1e-10 * a.norm());
  }
}

TEST(Helmholtz, StackBlocksMatchComponentMaps) {
  HelmholtzModel h(small_config());
  LinearMap stack = h.forward_stack();
  auto gen = make_stream(5, "helm-stack");
  Vector f = gaussian_vector(h.n_source(), gen);
  Vector y = stack.apply(f);
  for (Index j = 0; j < h.m_obs(); ++j) {
    Vector yj = h.component(j).apply(f);
    EXPECT_LT((y.segment(j * h.n_sensors(), h.n_sensors()) - yj).norm(), 1e-14 * (1.0 + yj.norm()));
  }
  EXPECT_LT(adjoint_mismatch(stack, 20, 6), 1e-8);
  for (Index j = 0; j < h.m_obs(); ++j) EXPECT_LT(adjoint_mismatch(h.component(j), 5, 7 + j), 1e-8);
}

TEST(Helmholtz, PreconditionedOperatorAdjoint) {
  HelmholtzModel h(small_config());
  PriorModel prior = h.make_prior(0.01125, std::sqrt(0.01125) / 1.42);
  LinearMap fb = preconditioned_operator(h.forward_stack(), prior, DiagonalNoise::uniform(h.n_sensors() * h.m_obs(), 0.3));
  EXPECT_LT(adjoint_mismatch(fb, 20, 8), 1e-8);
}

TEST(Helmholtz, PriorIsSymmetricPositiveDefinite) {
  HelmholtzModel h(small_config());
  PriorModel prior = h.make_prior(0.05, 0.1);
  Matrix k(prior.stiffness());
  EXPECT_LT((k - k.transpose()).norm(), 1e-14 * k.norm());
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  EXPECT_GT(prior.trace_C0(), 0.0);
  EXPECT_THROW(h.make_prior(0.0, 0.1), ConfigError);
}

TEST(Helmholtz, SensorsLieOutsideSourceRegion) {
  HelmholtzModel h(small_config());
  for (const Point& p : h.sensor_points()) {
    double r = std::hypot(p[0] - 0.5, p[1] - 0.5);
    EXPECT_GT(r, h.config().source_radius);
  }
}

TEST(Helmholtz, RejectsBadConfiguration) {
  HelmholtzConfig c = small_config();
  c.wavenumbers = {};
  EXPECT_THROW(HelmholtzModel{c}, ConfigError);
  c = small_config();
  c.rings = {{0.7, 4, 0.0}};
  EXPECT_THROW(HelmholtzModel{c}, ConfigError);
}

// Outgoing Green function of -u'' - k^2 u = delta(x - 1/2) with radiation ends.
Complex green(double x, double k) {
  return Complex(0.0, 1.0 / (2.0 * k)) * std::exp(Complex(0.0, k * std::abs(x - 0.5)));
}

double green_error(Index nodes, double k) {
  const double h = 1.0 / static_cast<double>(nodes - 1);
  Vector f = Vector::Zero(nodes);
  f((nodes - 1) / 2) = 1.0 / h;
  ComplexVector u = helmholtz1d_solve(nodes, k, f);
  double err = 0.0, ref = 0.0;
  for (Index i = 0; i < nodes; ++i) {
    Complex g = green(static_cast<double>(i) * h, k);
    err = std::max(err, std::abs(u(i) - g));
    ref = std::max(ref, std::abs(g));
  }
  return err / ref;
}

TEST(Helmholtz1D, MatchesGreenFunctionAtSecondOrder) {
  const double k = 10.0;
  double e1 = green_error(101, k), e2 = green_error(201, k), e3 = green_error(401, k);
  EXPECT_LT(e3, 1e-3);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.2);
  EXPECT_NEAR(std::log2(e2 / e3), 2.0, 0.2);
}

}  // namespace
}  // namespace binoed
