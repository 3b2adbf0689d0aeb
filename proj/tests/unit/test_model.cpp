#include "instances.hpp"

#include <binoed/model/noise.hpp>
#include <binoed/model/preconditioned.hpp>
#include <binoed/model/prior.hpp>
#include <binoed/model/synthetic.hpp>

#include <gtest/gtest.h>

namespace binoed {
namespace {

TEST(LinearMap, MatrixMapMatchesMatrixAndAdjoint) {
  auto gen = make_stream(1, "lm");
  Matrix a = gaussian_matrix(7, 5, gen);
  LinearMap map = LinearMap::from_matrix(a);
  Vector x = gaussian_vector(5, gen);
  Vector y = gaussian_vector(7, gen);
  EXPECT_LT((map.apply(x) - a * x).norm(), 1e-14);
  EXPECT_LT((map.apply_adjoint(y) - a.transpose() * y).norm(), 1e-14);
  EXPECT_LT((map.materialize() - a).norm(), 1e-14);
  EXPECT_LT((map.adjoint().materialize() - a.transpose()).norm(), 1e-14);
  EXPECT_LT(adjoint_mismatch(map, 20, 3), 1e-14);
}

TEST(LinearMap, ComposeAndStack) {
  auto gen = make_stream(2, "lm");
  Matrix a = gaussian_matrix(4, 6, gen), b = gaussian_matrix(6, 3, gen), c = gaussian_matrix(2, 3, gen);
  LinearMap ab = compose(LinearMap::from_matrix(a), LinearMap::from_matrix(b));
  EXPECT_LT((ab.materialize() - a * b).norm(), 1e-13);
  LinearMap st = vstack({LinearMap::from_matrix(b), LinearMap::from_matrix(c)});
  Matrix expected(8, 3);
  expected << b, c;
  EXPECT_LT((st.materialize() - expected).norm(), 1e-14);
  EXPECT_LT(adjoint_mismatch(st, 20, 4), 1e-14);
}

TEST(LinearMap, DimensionMismatchThrows) {
  LinearMap map = LinearMap::identity(3);
  EXPECT_THROW(map.apply(Vector(Vector::Zero(4))), ConfigError);
  EXPECT_THROW(compose(LinearMap::identity(3), LinearMap::identity(4)), ConfigError);
}

TEST(Prior, IdentityPrior) {
  PriorModel p = PriorModel::identity(6);
  EXPECT_DOUBLE_EQ(p.trace_C0(), 6.0);
  Vector x = Vector::LinSpaced(6, 1, 6);
  EXPECT_LT((p.covariance_apply(x) - x).norm(), 1e-14);
}

TEST(Prior, SquareRootFactorsCovariance) {
  SyntheticConfig cfg;
  cfg.n = 15;
  cfg.seed = 5;
  PriorModel p = make_synthetic(cfg).prior;
  Matrix k(p.stiffness());
  Matrix m = p.mass_diag().asDiagonal();
  Matrix c0 = k.inverse() * m * k.inverse() * m;
  auto gen = make_stream(9, "prior");
  Vector x = gaussian_vector(15, gen);
  EXPECT_LT((p.covariance_apply(x) - c0 * x).norm(), 1e-10 * (c0 * x).norm());
  EXPECT_LT((p.sqrt_apply(p.sqrt_apply(x)) - c0 * x).norm(), 1e-10 * (c0 * x).norm());
  EXPECT_LT((p.sqrt_inverse_apply(p.sqrt_apply(x)) - x).norm(), 1e-10 * x.norm());
  EXPECT_NEAR(p.trace_C0(), c0.trace(), 1e-10 * c0.trace());
  // C0 is self-adjoint in the M inner product.
  Vector y = gaussian_vector(15, gen);
  EXPECT_NEAR(x.dot(m * c0 * y), (c0 * x).dot(m * y), 1e-10 * std::abs(x.dot(m * c0 * y)));
  Matrix g = p.whitened_sqrt_dense();
  EXPECT_NEAR(g.squaredNorm(), p.trace_C0(), 1e-10 * p.trace_C0());
  EXPECT_LT((p.pointwise_variance() - Vector((c0 * m.inverse()).diagonal())).norm(), 1e-10);
}

TEST(Noise, ZeroMapGivesZeroVariance) {
  NoiseCalibration cal;
  EXPECT_EQ(calibrate_noise(LinearMap::zero(5, 4), cal), 0.0);
}

TEST(Noise, IdentityMapLawOfLargeNumbers) {
  NoiseCalibration cal;
  cal.seed = 3;
  const Index m = 30;
  double s2 = calibrate_noise(LinearMap::identity(m), cal);
  double expected = cal.fraction * cal.fraction * static_cast<double>(m);
  EXPECT_NEAR(s2, expected, 0.1 * expected);
}

TEST(Noise, RejectsBadOptions) {
  NoiseCalibration cal;
  cal.n_samples = 0;
  EXPECT_THROW(calibrate_noise(LinearMap::identity(3), cal), ConfigError);
  cal.n_samples = 10;
  cal.fraction = 0.0;
  EXPECT_THROW(calibrate_noise(LinearMap::identity(3), cal), ConfigError);
}

TEST(Preconditioned, IdentityPriorAndUnitNoiseIsForward) {
  auto gen = make_stream(4, "pre");
  Matrix a = gaussian_matrix(6, 9, gen);
  LinearMap fb = preconditioned_operator(LinearMap::from_matrix(a), PriorModel::identity(9),
                                         DiagonalNoise::uniform(6, 1.0));
  Vector x = gaussian_vector(9, gen);
  EXPECT_LT((fb.apply(x) - a * x).norm(), 1e-14);
}

TEST(Preconditioned, DoublingSigmaHalvesOutput) {
  auto p = make_synthetic(SyntheticConfig{});
  LinearMap f = LinearMap::from_matrix(p.forward);
  LinearMap a = preconditioned_operator(f, p.prior, DiagonalNoise(p.sigma));
  LinearMap b = preconditioned_operator(f, p.prior, DiagonalNoise(2.0 * p.sigma));
  Vector x = Vector::Ones(p.prior.n());
  EXPECT_LT((b.apply(x) - 0.5 * a.apply(x)).norm(), 1e-14 * a.apply(x).norm());
}

TEST(Preconditioned, AdjointConsistency) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticConfig cfg;
    cfg.seed = seed;
    cfg.m_obs = 2;
    auto p = make_synthetic(cfg);
    LinearMap fb = preconditioned_operator(LinearMap::from_matrix(p.forward), p.prior, DiagonalNoise(p.sigma));
    EXPECT_LT(adjoint_mismatch(fb, 20, seed), 1e-8);
  }
}

TEST(Synthetic, DeterministicUnderSeed) {
  SyntheticConfig cfg;
  cfg.seed = 11;
  auto a = make_synthetic(cfg), b = make_synthetic(cfg);
  EXPECT_EQ(a.forward, b.forward);
  EXPECT_EQ(a.sigma, b.sigma);
  cfg.seed = 12;
  EXPECT_NE(make_synthetic(cfg).forward, a.forward);
}

}  // namespace
}  // namespace binoed
