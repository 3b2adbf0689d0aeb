#include <binoed/aoptimal/objective.hpp>

namespace binoed {

namespace {

void check_shapes(const LowRankObjective& obj, const QRModel& qr, const PriorModel& prior) {
  if (qr.n() != prior.n()) throw ConfigError("posterior: QR model and prior disagree on n");
  if (qr.rank() != obj.rank() || qr.columns() != obj.R().cols()) {
    throw ConfigError("posterior: QR model does not match the objective");
  }
}

}  // namespace

Vector posterior_mean(const LowRankObjective& obj, const QRModel& qr, const PriorModel& prior,
                      const DiagonalNoise& noise, const Vector& w, const Vector& g,
                      const Vector& prior_mean) {
  check_shapes(obj, qr, prior);
  if (g.size() != obj.R().cols()) throw ConfigError("posterior_mean: data has wrong size");
  if (noise.size() != g.size()) throw ConfigError("posterior_mean: noise has wrong size");
  if (prior_mean.size() != prior.n()) throw ConfigError("posterior_mean: prior mean has wrong size");
  Workspace ws(obj, w);
  Vector wg = obj.expand(w).cwiseProduct(g).cwiseQuotient(noise.sigma);
  Vector z = qr.Q * ws.factor().solve(Vector(obj.R() * wg));
  if (prior_mean.squaredNorm() > 0.0) {
    // C_post C0^{-1} m0 = C0^{1/2} M^{-1/2} (I - Q (I - L^{-1}) Q^T) M^{-1/2} K m0
    Vector y = Vector(prior.stiffness() * prior_mean).cwiseQuotient(prior.mass_diag().cwiseSqrt());
    Vector qy = qr.Q.transpose() * y;
    y -= qr.Q * (qy - ws.factor().solve(qy));
    z += y;
  }
  return prior.stiffness_solve(Vector(prior.mass_diag().cwiseSqrt().cwiseProduct(z)));
}

Vector posterior_pointwise_variance(const LowRankObjective& obj, const QRModel& qr,
                                    const PriorModel& prior, const Vector& w, Index limit) {
  check_shapes(obj, qr, prior);
  if (prior.n() > limit) {
    throw LimitExceeded("posterior_pointwise_variance: n = " + std::to_string(prior.n()) +
                        " exceeds the limit " + std::to_string(limit));
  }
  Workspace ws(obj, w);
  Matrix g = prior.whitened_sqrt_dense();  // columns G e_i
  Matrix y = qr.Q.transpose() * g;         // l x n
  Matrix reduced = y - ws.factor().solve(y);
  Vector var = g.colwise().squaredNorm().transpose() - y.cwiseProduct(reduced).colwise().sum().transpose();
  return var.cwiseQuotient(prior.mass_diag());
}

}  // namespace binoed
