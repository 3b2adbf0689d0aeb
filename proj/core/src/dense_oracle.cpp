#include <binoed/oracle/dense.hpp>

namespace binoed {

namespace {

Vector expand_dense(const DenseInstance& inst, const Vector& w) {
  if (w.size() != inst.m) throw ConfigError("dense oracle: design has wrong size");
  Vector out(inst.m * inst.m_obs);
  for (Index s = 0; s < inst.m_obs; ++s) out.segment(s * inst.m, inst.m) = w;
  return out;
}

Matrix collapse_both(const DenseInstance& inst, const Matrix& full) {
  Matrix out = Matrix::Zero(inst.m, inst.m);
  for (Index s = 0; s < inst.m_obs; ++s)
    for (Index t = 0; t < inst.m_obs; ++t) out += full.block(s * inst.m, t * inst.m, inst.m, inst.m);
  return out;
}

Matrix whitened_prior(const DenseInstance& inst) {
  Vector sq = inst.mass.cwiseSqrt();
  return sq.asDiagonal() * inst.C0 * sq.cwiseInverse().asDiagonal();
}

}  // namespace

DenseInstance make_dense_instance(const Matrix& forward, const PriorModel& prior,
                                  const Vector& sigma, Index m, Index m_obs) {
  const Index n = prior.n();
  if (n > DenseInstance::kLimit) {
    throw LimitExceeded("dense oracle: n = " + std::to_string(n) + " exceeds " +
                        std::to_string(DenseInstance::kLimit));
  }
  if (forward.cols() != n || forward.rows() != m * m_obs || sigma.size() != m * m_obs) {
    throw ConfigError("dense oracle: inconsistent dimensions");
  }
  DenseInstance inst;
  inst.F = forward;
  inst.sigma = sigma;
  inst.K = Matrix(prior.stiffness());
  inst.mass = prior.mass_diag();
  inst.m = m;
  inst.m_obs = m_obs;
  Matrix kinv = inst.K.inverse();
  Matrix mm = inst.mass.asDiagonal();
  inst.C0 = kinv * mm * kinv * mm;
  inst.Fb = sigma.cwiseInverse().asDiagonal() * forward * kinv * inst.mass.cwiseSqrt().asDiagonal();
  return inst;
}

DenseInstance make_dense_instance(const LinearMap& forward, const PriorModel& prior,
                                  const DiagonalNoise& noise, Index m, Index m_obs) {
  return make_dense_instance(forward.materialize(), prior, noise.sigma, m, m_obs);
}

Matrix dense_misfit_hessian(const DenseInstance& inst, const Vector& w) {
  Vector wexp = expand_dense(inst, w);
  Matrix h = inst.Fb.transpose() * wexp.asDiagonal() * inst.Fb;
  h.diagonal().array() += 1.0;
  return h;
}

double dense_objective(const DenseInstance& inst, const Vector& w) {
  Matrix h = dense_misfit_hessian(inst, w);
  return h.ldlt().solve(whitened_prior(inst)).trace();
}

double dense_objective_woodbury(const DenseInstance& inst, const Vector& w) {
  // Data-space form: C0 - C0 F* S^{1/2} (I + S^{1/2} F C0 F* S^{1/2})^{-1} S^{1/2} F C0,
  // S = Gamma^{-1/2} W Gamma^{-1/2}, F* = M^{-1} F^T.
  Vector s_half = expand_dense(inst, w).cwiseSqrt().cwiseQuotient(inst.sigma);
  Matrix fstar = inst.mass.cwiseInverse().asDiagonal() * inst.F.transpose();
  Matrix b = s_half.asDiagonal() * inst.F * inst.C0;                 // data x n
  Matrix small = s_half.asDiagonal() * inst.F * inst.C0 * fstar * s_half.asDiagonal();
  small.diagonal().array() += 1.0;
  Matrix left = inst.C0 * fstar * s_half.asDiagonal();               // n x data
  Matrix post = inst.C0 - left * small.partialPivLu().solve(b);
  return post.trace();
}

Vector dense_gradient(const DenseInstance& inst, const Vector& w) {
  Matrix h = dense_misfit_hessian(inst, w);
  Matrix hinv = h.inverse();
  Matrix a = hinv * whitened_prior(inst) * hinv;
  Vector full(inst.Fb.rows());
  for (Index j = 0; j < inst.Fb.rows(); ++j) {
    Vector f = inst.Fb.row(j).transpose();
    full(j) = -f.dot(a * f);
  }
  Vector out = Vector::Zero(inst.m);
  for (Index s = 0; s < inst.m_obs; ++s) out += full.segment(s * inst.m, inst.m);
  return out;
}

Matrix dense_hessian(const DenseInstance& inst, const Vector& w) {
  Matrix h = dense_misfit_hessian(inst, w);
  Matrix hinv = h.inverse();
  Matrix a = hinv * whitened_prior(inst) * hinv;
  Matrix d = inst.Fb * hinv * inst.Fb.transpose();
  Matrix b = inst.Fb * a * inst.Fb.transpose();
  Matrix full = 2.0 * b.cwiseProduct(d);
  Matrix out = collapse_both(inst, full);
  return 0.5 * (out + out.transpose());
}

DensePosterior dense_posterior(const DenseInstance& inst, const Vector& w, const Vector& g,
                               const Vector& prior_mean) {
  const Index n = inst.mass.size();
  if (g.size() != inst.F.rows() || prior_mean.size() != n) {
    throw ConfigError("dense_posterior: inconsistent dimensions");
  }
  Vector weight = expand_dense(inst, w).cwiseQuotient(inst.sigma.cwiseProduct(inst.sigma));
  Matrix fstar = inst.mass.cwiseInverse().asDiagonal() * inst.F.transpose();
  Matrix precision = fstar * weight.asDiagonal() * inst.F + inst.C0.inverse();
  DensePosterior post;
  post.covariance = precision.inverse();
  post.mean = prior_mean + post.covariance * (fstar * weight.asDiagonal() * (g - inst.F * prior_mean));
  return post;
}

}  // namespace binoed
