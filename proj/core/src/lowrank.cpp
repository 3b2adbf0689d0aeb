#include <binoed/lowrank/qr.hpp>
#include <binoed/rng.hpp>

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>

namespace binoed {

namespace {

Matrix orthonormal_basis(const Matrix& b) {
  Eigen::HouseholderQR<Matrix> qr(b);
  return qr.householderQ() * Matrix::Identity(b.rows(), b.cols());
}

}  // namespace

void QRModel::set_layout(Index sensors, Index observations) {
  if (sensors < 1 || observations < 1 || sensors * observations != R.cols()) {
    throw ConfigError("QRModel: layout " + std::to_string(sensors) + " x " +
                      std::to_string(observations) + " does not match " +
                      std::to_string(R.cols()) + " columns");
  }
  m = sensors;
  m_obs = observations;
}

QRModel randomized_qr(const LinearMap& a, const RandomizedQROptions& opts) {
  const Index cols = a.n_in();
  const Index n = a.n_out();
  if (opts.rank < 1) throw ConfigError("randomized_qr: rank must be >= 1");
  if (opts.subspace_iterations < 0) throw ConfigError("randomized_qr: q must be >= 0");
  if (opts.rank > std::min(n, cols)) {
    throw ConfigError("randomized_qr: rank " + std::to_string(opts.rank) + " exceeds min(n, m*m_obs) = " +
                      std::to_string(std::min(n, cols)));
  }
  QRModel out;
  out.seed = opts.seed;
  out.subspace_iterations = opts.subspace_iterations;
  out.drop_tol = opts.drop_tol;
  out.m = cols;
  out.m_obs = 1;

  auto gen = make_stream(opts.seed, "randomized_qr");
  Matrix omega = gaussian_matrix(cols, opts.rank, gen);
  Matrix q = orthonormal_basis(a.apply(omega));
  for (int it = 0; it < opts.subspace_iterations; ++it) {
    Matrix qt = orthonormal_basis(a.apply_adjoint(q));
    q = orthonormal_basis(a.apply(qt));
  }
  Matrix b = a.apply_adjoint(q).transpose();  // l x cols

  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Index keep = 0;
  if (smax > 0.0) {
    while (keep < s.size() && s(keep) >= opts.drop_tol * smax) ++keep;
  }
  if (keep == 0) {
    out.warnings.push_back("randomized_qr: operator is numerically zero; rank truncated to 0");
    out.Q = Matrix::Zero(n, 0);
    out.R = Matrix::Zero(0, cols);
    out.residual_estimate = 0.0;
    return out;
  }
  if (keep < opts.rank) {
    out.warnings.push_back("randomized_qr: dropped " + std::to_string(opts.rank - keep) +
                           " singular values below drop_tol");
  }
  Matrix rt = s.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).transpose();  // keep x cols
  Eigen::HouseholderQR<Matrix> small(rt);
  Matrix qsmall = small.householderQ() * Matrix::Identity(keep, keep);
  out.R = small.matrixQR().topRows(keep).triangularView<Eigen::Upper>();
  out.Q = q * svd.matrixU().leftCols(keep) * qsmall;

  auto probe_gen = make_stream(opts.seed, "randomized_qr.residual");
  Matrix probes = gaussian_matrix(cols, std::max(1, opts.residual_probes), probe_gen);
  Matrix ap = a.apply(probes);
  double denom = ap.norm();
  out.residual_estimate = denom > 0.0 ? (ap - out.Q * (out.R * probes)).norm() / denom : 0.0;
  return out;
}

QRModel exact_qr(const Matrix& a, double rank_tol) {
  QRModel out;
  out.exact = true;
  out.m = a.cols();
  out.m_obs = 1;
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(rank_tol);
  const Index r = a.size() == 0 ? 0 : qr.rank();
  out.Q = qr.householderQ() * Matrix::Identity(a.rows(), r);
  out.R = out.Q.transpose() * a;
  double denom = a.norm();
  out.residual_estimate = denom > 0.0 ? (a - out.Q * out.R).norm() / denom : 0.0;
  return out;
}

QRModel block_concat(const std::vector<QRModel>& blocks, double rank_tol) {
  if (blocks.empty()) throw ConfigError("block_concat: no blocks");
  const Index n = blocks.front().n();
  const Index m = blocks.front().m;
  Index total_rank = 0;
  Index total_cols = 0;
  Index total_obs = 0;
  double residual = 0.0;
  for (const auto& b : blocks) {
    if (b.n() != n) throw ConfigError("block_concat: blocks disagree on n");
    if (b.m != m) throw ConfigError("block_concat: blocks disagree on sensor count m");
    total_rank += b.rank();
    total_cols += b.columns();
    total_obs += b.m_obs;
    residual = std::max(residual, b.residual_estimate);
  }
  Matrix stacked(n, total_rank);
  Matrix rdiag = Matrix::Zero(total_rank, total_cols);
  Index ro = 0;
  Index co = 0;
  for (const auto& b : blocks) {
    stacked.middleCols(ro, b.rank()) = b.Q;
    rdiag.block(ro, co, b.rank(), b.columns()) = b.R;
    ro += b.rank();
    co += b.columns();
  }
  QRModel inner = exact_qr(stacked, rank_tol);
  QRModel out;
  out.Q = std::move(inner.Q);
  out.R = inner.R * rdiag;
  out.m = m;
  out.m_obs = total_obs;
  out.exact = std::all_of(blocks.begin(), blocks.end(), [](const QRModel& b) { return b.exact; });
  out.seed = blocks.front().seed;
  out.subspace_iterations = blocks.front().subspace_iterations;
  out.drop_tol = blocks.front().drop_tol;
  out.residual_estimate = residual;
  for (const auto& b : blocks) out.warnings.insert(out.warnings.end(), b.warnings.begin(), b.warnings.end());
  return out;
}

double qr_residual(const QRModel& model, const Matrix& reference) {
  if (reference.rows() != model.n() || reference.cols() != model.columns()) {
    throw ConfigError("qr_residual: reference has wrong shape");
  }
  Matrix approx = model.rank() > 0 ? Matrix(model.Q * model.R) : Matrix::Zero(reference.rows(), reference.cols());
  double denom = reference.norm();
  double num = (reference - approx).norm();
  return denom > 0.0 ? num / denom : num;
}

}  // namespace binoed
