#include <binoed/aoptimal/objective.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>

namespace binoed {

namespace {

double spectral_norm_sym(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

LowRankObjective::LowRankObjective(Matrix r, Matrix chat, double trace_c0, Index m, Index m_obs)
    : r_(std::move(r)), chat_(std::move(chat)), trace_c0_(trace_c0), m_(m), m_obs_(m_obs) {
  const Index l = r_.rows();
  if (m < 1 || m_obs < 1) throw ConfigError("LowRankObjective: m and m_obs must be >= 1");
  if (r_.cols() != m * m_obs) {
    throw ConfigError("LowRankObjective: R has " + std::to_string(r_.cols()) +
                      " columns, expected m * m_obs = " + std::to_string(m * m_obs));
  }
  if (chat_.rows() != l || chat_.cols() != l) {
    throw ConfigError("LowRankObjective: Chat must be " + std::to_string(l) + "x" + std::to_string(l));
  }
  if (!(trace_c0 >= 0.0) || !std::isfinite(trace_c0)) {
    throw ConfigError("LowRankObjective: trace_C0 must be finite and non-negative");
  }
  chat_ = (0.5 * (chat_ + chat_.transpose())).eval();
  trace_chat_ = chat_.trace();
  chat_norm_ = 0.0;
  chat_half_ = Matrix::Zero(l, l);
  if (l > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(chat_);
    Vector lambda = es.eigenvalues();
    chat_norm_ = lambda.cwiseAbs().maxCoeff();
    if (lambda.minCoeff() < -1e-6 * chat_norm_) {
      throw NumericalError("LowRankObjective: Chat has a negative eigenvalue " +
                           std::to_string(lambda.minCoeff()) + " (inconsistent prior)");
    }
    lambda = lambda.cwiseMax(0.0);
    chat_half_ = lambda.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  }
  if (trace_chat_ > trace_c0_ * (1.0 + 1e-8) + 1e-300) {
    throw NumericalError("LowRankObjective: tr(Chat) exceeds tr(C0)");
  }
}

LowRankObjective LowRankObjective::assemble(const QRModel& qr, const PriorModel& prior) {
  if (qr.n() != prior.n()) {
    throw ConfigError("assemble: QR model has n = " + std::to_string(qr.n()) + " but prior has n = " +
                      std::to_string(prior.n()));
  }
  const Index l = qr.rank();
  Matrix cq(qr.n(), l);
  for (Index j = 0; j < l; ++j) cq.col(j) = prior.whitened_covariance_apply(Vector(qr.Q.col(j)));
  Matrix chat = qr.Q.transpose() * cq;
  return LowRankObjective(qr.R, std::move(chat), prior.trace_C0(), qr.m, qr.m_obs);
}

Vector LowRankObjective::expand(const Vector& w) const {
  if (w.size() != m_) {
    throw ConfigError("design has size " + std::to_string(w.size()) + ", expected m = " + std::to_string(m_));
  }
  return w.replicate(m_obs_, 1);
}

Vector LowRankObjective::collapse(const Vector& full) const {
  if (full.size() != m_ * m_obs_) throw ConfigError("collapse: wrong input size");
  return full.reshaped(m_, m_obs_).rowwise().sum();
}

double LowRankObjective::objective(const Vector& w) const { return Workspace(*this, w).objective(); }

Vector LowRankObjective::gradient(const Vector& w) const { return Workspace(*this, w).gradient(); }

Matrix LowRankObjective::hessian(const Vector& w, Index dense_limit) const {
  return Workspace(*this, w).hessian(dense_limit);
}

Vector LowRankObjective::hessian_matvec(const Vector& w, const Vector& v) const {
  return Workspace(*this, w).hessian_matvec(v);
}

Workspace::Workspace(const LowRankObjective& obj, const Vector& w)
    : obj_(&obj), w_(w), wexp_(obj.expand(w)) {
  const Matrix& r = obj.R();
  Matrix l = r * wexp_.asDiagonal() * r.transpose();
  l.diagonal().array() += 1.0;
  llt_.compute(l);
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("Workspace: L_w is not positive definite at the given design");
  }
}

const Matrix& Workspace::linv_chalf_t() {
  if (!linv_chalf_t_) linv_chalf_t_ = llt_.solve(Matrix(obj_->chat_half().transpose()));
  return *linv_chalf_t_;
}

const Matrix& Workspace::linv_r() {
  if (!linv_r_) linv_r_ = llt_.solve(obj_->R());
  return *linv_r_;
}

double Workspace::objective() {
  const Matrix& x = linv_chalf_t();
  double tr = obj_->rank() > 0 ? x.cwiseProduct(obj_->chat_half().transpose()).sum() : 0.0;
  return obj_->trace_C0() - obj_->trace_chat() + tr;
}

Vector Workspace::gradient() {
  Matrix y = linv_r_ ? Matrix(obj_->chat_half() * *linv_r_)
                     : Matrix(linv_chalf_t().transpose() * obj_->R());
  Vector full = -y.colwise().squaredNorm().transpose();
  return obj_->collapse(full);
}

Vector Workspace::hessian_matvec(const Vector& v) {
  const Matrix& p = linv_r();
  Vector vexp = obj_->expand(v);
  Matrix s = p * vexp.asDiagonal() * obj_->R().transpose();  // l x l
  Matrix z = (obj_->chat() * s) * p;                         // l x (m m_obs)
  Vector full = 2.0 * z.cwiseProduct(p).colwise().sum().transpose();
  return obj_->collapse(full);
}

Matrix Workspace::hessian(Index dense_limit) {
  const Index m = obj_->m();
  if (m > dense_limit) {
    throw LimitExceeded("hessian: m = " + std::to_string(m) + " exceeds the dense limit " +
                        std::to_string(dense_limit) + "; use hessian_matvec");
  }
  const Matrix& p = linv_r();
  const Matrix& r = obj_->R();
  Matrix a = obj_->chat_half() * p;  // l x (m m_obs)
  Matrix h = Matrix::Zero(m, m);
  for (Index s = 0; s < obj_->m_obs(); ++s) {
    for (Index t = 0; t < obj_->m_obs(); ++t) {
      Matrix left = a.middleCols(s * m, m).transpose() * a.middleCols(t * m, m);
      Matrix right = r.middleCols(s * m, m).transpose() * p.middleCols(t * m, m);
      h += left.cwiseProduct(right);
    }
  }
  h *= 2.0;
  return 0.5 * (h + h.transpose());
}

Vector Workspace::linv_eigenvalues() const {
  const Matrix& r = obj_->R();
  Matrix l = r * wexp_.asDiagonal() * r.transpose();
  l.diagonal().array() += 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(l, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseInverse();
}

LipschitzConstants lipschitz_constants(const LowRankObjective& obj, Index m0, bool uncorrected_constant) {
  if (m0 < 0 || m0 > obj.m()) throw ConfigError("lipschitz_constants: need 0 <= m0 <= m");
  const double l = static_cast<double>(obj.rank());
  const double rr = spectral_norm_sym(obj.R() * obj.R().transpose());
  double base = l * l * obj.chat_norm() * rr * rr * static_cast<double>(obj.m_obs());
  LipschitzConstants c;
  c.L = uncorrected_constant ? base : 2.0 * base;
  c.L0 = std::sqrt(static_cast<double>(m0)) * c.L;
  c.L1 = std::sqrt(static_cast<double>(obj.m() - m0)) * c.L;
  c.L2 = std::sqrt(2.0 * static_cast<double>(m0)) * c.L;
  return c;
}

}  // namespace binoed

namespace binoed {

LowRankObjective LowRankObjective::restrict(const IndexList& ones, const IndexList& zeros) const {
  std::vector<int> state(static_cast<std::size_t>(m_), 0);
  for (Index k : ones) {
    if (k < 0 || k >= m_) throw ConfigError("restrict: index out of range");
    state[static_cast<std::size_t>(k)] = 1;
  }
  for (Index k : zeros) {
    if (k < 0 || k >= m_) throw ConfigError("restrict: index out of range");
    if (state[static_cast<std::size_t>(k)] == 1) throw InfeasibleDesign("restrict: index fixed to both 0 and 1");
    state[static_cast<std::size_t>(k)] = -1;
  }
  IndexList free;
  for (Index k = 0; k < m_; ++k) {
    if (state[static_cast<std::size_t>(k)] == 0) free.push_back(k);
  }
  if (free.empty()) throw ConfigError("restrict: no free indices remain");
  const Index l = rank();
  const Index mf = static_cast<Index>(free.size());
  Matrix base = Matrix::Identity(l, l);
  Matrix rf(l, mf * m_obs_);
  for (Index s = 0; s < m_obs_; ++s) {
    for (Index k : ones) base.noalias() += r_.col(s * m_ + k) * r_.col(s * m_ + k).transpose();
    for (Index j = 0; j < mf; ++j) rf.col(s * mf + j) = r_.col(s * m_ + free[static_cast<std::size_t>(j)]);
  }
  Eigen::LLT<Matrix> chol(base);
  if (chol.info() != Eigen::Success) throw NumericalError("restrict: fixed-sensor matrix not SPD");
  Matrix rt = chol.matrixL().solve(rf);
  Matrix ct = chol.matrixL().solve(Matrix(chol.matrixL().solve(chat_).transpose()));
  ct = (0.5 * (ct + ct.transpose())).eval();
  QRModel inner = exact_qr(rt);
  Matrix chat_r = inner.Q.transpose() * ct * inner.Q;
  double offset = trace_c0_ - trace_chat_ + ct.trace();
  return LowRankObjective(std::move(inner.R), std::move(chat_r), offset, mf, m_obs_);
}

}  // namespace binoed
