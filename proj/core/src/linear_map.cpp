#include <binoed/model/linear_map.hpp>
#include <binoed/rng.hpp>

#include <algorithm>
#include <cmath>

namespace binoed {

LinearMap::LinearMap(Index n_in, Index n_out, Action apply, Action apply_adjoint)
    : n_in_(n_in),
      n_out_(n_out),
      apply_(std::make_shared<const Action>(std::move(apply))),
      adjoint_(std::make_shared<const Action>(std::move(apply_adjoint))) {
  if (n_in < 0 || n_out < 0) throw ConfigError("LinearMap: negative dimension");
}

LinearMap LinearMap::from_matrix(Matrix a) {
  auto shared = std::make_shared<const Matrix>(std::move(a));
  return LinearMap(
      shared->cols(), shared->rows(), [shared](const Vector& x) -> Vector { return *shared * x; },
      [shared](const Vector& y) -> Vector { return shared->transpose() * y; });
}

LinearMap LinearMap::identity(Index n) {
  auto id = [](const Vector& x) -> Vector { return x; };
  return LinearMap(n, n, id, id);
}

LinearMap LinearMap::zero(Index n_in, Index n_out) {
  return LinearMap(
      n_in, n_out, [n_out](const Vector&) -> Vector { return Vector::Zero(n_out); },
      [n_in](const Vector&) -> Vector { return Vector::Zero(n_in); });
}

Vector LinearMap::apply(const Vector& x) const {
  if (x.size() != n_in_) {
    throw ConfigError("LinearMap::apply: expected input of size " + std::to_string(n_in_) +
                      ", got " + std::to_string(x.size()));
  }
  Vector y = (*apply_)(x);
  if (y.size() != n_out_) throw NumericalError("LinearMap::apply: action returned wrong size");
  return y;
}

Vector LinearMap::apply_adjoint(const Vector& y) const {
  if (y.size() != n_out_) {
    throw ConfigError("LinearMap::apply_adjoint: expected input of size " +
                      std::to_string(n_out_) + ", got " + std::to_string(y.size()));
  }
  Vector x = (*adjoint_)(y);
  if (x.size() != n_in_) {
    throw NumericalError("LinearMap::apply_adjoint: action returned wrong size");
  }
  return x;
}

Matrix LinearMap::apply(const Matrix& x) const {
  Matrix out(n_out_, x.cols());
  for (Index j = 0; j < x.cols(); ++j) out.col(j) = apply(Vector(x.col(j)));
  return out;
}

Matrix LinearMap::apply_adjoint(const Matrix& y) const {
  Matrix out(n_in_, y.cols());
  for (Index j = 0; j < y.cols(); ++j) out.col(j) = apply_adjoint(Vector(y.col(j)));
  return out;
}

LinearMap LinearMap::adjoint() const {
  LinearMap t = *this;
  std::swap(t.n_in_, t.n_out_);
  std::swap(t.apply_, t.adjoint_);
  return t;
}

Matrix LinearMap::materialize() const { return apply(Matrix(Matrix::Identity(n_in_, n_in_))); }

LinearMap compose(const LinearMap& a, const LinearMap& b) {
  if (a.n_in() != b.n_out()) throw ConfigError("compose: inner dimensions disagree");
  return LinearMap(
      b.n_in(), a.n_out(), [a, b](const Vector& x) { return a.apply(b.apply(x)); },
      [a, b](const Vector& y) { return b.apply_adjoint(a.apply_adjoint(y)); });
}

LinearMap vstack(const std::vector<LinearMap>& blocks) {
  if (blocks.empty()) throw ConfigError("vstack: no blocks");
  Index n_in = blocks.front().n_in();
  Index n_out = 0;
  for (const auto& b : blocks) {
    if (b.n_in() != n_in) throw ConfigError("vstack: blocks disagree on input dimension");
    n_out += b.n_out();
  }
  auto apply = [blocks, n_out](const Vector& x) {
    Vector y(n_out);
    Index off = 0;
    for (const auto& b : blocks) {
      y.segment(off, b.n_out()) = b.apply(x);
      off += b.n_out();
    }
    return y;
  };
  auto adjoint = [blocks, n_in](const Vector& y) {
    Vector x = Vector::Zero(n_in);
    Index off = 0;
    for (const auto& b : blocks) {
      x += b.apply_adjoint(Vector(y.segment(off, b.n_out())));
      off += b.n_out();
    }
    return x;
  };
  return LinearMap(n_in, n_out, apply, adjoint);
}

double adjoint_mismatch(const LinearMap& map, int trials, std::uint64_t seed) {
  auto gen = make_stream(seed, "adjoint_mismatch");
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vector x = gaussian_vector(map.n_in(), gen);
    Vector y = gaussian_vector(map.n_out(), gen);
    Vector ax = map.apply(x);
    Vector aty = map.apply_adjoint(y);
    double lhs = ax.dot(y);
    double rhs = x.dot(aty);
    double scale = ax.norm() * y.norm() + x.norm() * aty.norm();
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

}  // namespace binoed
