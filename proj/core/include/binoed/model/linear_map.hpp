#pragma once

#include <binoed/types.hpp>

#include <functional>
#include <memory>

namespace binoed {

// Matrix-free linear operator R^n_in -> R^n_out with its Euclidean transpose.
class LinearMap {
 public:
  using Action = std::function<Vector(const Vector&)>;

  LinearMap(Index n_in, Index n_out, Action apply, Action apply_adjoint);

  static LinearMap from_matrix(Matrix a);
  static LinearMap identity(Index n);
  static LinearMap zero(Index n_in, Index n_out);

  Index n_in() const { return n_in_; }
  Index n_out() const { return n_out_; }

  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& y) const;

  // Columnwise application.
  Matrix apply(const Matrix& x) const;
  Matrix apply_adjoint(const Matrix& y) const;

  LinearMap adjoint() const;

  // Dense n_out x n_in matrix, built from n_in applications.
  Matrix materialize() const;

 private:
  Index n_in_;
  Index n_out_;
  std::shared_ptr<const Action> apply_;
  std::shared_ptr<const Action> adjoint_;
};

// Composition a∘b (apply b first).
LinearMap compose(const LinearMap& a, const LinearMap& b);

// Vertical block stack [a_1; a_2; ...]; all blocks share n_in.
LinearMap vstack(const std::vector<LinearMap>& blocks);

// Largest value of |<Ax,y> - <x,A^T y>| / (|Ax||y| + |x||A^T y|) over random trials.
double adjoint_mismatch(const LinearMap& map, int trials, std::uint64_t seed);

}  // namespace binoed
