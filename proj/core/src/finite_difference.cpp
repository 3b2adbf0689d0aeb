#include <binoed/oracle/enumerate.hpp>

namespace binoed {

Vector fd_gradient(const ObjectiveFn& J, const Vector& w, double h) {
  Vector g(w.size());
  Vector x = w;
  for (Index k = 0; k < w.size(); ++k) {
    x(k) = w(k) + h;
    double fp = J(x);
    x(k) = w(k) - h;
    double fm = J(x);
    x(k) = w(k);
    g(k) = (fp - fm) / (2.0 * h);
  }
  return g;
}

Vector fd_hvp(const GradientFn& grad, const Vector& w, const Vector& v, double h) {
  return (grad(w + h * v) - grad(w - h * v)) / (2.0 * h);
}

}  // namespace binoed
