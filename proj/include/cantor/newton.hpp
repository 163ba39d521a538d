#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <string>
#include <vector>

#include "cantor/dual.hpp"

namespace cantor {

template <class R>
using Vector = Eigen::Matrix<R, Eigen::Dynamic, 1>;
template <class R>
using Matrix = Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>;

template <class R>
struct RootResult {
  Complex<R> root;
  int iterations = 0;
  std::vector<R> residuals;  // |f(z_k)| for every evaluated iterate
};

// Scalar Newton on a dual-valued evaluator f(DualComplex<R>) -> DualComplex<R>.
template <class R, class F>
RootResult<R> newton_root(F&& f, Complex<R> seed, const R& tol, int max_iter) {
  using std::abs;
  RootResult<R> out;
  Complex<R> z = seed;
  for (int k = 0;; ++k) {
    DualComplex<R> fz = f(DualComplex<R>::variable(z));
    R r = abs(fz.v);
    out.residuals.push_back(r);
    if (r < tol) {
      out.root = z;
      out.iterations = k;
      return out;
    }
    if (k == max_iter)
      throw NonConvergence("newton_root: residual " + to_decimal(r, 6) + " after " +
                           std::to_string(max_iter) + " steps");
    if (abs(fz.d) < tol * epsilon<R>())
      throw DerivativeUnderflow("newton_root: |f'| = " + to_decimal(R(abs(fz.d)), 6));
    z -= fz.v / fz.d;
  }
}

// Residual vector and Jacobian by one forward-mode pass per variable.
template <class R, class F>
std::pair<Vector<R>, Matrix<R>> residual_and_jacobian(F&& fn, const Vector<R>& x) {
  const Eigen::Index m = x.size();
  Vector<R> value;
  Matrix<R> jac;
  std::vector<DualReal<R>> args(static_cast<size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) args[i] = DualReal<R>(x[i], R(i == j ? 1 : 0));
    std::vector<DualReal<R>> out = fn(args);
    if (j == 0) {
      value.resize(static_cast<Eigen::Index>(out.size()));
      jac.resize(static_cast<Eigen::Index>(out.size()), m);
      for (size_t i = 0; i < out.size(); ++i) value[i] = out[i].v;
    }
    for (size_t i = 0; i < out.size(); ++i) jac(static_cast<Eigen::Index>(i), j) = out[i].d;
  }
  return {value, jac};
}

template <class R>
struct SystemResult {
  Vector<R> x;
  R residual_norm;
  int iterations = 0;
  std::vector<R> history;  // sup-norm residual of every evaluated iterate
};

// Multivariate Newton: x <- x - Jac(x)^{-1} F(x) until ||F(x)||_inf < tol.
template <class R, class F>
SystemResult<R> newton_system(F&& fn, Vector<R> x, const R& tol, int max_iter) {
  SystemResult<R> out;
  for (int k = 0;; ++k) {
    auto [value, jac] = residual_and_jacobian<R>(fn, x);
    R r = value.cwiseAbs().maxCoeff();
    out.history.push_back(r);
    if (r < tol) {
      out.x = x;
      out.residual_norm = r;
      out.iterations = k;
      return out;
    }
    if (k == max_iter)
      throw NonConvergence("newton_system: residual " + to_decimal(r, 6) + " after " +
                           std::to_string(max_iter) + " steps");
    Eigen::FullPivLU<Matrix<R>> lu(jac);
    if (lu.rank() < jac.cols()) throw SingularJacobian("newton_system: Jacobian is singular at step " + std::to_string(k));
    x -= lu.solve(value);
  }
}

}  // namespace cantor
