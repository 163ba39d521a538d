#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cantor/families.hpp"
#include "cantor/newton.hpp"

namespace cantor {

struct QSystemState {
  DegreeVector d;
  RingParameters b;
  mp_real s, nu, s_nu;
  mp_real rho1, rho2, rho3, rho4;
  Vector<mp_real> lambda;  // (x, y, z, w)
};

struct RSystemState {
  DegreeVector d;
  RingParameters c;
  mp_real s, nu, mu, mu_s_nu;
  mp_real kappa1, kappa3;
  Vector<mp_real> lambda;  // (I, J, z_1)

  // kappa_2 and kappa_4 depend on z_1 through z_0 = d_1 d_n mu s^nu z_1.
  template <class T> T kappa2(const T& z1) const;
  template <class T> T kappa4(const T& z1) const;
};

// Schedule, rho quantities and the seed Lambda_0 = (1 + x_n s^nu, y_n s^nu, 1, w_n s^nu).
QSystemState make_q_state(const DegreeVector& d, const mp_real& s);
// Schedule, kappa_1, kappa_3 and the seed (1, 1, 1).
RSystemState make_r_state(const DegreeVector& d, const mp_real& s);

struct QSeedConstants { mp_real x, y, w; };
QSeedConstants q_seed_constants(const DegreeVector& d);

template <class T>
std::vector<T> q_residual(const QSystemState& st, const std::vector<T>& v) {
  const T& x = v[0];
  const T& y = v[1];
  const T& z = v[2];
  const T& w = v[3];
  const int d1 = st.d.d(1), dn = st.d.d(st.d.n());
  const mp_real sd1 = pow(st.s_nu, d1);
  T den1 = T(mp_real(d1 - 1)) * x + y + z;
  T den2 = T(mp_real(d1 - 1) * sd1) * x + T(st.s_nu) * y + z;
  std::vector<T> f(4);
  f[0] = T(mp_real(d1) * st.rho1) / den1 + w - T(mp_real(1));
  f[1] = T(st.rho2) / den2 + w / T(st.s_nu) - T(mp_real(1));
  f[2] = T(mp_real(1)) / (T(mp_real(1)) - w) - T(st.rho3) - (T(mp_real(d1 - 1)) * y + T(mp_real(d1)) * z) / den1;
  f[3] = T(mp_real(1)) / (T(mp_real(1)) - w / T(st.s_nu)) - T(st.rho4) - T(mp_real(dn)) +
         (T(mp_real((d1 - 1) * d1) * sd1) * x + T(st.s_nu) * y) / den2;
  return f;
}

template <class T>
T RSystemState::kappa2(const T& z1) const {
  const int dn = d.d(d.n());
  T acc(mp_real(1));
  for (int i = 1; i < d.n(); ++i) {
    mp_real z0s = pow(mp_real(d.d(1) * dn) * mu_s_nu, d.D(i));
    mp_real cD = pow(c.values[i - 1].real(), d.D(i));
    T term = T(z0s / cD) * ipow(z1, d.D(i)) - T(mp_real(1));
    acc = acc * ipow(term, i % 2 == 0 ? 1 : -1);
  }
  return acc;
}

template <class T>
T RSystemState::kappa4(const T& z1) const {
  const int dn = d.d(d.n());
  T acc(mp_real(0));
  for (int i = 1; i < d.n(); ++i) {
    mp_real z0s = pow(mp_real(d.d(1) * dn) * mu_s_nu, d.D(i));
    mp_real cD = pow(c.values[i - 1].real(), d.D(i));
    T zD = T(z0s) * ipow(z1, d.D(i));
    acc = acc + T(mp_real((i % 2 == 0 ? 1 : -1) * d.D(i))) * zD / (zD - T(cD));
  }
  return acc;
}

template <class T>
std::vector<T> r_residual(const RSystemState& st, const std::vector<T>& v) {
  const T& I = v[0];
  const T& J = v[1];
  const T& z1 = v[2];
  const int d1 = st.d.d(1), dn = st.d.d(st.d.n());
  const mp_real k = mp_real(d1 * dn);
  const mp_real km1 = mp_real(d1 * dn - 1);
  std::vector<T> f(3);
  f[0] = T(k) * z1 - T(st.kappa1) * I - T(km1) * J;
  f[1] = st.kappa2(z1) * I / ipow(z1, dn) + T(km1 * st.mu_s_nu) * J - T(mp_real(1));
  f[2] = z1 / ((T(k) * z1 - T(km1) * J) * (T(mp_real(1)) - T(km1 * st.mu_s_nu) * J)) -
         (T(mp_real(1)) - T(st.kappa3 / d1)) * (T(mp_real(1)) - st.kappa4(z1) / T(mp_real(dn)));
  return f;
}

// Residuals (f_1..f_4) at state.lambda.
Vector<mp_real> residual_Q(const QSystemState& state);
// Residuals of R(1) = z_0, R(z_0) = 1, R'(1) R'(z_0) = 1 at state.lambda.
Vector<mp_real> residual_R(const RSystemState& state);

struct AsymptoticRatio {
  std::string name;  // e.g. "(X-1)/s^nu"
  mp_real ratio;
  mp_real limit;
  mp_real deviation;
};

struct CoefficientSolution {
  MapKind kind = MapKind::ParabolicQ;
  std::vector<std::pair<std::string, mp_real>> values;  // X,Y,Z,W or S,T,z0
  Vector<mp_real> lambda;                                // normalized unknowns
  mp_real residual_norm;
  int iterations = 0;
  std::vector<mp_real> history;
  std::vector<AsymptoticRatio> ratios;
  MapSpec spec;

  const mp_real& value(const std::string& name) const;
};

struct SolveOptions {
  PrecisionContext precision{50};
  std::optional<mp_real> tolerance;  // default 10^-(digits-10)
  int max_iter = 60;
};

CoefficientSolution solve_Q(const DegreeVector& d, const mp_real& s, const SolveOptions& opt = {});
CoefficientSolution solve_R(const DegreeVector& d, const mp_real& s, const SolveOptions& opt = {});

struct RegressionRow {
  mp_real s;
  std::vector<AsymptoticRatio> ratios;
};

struct RegressionTable {
  MapKind kind = MapKind::ParabolicQ;
  std::vector<RegressionRow> rows;

  // Deviation of the named ratio is non-increasing (strict=true: decreasing) along the grid.
  bool monotone(const std::string& name, bool strict = false) const;
  const AsymptoticRatio& at(size_t row, const std::string& name) const;
};

RegressionTable asymptotic_regression(MapKind kind, const DegreeVector& d, const std::vector<mp_real>& s_grid,
                                      const SolveOptions& opt = {});

// The box Theta = prod I(center_k, s^{nu + beta_k}) with beta = (1,2,3,4) nu / (4 dmax).
struct BoxCheck {
  bool inside = false;
  std::array<mp_real, 4> offset;  // |Lambda_k - center_k|
  std::array<mp_real, 4> radius;  // s^{nu + beta_k}
};
BoxCheck q_box_containment(const DegreeVector& d, const mp_real& s, const Vector<mp_real>& lambda);

}  // namespace cantor
