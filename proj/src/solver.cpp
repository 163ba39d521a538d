#include "cantor/solver.hpp"

#include <algorithm>

namespace cantor {

namespace {
int sign_pow(int k) { return k % 2 == 0 ? 1 : -1; }

void require_odd(const DegreeVector& d) {
  if (d.n() % 2 == 0 || d.n() < 3) throw ConstraintViolated("Q and R systems need an odd n >= 3");
}

mp_real default_tolerance(const SolveOptions& opt) {
  if (opt.tolerance) return *opt.tolerance;
  return pow(mp_real(10), -(opt.precision.significant_digits - 10));
}

AsymptoticRatio ratio(const std::string& name, const mp_real& r, const mp_real& limit) {
  return {name, r, limit, abs(r - limit)};
}
}  // namespace

QSeedConstants q_seed_constants(const DegreeVector& d) {
  mp_real d1 = d.d(1), dn = d.d(d.n());
  return {d1 * (d1 - 3) * (dn - 1) / ((d1 - 1) * (d1 - 1) * dn), 2 * d1 * (dn - 1) / ((d1 - 1) * dn),
          (dn - 1) / dn};
}

QSystemState make_q_state(const DegreeVector& d, const mp_real& s) {
  require_odd(d);
  QSystemState st;
  st.d = d;
  st.s = s;
  st.b = make_schedule(MapKind::ParabolicQ, d, s);
  st.nu = d.nu<mp_real>();
  st.s_nu = pow(s, st.nu);
  const int n = d.n();
  st.rho1 = 1;
  st.rho2 = mp_real(d.d(1)) * pow(st.s_nu, d.d(n) - 1);
  st.rho3 = 0;
  st.rho4 = 0;
  for (int i = 1; i < n; ++i) {
    mp_real bD = pow(st.b.values[i - 1].real(), d.D(i));
    mp_real sD = pow(st.s_nu, d.D(i));
    int sg = sign_pow(i - 1);
    st.rho1 *= pow(1 - bD, sg);
    st.rho2 *= pow(sD - bD, sg);
    st.rho3 += mp_real(sg * d.D(i)) * bD / (1 - bD);
    st.rho4 += mp_real(sg * d.D(i)) * sD / (sD - bD);
  }
  QSeedConstants k = q_seed_constants(d);
  st.lambda.resize(4);
  st.lambda << 1 + k.x * st.s_nu, k.y * st.s_nu, mp_real(1), k.w * st.s_nu;
  return st;
}

RSystemState make_r_state(const DegreeVector& d, const mp_real& s) {
  require_odd(d);
  RSystemState st;
  st.d = d;
  st.s = s;
  st.c = make_schedule(MapKind::ParabolicR, d, s);
  st.nu = d.nu<mp_real>();
  st.mu = d.mu<mp_real>();
  st.mu_s_nu = st.mu * pow(s, st.nu);
  st.kappa1 = 1;
  st.kappa3 = 0;
  for (int i = 1; i < d.n(); ++i) {
    mp_real cD = pow(st.c.values[i - 1].real(), d.D(i));
    st.kappa1 *= pow(1 - cD, sign_pow(i));
    st.kappa3 += mp_real(sign_pow(i) * d.D(i)) * cD / (1 - cD);
  }
  st.lambda.resize(3);
  st.lambda << mp_real(1), mp_real(1), mp_real(1);
  return st;
}

namespace {
template <class Fn>
Vector<mp_real> eval_at(Fn&& fn, const Vector<mp_real>& lambda) {
  std::vector<mp_real> v(lambda.data(), lambda.data() + lambda.size());
  std::vector<mp_real> f = fn(v);
  Vector<mp_real> out(static_cast<Eigen::Index>(f.size()));
  for (size_t i = 0; i < f.size(); ++i) out[static_cast<Eigen::Index>(i)] = f[i];
  return out;
}
}  // namespace

Vector<mp_real> residual_Q(const QSystemState& st) {
  return eval_at([&](const std::vector<mp_real>& v) { return q_residual(st, v); }, st.lambda);
}

Vector<mp_real> residual_R(const RSystemState& st) {
  return eval_at([&](const std::vector<mp_real>& v) { return r_residual(st, v); }, st.lambda);
}

const mp_real& CoefficientSolution::value(const std::string& name) const {
  for (auto& [k, v] : values)
    if (k == name) return v;
  throw std::out_of_range("no coefficient named " + name);
}

CoefficientSolution solve_Q(const DegreeVector& d, const mp_real& s, const SolveOptions& opt) {
  opt.precision.validate();
  ScopedPrecision guard(opt.precision);
  QSystemState st = make_q_state(d, mp_real(s));
  auto fn = [&](const std::vector<DualReal<mp_real>>& v) { return q_residual(st, v); };
  SystemResult<mp_real> res = newton_system<mp_real>(fn, st.lambda, default_tolerance(opt), opt.max_iter);

  CoefficientSolution sol;
  sol.kind = MapKind::ParabolicQ;
  sol.lambda = res.x;
  sol.residual_norm = res.residual_norm;
  sol.iterations = res.iterations;
  sol.history = res.history;
  const mp_real &X = res.x[0], &Y = res.x[1], &Z = res.x[2], &W = res.x[3];
  sol.values = {{"X", X}, {"Y", Y}, {"Z", Z}, {"W", W}};
  QSeedConstants k = q_seed_constants(d);
  sol.ratios = {ratio("(X-1)/s^nu", (X - 1) / st.s_nu, k.x), ratio("Y/s^nu", Y / st.s_nu, k.y),
                ratio("(Z-1)/s^nu", (Z - 1) / st.s_nu, mp_real(0)), ratio("W/s^nu", W / st.s_nu, k.w)};
  sol.spec = make_Q(d, st.b, QCoefficients{X, Y, Z, W, st.nu}, opt.precision);
  return sol;
}

CoefficientSolution solve_R(const DegreeVector& d, const mp_real& s, const SolveOptions& opt) {
  opt.precision.validate();
  ScopedPrecision guard(opt.precision);
  RSystemState st = make_r_state(d, mp_real(s));
  auto fn = [&](const std::vector<DualReal<mp_real>>& v) { return r_residual(st, v); };
  SystemResult<mp_real> res = newton_system<mp_real>(fn, st.lambda, default_tolerance(opt), opt.max_iter);

  CoefficientSolution sol;
  sol.kind = MapKind::ParabolicR;
  sol.lambda = res.x;
  sol.residual_norm = res.residual_norm;
  sol.iterations = res.iterations;
  sol.history = res.history;
  const int k = d.d(1) * d.d(d.n());
  mp_real S = st.mu_s_nu * res.x[0];
  mp_real T = mp_real(k - 1) * st.mu_s_nu * res.x[1];
  mp_real z0 = mp_real(k) * st.mu_s_nu * res.x[2];
  sol.values = {{"I", res.x[0]}, {"J", res.x[1]}, {"z1", res.x[2]}, {"S", S}, {"T", T}, {"z0", z0}};
  mp_real s_nu = pow(st.s, st.nu);
  sol.ratios = {ratio("S/s^nu", S / s_nu, st.mu), ratio("T/s^nu", T / s_nu, mp_real(k - 1) * st.mu),
                ratio("z0/s^nu", z0 / s_nu, mp_real(k) * st.mu)};
  sol.spec = make_R(d, st.c, RCoefficients{S, T, z0, st.nu, st.mu}, opt.precision);
  return sol;
}

bool RegressionTable::monotone(const std::string& name, bool strict) const {
  for (size_t i = 1; i < rows.size(); ++i) {
    const mp_real& prev = at(i - 1, name).deviation;
    const mp_real& cur = at(i, name).deviation;
    if (strict ? !(cur < prev) : cur > prev) return false;
  }
  return true;
}

const AsymptoticRatio& RegressionTable::at(size_t row, const std::string& name) const {
  for (auto& r : rows.at(row).ratios)
    if (r.name == name) return r;
  throw std::out_of_range("no ratio named " + name);
}

RegressionTable asymptotic_regression(MapKind kind, const DegreeVector& d, const std::vector<mp_real>& s_grid,
                                      const SolveOptions& opt) {
  for (size_t i = 1; i < s_grid.size(); ++i)
    if (!(s_grid[i] < s_grid[i - 1])) throw ConstraintViolated("s grid must be strictly decreasing");
  RegressionTable table;
  table.kind = kind;
  for (const mp_real& s : s_grid) {
    CoefficientSolution sol;
    if (kind == MapKind::ParabolicQ)
      sol = solve_Q(d, s, opt);
    else if (kind == MapKind::ParabolicR)
      sol = solve_R(d, s, opt);
    else
      throw Unsupported("asymptotic regression is defined for Q and R only");
    table.rows.push_back({s, sol.ratios});
  }
  return table;
}

BoxCheck q_box_containment(const DegreeVector& d, const mp_real& s, const Vector<mp_real>& lambda) {
  BoxCheck box;
  mp_real nu = d.nu<mp_real>();
  mp_real s_nu = pow(s, nu);
  QSeedConstants k = q_seed_constants(d);
  std::array<mp_real, 4> center = {1 + k.x * s_nu, k.y * s_nu, mp_real(1), k.w * s_nu};
  box.inside = true;
  for (int i = 0; i < 4; ++i) {
    mp_real beta = mp_real(i + 1) * nu / (4 * d.dmax());
    box.radius[i] = pow(s, nu + beta);
    box.offset[i] = abs(lambda[i] - center[i]);
    if (box.offset[i] > box.radius[i]) box.inside = false;
  }
  return box;
}

}  // namespace cantor
