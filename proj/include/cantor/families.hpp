#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cantor/dual.hpp"

namespace cantor {

// Exact rational exponent, kept symbolic until evaluated at working precision.
struct Rational {
  long long p = 0;
  long long q = 1;

  Rational() = default;
  Rational(long long num, long long den = 1) : p(num), q(den) {
    if (q < 0) { p = -p; q = -q; }
    long long g = std::gcd(p < 0 ? -p : p, q);
    if (g > 1) { p /= g; q /= g; }
  }
  friend Rational operator+(Rational a, Rational b) { return {a.p * b.q + b.p * a.q, a.q * b.q}; }
  friend Rational operator-(Rational a, Rational b) { return {a.p * b.q - b.p * a.q, a.q * b.q}; }
  friend Rational operator*(Rational a, Rational b) { return {a.p * b.p, a.q * b.q}; }
  friend Rational operator/(Rational a, Rational b) { return {a.p * b.q, a.q * b.p}; }
  friend bool operator==(Rational a, Rational b) { return a.p == b.p && a.q == b.q; }
  friend bool operator<(Rational a, Rational b) { return a.p * b.q < b.p * a.q; }
  template <class R>
  R value() const { return R(p) / R(q); }
};

class DegreeVector {
 public:
  DegreeVector() = default;
  explicit DegreeVector(std::vector<int> degrees);

  int n() const { return static_cast<int>(d_.size()); }
  int d(int i) const { return d_.at(static_cast<size_t>(i - 1)); }  // 1-based
  int D(int i) const { return d(i) + d(i + 1); }                     // i = 1..n-1
  int dmax() const;
  int sum() const;
  const std::vector<int>& degrees() const { return d_; }

  // nu = d_n/(d_n-1) * sum_{i<n} 1/d_i
  Rational nu_exponent() const;
  template <class R> R nu() const { return nu_exponent().value<R>(); }
  // tau = (d_1 d_n dmax^{2(d_1-d_n)/d_1})^{1/sum_{i<n} d_n/d_i}
  template <class R> R tau() const;
  // mu = (d_1 d_n)^{-d_n/(d_n-1)} dmax^{2(d_n-d_1)/(d_1(d_n-1))}
  template <class R> R mu() const;

  friend bool operator==(const DegreeVector& a, const DegreeVector& b) { return a.d_ == b.d_; }

 private:
  std::vector<int> d_;
};

DegreeVector validate_degrees(const std::vector<int>& raw);

template <class R>
R DegreeVector::tau() const {
  Rational sigma;
  for (int i = 1; i < n(); ++i) sigma = sigma + Rational(d(n()), d(i));
  Rational e1 = Rational(1) / sigma;
  Rational e2 = Rational(2 * (d(1) - d(n())), d(1)) / sigma;
  return rational_pow(R(d(1) * d(n())), e1.p, e1.q) * rational_pow(R(dmax()), e2.p, e2.q);
}

template <class R>
R DegreeVector::mu() const {
  Rational e1(-d(n()), d(n()) - 1);
  Rational e2(2 * (d(n()) - d(1)), d(1) * (d(n()) - 1));
  return rational_pow(R(d(1) * d(n())), e1.p, e1.q) * rational_pow(R(dmax()), e2.p, e2.q);
}

enum class MapKind { HyperbolicF, ParabolicP, ParabolicQ, ParabolicR, RefPolyG, RefPolyGmn, RefRatH, RefRatHmn };

std::string to_string(MapKind kind);
MapKind parse_kind(const std::string& text);
bool has_degrees(MapKind kind);

struct RingParameters {
  std::vector<mp_complex> values;  // a_i, b_i or c_i
  mp_real s = 0;
  std::vector<mp_real> phases;
  bool scheduled = true;  // false when the values were given explicitly

  mp_real modulus(int i) const { return abs(values.at(static_cast<size_t>(i - 1))); }  // 1-based
  size_t size() const { return values.size(); }
};

// Moduli |v_1| = (dmax^2 k s)^{1/d_1}, |v_i| = (k s)^{1/d_i} |v_{i-1}|, k = tau for Q else 1.
RingParameters make_schedule(MapKind kind, const DegreeVector& d, const mp_real& s,
                             std::vector<mp_real> phases = {});
// Explicit ring values; s is recovered from |v_1| = (dmax^2 k s)^{1/d_1}.
RingParameters explicit_rings(MapKind kind, const DegreeVector& d, std::vector<mp_complex> values);

struct PCoefficients { mp_complex A, B, C; };
struct QCoefficients { mp_real X, Y, Z, W, nu; };
struct RCoefficients { mp_real S, T, z0, nu, mu; };
using Coefficients = std::variant<std::monostate, PCoefficients, QCoefficients, RCoefficients>;

PCoefficients coefficients_P(const DegreeVector& d, const RingParameters& rings);

struct MapSpec {
  MapKind kind = MapKind::ParabolicP;
  std::optional<DegreeVector> degrees;
  int p = 0;       // HyperbolicF
  int ref_m = 0;   // RefPolyGmn, RefRatHmn
  int ref_n = 0;   // all reference maps
  RingParameters rings;
  Coefficients coeffs;
  PrecisionContext precision;

  const DegreeVector& deg() const;
  const PCoefficients& P() const { return std::get<PCoefficients>(coeffs); }
  const QCoefficients& Q() const { return std::get<QCoefficients>(coeffs); }
  const RCoefficients& R() const { return std::get<RCoefficients>(coeffs); }
  // s^nu for Q, z_0 for R.
  mp_real inner_parabolic_point() const;
};

MapSpec make_P(const DegreeVector& d, const RingParameters& rings, PrecisionContext precision = {});
MapSpec make_Q(const DegreeVector& d, const RingParameters& rings, const QCoefficients& c,
               PrecisionContext precision = {});
MapSpec make_R(const DegreeVector& d, const RingParameters& rings, const RCoefficients& c,
               PrecisionContext precision = {});
MapSpec make_F(int p, const DegreeVector& d, const RingParameters& rings, PrecisionContext precision = {});
MapSpec make_g(int n);
MapSpec make_g(int m, int n);
MapSpec make_h(int n);
MapSpec make_h(int m, int n);

// ---------------------------------------------------------------------------
// Factored evaluation: scale * z^z_power * prod_k p_k(z)^{power_k} + shift,
// each p_k a sparse polynomial kept unexpanded.

template <class R>
struct Monomial {
  Complex<R> c;
  int e = 0;
};

template <class R>
struct Factor {
  std::vector<Monomial<R>> terms;
  int power = 1;

  int degree() const {
    int m = 0;
    for (auto& t : terms) m = std::max(m, t.e);
    return m;
  }
  int order_at_zero() const {
    int m = degree();
    for (auto& t : terms) m = std::min(m, t.e);
    return m;
  }
  template <class T>
  T operator()(const T& z) const {
    T acc(0);
    for (auto& t : terms) acc = acc + T(t.c) * ipow(z, t.e);
    return acc;
  }
  template <class T>
  T derivative(const T& z) const {
    T acc(0);
    for (auto& t : terms)
      if (t.e != 0) acc = acc + T(t.c * R(t.e)) * ipow(z, t.e - 1);
    return acc;
  }
  // z^{deg} p(1/z), evaluated at w = 1/z.
  template <class T>
  T reversed(const T& w) const {
    int m = degree();
    T acc(0);
    for (auto& t : terms) acc = acc + T(t.c) * ipow(w, m - t.e);
    return acc;
  }
};

template <class R>
struct RationalMap {
  Complex<R> scale{1};
  int z_power = 0;
  std::vector<Factor<R>> factors;
  Complex<R> shift{0};

  // Exponent E with f(z) - shift ~ z^E at infinity.
  int exponent_at_infinity() const {
    int e = z_power;
    for (auto& f : factors) e += f.power * f.degree();
    return e;
  }
  // Exponent with f(z) - shift ~ z^k at the origin.
  int order_at_zero() const {
    int e = z_power;
    for (auto& f : factors) e += f.power * f.order_at_zero();
    return e;
  }
  int numerator_degree() const {
    int e = std::max(z_power, 0);
    for (auto& f : factors) if (f.power > 0) e += f.power * f.degree();
    return e;
  }
  int denominator_degree() const {
    int e = std::max(-z_power, 0);
    for (auto& f : factors) if (f.power < 0) e -= f.power * f.degree();
    return e;
  }
  int degree() const { return std::max(numerator_degree(), denominator_degree()); }

  // Direct chart; no pole handling. T is Complex<R> or DualComplex<R>.
  template <class T>
  T operator()(const T& z) const {
    T acc = T(scale) * ipow(z, z_power);
    for (auto& f : factors) acc = acc * ipow(f(z), f.power);
    return acc + T(shift);
  }

  // z f'(z) / (f(z) - shift): its zeros off 0 and infinity are the critical points.
  template <class T>
  T critical_equation(const T& z) const {
    T acc(z_power);
    for (auto& f : factors) acc = acc + T(R(f.power)) * z * f.derivative(z) / f(z);
    return acc;
  }

  template <class S>
  RationalMap<S> cast() const {
    RationalMap<S> out;
    out.scale = complex_cast<S>(scale);
    out.z_power = z_power;
    out.shift = complex_cast<S>(shift);
    for (auto& f : factors) {
      Factor<S> g;
      g.power = f.power;
      for (auto& t : f.terms) g.terms.push_back({complex_cast<S>(t.c), t.e});
      out.factors.push_back(std::move(g));
    }
    return out;
  }
};

RationalMap<mp_real> rational_map_mp(const MapSpec& spec);

template <class R>
RationalMap<R> rational_map(const MapSpec& spec) {
  return rational_map_mp(spec).template cast<R>();
}

// A point of the Riemann sphere: finite value or the point at infinity.
template <class R>
struct SpherePoint {
  Complex<R> z{};
  bool infinite = false;

  static SpherePoint at_infinity() { return {Complex<R>{}, true}; }
};

template <class R>
struct Evaluation {
  DualComplex<R> value;      // f and f' when finite
  bool at_infinity = false;  // f(z) is the point at infinity
  int local_degree = 1;      // local degree at z (pole order at poles)
};

inline constexpr double kReciprocalChartRadius = 1e8;

template <class R>
Evaluation<R> evaluate(const RationalMap<R>& f, const SpherePoint<R>& p) {
  using std::abs;
  using std::log;
  Evaluation<R> out;
  const int E = f.exponent_at_infinity();
  if (p.infinite) {
    out.local_degree = std::max(1, std::abs(E));
    if (E > 0) {
      out.at_infinity = true;
    } else if (E < 0) {
      out.value = DualComplex<R>(f.shift, Complex<R>(0));
    } else {
      Complex<R> v = f.scale;
      for (auto& g : f.factors) v *= ipow(g.reversed(Complex<R>(0)), g.power);
      out.value = DualComplex<R>(v + f.shift, Complex<R>(0));
    }
    return out;
  }
  const Complex<R>& z = p.z;
  if (z == Complex<R>(0)) {
    int k = f.order_at_zero();
    if (k < 0) {
      out.at_infinity = true;
      out.local_degree = -k;
      return out;
    }
    if (k > 0) {
      out.local_degree = k;
      out.value = DualComplex<R>(f.shift, Complex<R>(0));
      out.value.d = k == 1 ? f(DualComplex<R>::variable(z)).d : Complex<R>(0);
      return out;
    }
  }
  auto x = DualComplex<R>::variable(z);
  if (abs(z) > R(kReciprocalChartRadius)) {
    DualComplex<R> w = DualComplex<R>(Complex<R>(1)) / x;
    DualComplex<R> g = DualComplex<R>(f.scale);
    R log_mod = log(abs(f.scale)) + R(E) * log(abs(z));
    for (auto& fac : f.factors) {
      DualComplex<R> r = fac.reversed(w);
      if (abs(r.v) == R(0)) {
        out.at_infinity = true;
        return out;
      }
      log_mod += R(fac.power) * log(abs(r.v));
      g = g * ipow(r, fac.power);
    }
    if (log_mod > R(std::log(std::numeric_limits<double>::max()) / 2)) {
      out.at_infinity = true;
      return out;
    }
    out.value = g * ipow(x, E) + DualComplex<R>(f.shift);
    return out;
  }
  DualComplex<R> acc = DualComplex<R>(f.scale) * ipow(x, f.z_power);
  for (auto& fac : f.factors) {
    DualComplex<R> v = fac(x);
    if (fac.power < 0) {
      R size(0);
      for (auto& t : fac.terms) size += abs(t.c) * ipow(abs(z), t.e);
      if (abs(v.v) <= R(64) * epsilon<R>() * size) {
        out.at_infinity = true;
        out.local_degree = -fac.power;
        return out;
      }
    }
    acc = acc * ipow(v, fac.power);
  }
  out.value = acc + DualComplex<R>(f.shift);
  if (!finite(out.value.v)) out.at_infinity = true;
  return out;
}

template <class R>
Evaluation<R> evaluate(const RationalMap<R>& f, const Complex<R>& z) {
  return evaluate(f, SpherePoint<R>{z, false});
}

inline Evaluation<mp_real> evaluate(const MapSpec& spec, const SpherePoint<mp_real>& z) {
  return evaluate(rational_map_mp(spec), z);
}

}  // namespace cantor
