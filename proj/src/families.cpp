#include "cantor/families.hpp"

#include <algorithm>
#include <map>

namespace cantor {

DegreeVector::DegreeVector(std::vector<int> degrees) : d_(std::move(degrees)) {
  if (d_.size() < 2) throw ConstraintViolated("need at least two degrees, got " + std::to_string(d_.size()));
  Rational total;
  for (int di : d_) {
    if (di < 2) throw ConstraintViolated("every degree must be at least 2, got " + std::to_string(di));
    total = total + Rational(1, di);
  }
  if (!(total < Rational(1)))
    throw ConstraintViolated("sum of 1/d_i must be < 1, got " + std::to_string(total.p) + "/" +
                             std::to_string(total.q));
}

DegreeVector validate_degrees(const std::vector<int>& raw) { return DegreeVector(raw); }

int DegreeVector::dmax() const { return *std::max_element(d_.begin(), d_.end()); }
int DegreeVector::sum() const { return std::accumulate(d_.begin(), d_.end(), 0); }

Rational DegreeVector::nu_exponent() const {
  Rational s;
  for (int i = 1; i < n(); ++i) s = s + Rational(1, d(i));
  return Rational(d(n()), d(n()) - 1) * s;
}

namespace {
const std::map<MapKind, std::string>& kind_names() {
  static const std::map<MapKind, std::string> names = {
      {MapKind::HyperbolicF, "F"}, {MapKind::ParabolicP, "P"},   {MapKind::ParabolicQ, "Q"},
      {MapKind::ParabolicR, "R"},  {MapKind::RefPolyG, "g"},     {MapKind::RefPolyGmn, "gmn"},
      {MapKind::RefRatH, "h"},     {MapKind::RefRatHmn, "hmn"}};
  return names;
}

mp_real kappa(MapKind kind, const DegreeVector& d) {
  return kind == MapKind::ParabolicQ ? d.tau<mp_real>() : mp_real(1);
}

int sign_pow(int k) { return k % 2 == 0 ? 1 : -1; }

Factor<mp_real> ring_factor(int D, const mp_complex& v, int power) {
  Factor<mp_real> f;
  f.power = power;
  f.terms.push_back({mp_complex(1), D});
  mp_complex c = -ipow(v, D);
  if (c != mp_complex(0)) f.terms.push_back({c, 0});
  return f;
}

void require_rings(const DegreeVector& d, const RingParameters& rings) {
  if (rings.values.size() != static_cast<size_t>(d.n() - 1))
    throw ConstraintViolated("expected " + std::to_string(d.n() - 1) + " ring values, got " +
                             std::to_string(rings.values.size()));
}
}  // namespace

std::string to_string(MapKind kind) { return kind_names().at(kind); }

MapKind parse_kind(const std::string& text) {
  for (auto& [k, name] : kind_names())
    if (name == text) return k;
  throw ParseError("unknown family '" + text + "' (expected F, P, Q, R, g, gmn, h, hmn)");
}

bool has_degrees(MapKind kind) {
  return kind == MapKind::HyperbolicF || kind == MapKind::ParabolicP || kind == MapKind::ParabolicQ ||
         kind == MapKind::ParabolicR;
}

RingParameters make_schedule(MapKind kind, const DegreeVector& d, const mp_real& s, std::vector<mp_real> phases) {
  if (!(s > 0)) throw ConstraintViolated("schedule parameter s must be positive");
  if (!has_degrees(kind)) return {};
  if (phases.empty()) phases.assign(static_cast<size_t>(d.n() - 1), mp_real(0));
  if (phases.size() != static_cast<size_t>(d.n() - 1))
    throw ConstraintViolated("expected " + std::to_string(d.n() - 1) + " phases");
  if (kind == MapKind::ParabolicQ || kind == MapKind::ParabolicR)
    for (auto& ph : phases)
      if (ph != 0) throw ConstraintViolated("Q and R ring parameters must be positive reals");
  mp_real k = kappa(kind, d);
  RingParameters rings;
  rings.s = s;
  rings.phases = phases;
  mp_real mod = rational_pow(mp_real(d.dmax() * d.dmax()) * k * s, 1, d.d(1));
  for (int i = 1; i < d.n(); ++i) {
    if (i > 1) mod *= rational_pow(k * s, 1, d.d(i));
    rings.values.push_back(mod * cis(phases[static_cast<size_t>(i - 1)]));
  }
  return rings;
}

RingParameters explicit_rings(MapKind kind, const DegreeVector& d, std::vector<mp_complex> values) {
  if (values.size() != static_cast<size_t>(d.n() - 1))
    throw ConstraintViolated("expected " + std::to_string(d.n() - 1) + " ring values");
  RingParameters rings;
  rings.scheduled = false;
  for (auto& v : values) {
    rings.phases.push_back(arg(v) < 0 ? mp_real(arg(v) + 2 * pi<mp_real>()) : mp_real(arg(v)));
  }
  if (kind == MapKind::ParabolicQ || kind == MapKind::ParabolicR)
    for (auto& v : values)
      if (v.imag() != 0 || v.real() <= 0) throw ConstraintViolated("Q and R ring parameters must be positive reals");
  rings.values = std::move(values);
  rings.s = ipow(abs(rings.values[0]), d.d(1)) / (mp_real(d.dmax() * d.dmax()) * kappa(kind, d));
  return rings;
}

PCoefficients coefficients_P(const DegreeVector& d, const RingParameters& rings) {
  require_rings(d, rings);
  mp_complex C(0), prod(1);
  for (int i = 1; i < d.n(); ++i) {
    mp_complex alpha = ipow(rings.values[static_cast<size_t>(i - 1)], d.D(i));
    mp_complex one_minus = mp_complex(1) - alpha;
    if (one_minus == mp_complex(0)) throw DegenerateDenominator("a_" + std::to_string(i) + "^{D_i} = 1");
    C += mp_real(sign_pow(i - 1) * d.D(i)) * alpha / one_minus;
    prod *= ipow(one_minus, sign_pow(i));
  }
  mp_complex denom = mp_complex(1) + C;
  if (denom == mp_complex(0)) throw DegenerateDenominator("1 + C_n = 0");
  return {prod / denom, C / denom, C};
}

const DegreeVector& MapSpec::deg() const {
  if (!degrees) throw Unsupported(to_string(kind) + " maps carry no degree vector");
  return *degrees;
}

mp_real MapSpec::inner_parabolic_point() const {
  if (kind == MapKind::ParabolicQ) return pow(rings.s, Q().nu);
  if (kind == MapKind::ParabolicR) return R().z0;
  throw Unsupported("only Q and R maps have an inner parabolic point");
}

MapSpec make_P(const DegreeVector& d, const RingParameters& rings, PrecisionContext precision) {
  MapSpec m;
  m.kind = MapKind::ParabolicP;
  m.degrees = d;
  m.rings = rings;
  m.coeffs = coefficients_P(d, rings);
  m.precision = precision;
  return m;
}

MapSpec make_Q(const DegreeVector& d, const RingParameters& rings, const QCoefficients& c, PrecisionContext precision) {
  require_rings(d, rings);
  MapSpec m;
  m.kind = MapKind::ParabolicQ;
  m.degrees = d;
  m.rings = rings;
  m.coeffs = c;
  m.precision = precision;
  return m;
}

MapSpec make_R(const DegreeVector& d, const RingParameters& rings, const RCoefficients& c, PrecisionContext precision) {
  require_rings(d, rings);
  MapSpec m;
  m.kind = MapKind::ParabolicR;
  m.degrees = d;
  m.rings = rings;
  m.coeffs = c;
  m.precision = precision;
  return m;
}

MapSpec make_F(int p, const DegreeVector& d, const RingParameters& rings, PrecisionContext precision) {
  if (p != 0 && p != 1) throw ConstraintViolated("p must be 0 or 1");
  require_rings(d, rings);
  MapSpec m;
  m.kind = MapKind::HyperbolicF;
  m.degrees = d;
  m.p = p;
  m.rings = rings;
  m.precision = precision;
  return m;
}

namespace {
MapSpec make_ref(MapKind kind, int m, int n) {
  if (n < 2 || (kind == MapKind::RefPolyGmn || kind == MapKind::RefRatHmn) && m < 1)
    throw ConstraintViolated("reference map indices out of range");
  MapSpec s;
  s.kind = kind;
  s.ref_m = m;
  s.ref_n = n;
  return s;
}
}  // namespace

MapSpec make_g(int n) { return make_ref(MapKind::RefPolyG, 0, n); }
MapSpec make_g(int m, int n) { return make_ref(MapKind::RefPolyGmn, m, n); }
MapSpec make_h(int n) { return make_ref(MapKind::RefRatH, 0, n); }
MapSpec make_h(int m, int n) { return make_ref(MapKind::RefRatHmn, m, n); }

RationalMap<mp_real> rational_map_mp(const MapSpec& spec) {
  RationalMap<mp_real> f;
  auto monomial = [](mp_real c, int e) { return Monomial<mp_real>{mp_complex(c), e}; };
  switch (spec.kind) {
    case MapKind::ParabolicP: {
      const auto& d = spec.deg();
      const auto& c = spec.P();
      int n = d.n();
      f.scale = c.A * mp_real(d.d(1));
      f.z_power = sign_pow(n - 1) * d.d(n);
      f.factors.push_back({{monomial(d.d(1) - 1, d.d(1)), monomial(1, 0)}, -1});
      for (int i = 1; i < n; ++i) f.factors.push_back(ring_factor(d.D(i), spec.rings.values[i - 1], sign_pow(i - 1)));
      f.shift = c.B;
      break;
    }
    case MapKind::ParabolicQ: {
      const auto& d = spec.deg();
      const auto& c = spec.Q();
      int n = d.n();
      f.scale = mp_complex(d.d(1));
      f.z_power = d.d(n);
      Factor<mp_real> den;
      den.power = -1;
      den.terms = {monomial(mp_real(d.d(1) - 1) * c.X, d.d(1)), monomial(c.Y, 1), monomial(c.Z, 0)};
      f.factors.push_back(den);
      for (int i = 1; i < n; ++i) f.factors.push_back(ring_factor(d.D(i), spec.rings.values[i - 1], sign_pow(i - 1)));
      f.shift = c.W;
      break;
    }
    case MapKind::ParabolicR: {
      const auto& d = spec.deg();
      const auto& c = spec.R();
      int n = d.n();
      f.scale = c.S;
      f.z_power = -d.d(n);
      for (int i = 1; i < n; ++i) f.factors.push_back(ring_factor(d.D(i), spec.rings.values[i - 1], sign_pow(i)));
      f.shift = c.T;
      break;
    }
    case MapKind::HyperbolicF: {
      const auto& d = spec.deg();
      int n = d.n();
      f.z_power = sign_pow(n - spec.p) * d.d(1);
      for (int i = 1; i < n; ++i)
        f.factors.push_back(ring_factor(d.D(i), spec.rings.values[i - 1], sign_pow(n - i - spec.p)));
      break;
    }
    case MapKind::RefPolyG: {
      int n = spec.ref_n;
      f.scale = mp_real(1) / n;
      f.factors.push_back({{monomial(1, n), monomial(n - 1, 0)}, 1});
      break;
    }
    case MapKind::RefPolyGmn: {
      int m = spec.ref_m, n = spec.ref_n;
      f.scale = ipow(mp_real(1) / (m * n), n);
      f.factors.push_back({{monomial(1, m), monomial(m * n - 1, 0)}, n});
      break;
    }
    case MapKind::RefRatH: {
      int n = spec.ref_n;
      f.scale = mp_complex(n);
      f.z_power = n;
      f.factors.push_back({{monomial(n - 1, n), monomial(1, 0)}, -1});
      break;
    }
    case MapKind::RefRatHmn: {
      int m = spec.ref_m, n = spec.ref_n;
      f.scale = ipow(mp_real(m * n), n);
      f.z_power = m * n;
      f.factors.push_back({{monomial(m * n - 1, m), monomial(1, 0)}, -n});
      break;
    }
  }
  return f;
}

}  // namespace cantor
