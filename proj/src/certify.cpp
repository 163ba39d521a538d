#include "cantor/certify.hpp"

#include <algorithm>

namespace cantor {

namespace {

mp_real tolerance_for(const MapSpec& spec, int slack) {
  return pow(mp_real(10), -(spec.precision.significant_digits - slack));
}

// Truncated power series in one variable.
using Series = std::vector<mp_complex>;

Series series_mul(const Series& a, const Series& b, size_t order) {
  Series c(order, mp_complex(0));
  for (size_t i = 0; i < a.size() && i < order; ++i)
    for (size_t j = 0; j < b.size() && i + j < order; ++j) c[i + j] += a[i] * b[j];
  return c;
}

Series series_inverse(const Series& a, size_t order) {
  Series c(order, mp_complex(0));
  c[0] = mp_complex(1) / a[0];
  for (size_t k = 1; k < order; ++k) {
    mp_complex acc(0);
    for (size_t j = 1; j <= k && j < a.size(); ++j) acc += a[j] * c[k - j];
    c[k] = -acc * c[0];
  }
  return c;
}

Series series_pow(const Series& a, int power, size_t order) {
  Series base = power < 0 ? series_inverse(a, order) : a;
  Series out(order, mp_complex(0));
  out[0] = 1;
  for (int k = 0; k < std::abs(power); ++k) out = series_mul(out, base, order);
  return out;
}

// Smallest m >= 1 with a nonzero coefficient in prod_k q_k^{power_k}.
int first_nonconstant(const std::vector<std::pair<Series, int>>& parts, size_t order) {
  Series g(order, mp_complex(0));
  g[0] = 1;
  for (auto& [q, pw] : parts) g = series_mul(g, series_pow(q, pw, order), order);
  mp_real scale = 0;
  for (auto& c : g) scale = std::max(scale, mp_real(abs(c)));
  mp_real tol = scale * pow(mp_real(10), -(static_cast<int>(mp_real::default_precision()) - 10));
  for (size_t m = 1; m < order; ++m)
    if (abs(g[m]) > tol) return static_cast<int>(m);
  return static_cast<int>(order);
}

// Critical points away from the rings, 0 and infinity, found by Newton from a
// log-spaced net of seeds and kept only when new.
std::vector<mp_complex> free_critical_points(const RationalMap<mp_real>& f, const std::vector<CriticalPoint>& known,
                                             int wanted, const mp_real& tol) {
  std::vector<mp_complex> found;
  auto is_new = [&](const mp_complex& z) {
    mp_real sep = mp_real(1e-12) * std::max(mp_real(1), mp_real(abs(z)));
    for (auto& p : known)
      if (p.where == CriticalPoint::Where::Ring && abs(p.location - z) < std::max(sep, mp_real(1e-6) * abs(z))) return false;
    for (auto& q : found)
      if (abs(q - z) < std::max(sep, mp_real(1e-6) * abs(z))) return false;
    return true;
  };
  auto eq = [&](const DualComplex<mp_real>& z) { return f.critical_equation(z); };
  for (int k = -24; k <= 24 && static_cast<int>(found.size()) < wanted; ++k) {
    for (int j = 0; j < 16 && static_cast<int>(found.size()) < wanted; ++j) {
      mp_complex seed = pow(mp_real(10), k) * cis(pi<mp_real>() * mp_real(2 * j + 1) / 16);
      try {
        mp_complex z = newton_root<mp_real>(eq, seed, tol * std::max(mp_real(1), mp_real(abs(seed))), 80).root;
        if (!finite(z) || abs(z) == 0 || abs(z) > mp_real(1e30)) continue;
        if (abs(eq(DualComplex<mp_real>(z, mp_complex(0))).v) > tol * 1000) continue;
        if (is_new(z)) found.push_back(z);
      } catch (const Error&) {
      }
    }
  }
  return found;
}

}  // namespace

int local_degree_at_zero(const RationalMap<mp_real>& f) {
  int k = f.order_at_zero();
  if (k != 0) return std::abs(k);
  size_t order = static_cast<size_t>(f.degree()) + 2;
  std::vector<std::pair<Series, int>> parts;
  for (auto& fac : f.factors) {
    int o = fac.order_at_zero();
    Series q(order, mp_complex(0));
    for (auto& t : fac.terms)
      if (static_cast<size_t>(t.e - o) < order) q[static_cast<size_t>(t.e - o)] += t.c;
    parts.emplace_back(q, fac.power);
  }
  return first_nonconstant(parts, order);
}

int local_degree_at_infinity(const RationalMap<mp_real>& f) {
  int E = f.exponent_at_infinity();
  if (E != 0) return std::abs(E);
  size_t order = static_cast<size_t>(f.degree()) + 2;
  std::vector<std::pair<Series, int>> parts;
  for (auto& fac : f.factors) {
    int m = fac.degree();
    Series q(order, mp_complex(0));
    for (auto& t : fac.terms)
      if (static_cast<size_t>(m - t.e) < order) q[static_cast<size_t>(m - t.e)] += t.c;
    parts.emplace_back(q, fac.power);
  }
  return first_nonconstant(parts, order);
}

ParabolicReport check_parabolic(const MapSpec& spec, std::optional<mp_real> tolerance) {
  ParabolicReport rep;
  rep.tolerance = tolerance ? *tolerance : tolerance_for(spec, 12);
  RationalMap<mp_real> f = rational_map_mp(spec);
  auto at = [&](const mp_real& x) { return f(DualComplex<mp_real>::variable(mp_complex(x))); };
  switch (spec.kind) {
    case MapKind::ParabolicP:
    case MapKind::RefPolyG:
    case MapKind::RefPolyGmn:
    case MapKind::RefRatH:
    case MapKind::RefRatHmn: {
      auto v = at(1);
      rep.residuals = {{"|f(1)-1|", abs(v.v - mp_complex(1))}, {"|f'(1)-1|", abs(v.d - mp_complex(1))}};
      break;
    }
    case MapKind::ParabolicQ: {
      mp_real p = spec.inner_parabolic_point();
      auto v = at(1);
      auto w = at(p);
      rep.residuals = {{"|f(1)-1|", abs(v.v - mp_complex(1))},
                       {"|f'(1)-1|", abs(v.d - mp_complex(1))},
                       {"|f(s^nu)-s^nu|", abs(w.v - mp_complex(p))},
                       {"|f'(s^nu)-1|", abs(w.d - mp_complex(1))}};
      break;
    }
    case MapKind::ParabolicR: {
      mp_real z0 = spec.R().z0;
      auto v = at(1);
      auto w = at(z0);
      rep.residuals = {{"|f(1)-z0|", abs(v.v - mp_complex(z0))},
                       {"|f(z0)-1|", abs(w.v - mp_complex(1))},
                       {"|f'(1)f'(z0)-1|", abs(v.d * w.d - mp_complex(1))}};
      break;
    }
    case MapKind::HyperbolicF:
      throw Unsupported("hyperbolic maps have no parabolic point to check");
  }
  rep.max_residual = 0;
  for (auto& r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r.value);
  rep.passed = rep.max_residual < rep.tolerance;
  return rep;
}

std::vector<ReferencePoint> reference_critical_points(const MapSpec& spec) {
  const DegreeVector& d = spec.deg();
  std::vector<ReferencePoint> out;
  for (int i = 1; i < d.n(); ++i) {
    mp_real r = rational_pow(mp_real(d.d(i + 1)) / d.d(i), 1, d.D(i));
    const mp_complex& v = spec.rings.values[static_cast<size_t>(i - 1)];
    for (int j = 1; j <= d.D(i); ++j) {
      mp_complex w = r * v * cis(pi<mp_real>() * mp_real(2 * j - 1) / mp_real(d.D(i)));
      out.push_back({i, j, w});
    }
  }
  return out;
}

CriticalReport certify_critical_points(const MapSpec& spec) {
  CriticalReport rep;
  RationalMap<mp_real> f = rational_map_mp(spec);
  const mp_real tol = tolerance_for(spec, 10);
  const mp_real root_s = sqrt(spec.rings.s);
  auto eq = [&](const DualComplex<mp_real>& z) { return f.critical_equation(z); };
  bool all_ok = true;
  for (const ReferencePoint& ref : reference_critical_points(spec)) {
    CriticalPoint cp;
    cp.ring = ref.ring;
    cp.j = ref.j;
    cp.seed = ref.point;
    cp.bound = root_s * spec.rings.modulus(ref.ring);
    try {
      cp.location = newton_root<mp_real>(eq, ref.point, tol, 60).root;
      cp.distance = abs(cp.location - cp.seed);
      cp.within = cp.distance < cp.bound;
    } catch (const Error& e) {
      cp.location = ref.point;
      cp.within = false;
      if (rep.failure.empty()) rep.failure = e.what();
    }
    if (!cp.within) {
      all_ok = false;
      if (rep.failure.empty())
        rep.failure = "critical point of ring " + std::to_string(cp.ring) + " escaped its ball (distance " +
                      to_decimal(cp.distance, 6) + " >= " + to_decimal(cp.bound, 6) + ")";
    }
    rep.points.push_back(cp);
  }
  size_t ring_count = rep.points.size();
  rep.min_separation = -1;
  for (size_t a = 0; a < ring_count; ++a)
    for (size_t b = a + 1; b < ring_count; ++b) {
      mp_real sep = abs(rep.points[a].location - rep.points[b].location);
      if (rep.min_separation < 0 || sep < rep.min_separation) rep.min_separation = sep;
    }
  bool distinct = ring_count < 2 || rep.min_separation > tol * 1000;
  if (!distinct && rep.failure.empty()) rep.failure = "two refined critical points coincide";

  int m0 = local_degree_at_zero(f) - 1;
  int minf = local_degree_at_infinity(f) - 1;
  if (m0 > 0) {
    CriticalPoint cp;
    cp.where = CriticalPoint::Where::Origin;
    cp.multiplicity = m0;
    rep.points.push_back(cp);
  }
  if (minf > 0) {
    CriticalPoint cp;
    cp.where = CriticalPoint::Where::Infinity;
    cp.multiplicity = minf;
    rep.points.push_back(cp);
  }
  for (auto& p : rep.points) rep.total_multiplicity += p.multiplicity;
  rep.expected_total = 2 * f.degree() - 2;
  if (rep.total_multiplicity < rep.expected_total) {
    for (auto& z : free_critical_points(f, rep.points, rep.expected_total - rep.total_multiplicity, tol)) {
      CriticalPoint cp;
      cp.where = CriticalPoint::Where::Free;
      cp.location = z;
      rep.points.push_back(cp);
      ++rep.total_multiplicity;
    }
  }
  if (rep.total_multiplicity != rep.expected_total && rep.failure.empty())
    rep.failure = "critical multiplicities sum to " + std::to_string(rep.total_multiplicity) + ", expected " +
                  std::to_string(rep.expected_total);
  rep.passed = all_ok && distinct && rep.total_multiplicity == rep.expected_total;
  return rep;
}

std::vector<CanonicalTrap> canonical_traps(const MapSpec& spec) {
  using Reg = Region<mp_real>;
  std::vector<CanonicalTrap> out;
  const mp_complex one(1);
  CanonicalTrap outer{"U_inf", TrapLabel::Outer, Reg::disk_complement(mp_complex(-1), mp_real(2)), false, one};
  switch (spec.kind) {
    case MapKind::ParabolicP: {
      out.push_back(outer);
      const DegreeVector& d = spec.deg();
      if (d.n() % 2 == 1) {
        mp_real r = pow(mp_real(d.dmax()), 4) * spec.rings.s;
        out.push_back({"U_0", TrapLabel::Origin, Reg::disk(mp_complex(0), r), false, std::nullopt});
      }
      break;
    }
    case MapKind::ParabolicQ: {
      out.push_back(outer);
      mp_real p = spec.inner_parabolic_point();
      out.push_back({"U_0", TrapLabel::Inner, Reg::disk(mp_complex(p / 4), 3 * p / 4), false, mp_complex(p)});
      break;
    }
    case MapKind::ParabolicR: {
      outer.second_iterate = true;
      out.push_back(outer);
      mp_real z0 = spec.R().z0;
      out.push_back({"U_0", TrapLabel::Inner, Reg::disk(mp_complex(z0 / 3), 2 * z0 / 3), true, mp_complex(z0)});
      break;
    }
    case MapKind::RefRatH:
    case MapKind::RefRatHmn:
      outer.name = "D'_2";
      out.push_back(outer);
      break;
    case MapKind::RefPolyG:
    case MapKind::RefPolyGmn:
      out.push_back({"D_1/2", TrapLabel::Outer, Reg::disk(mp_complex(mp_real(1) / 2), mp_real(1) / 2), false, one});
      break;
    case MapKind::HyperbolicF:
      break;
  }
  return out;
}

TrapReport<mp_real> certify_trapping(const MapSpec& spec, const CanonicalTrap& trap, int sample_count) {
  RationalMap<mp_real> f = rational_map_mp(spec);
  if (trap.second_iterate) return certify_trapping<mp_real>(SecondIterate<RationalMap<mp_real>>{f}, trap.region, sample_count, trap.parabolic);
  return certify_trapping<mp_real>(f, trap.region, sample_count, trap.parabolic);
}

std::optional<CertifiedTrap> find_certified_trap(const MapSpec& spec, const CanonicalTrap& trap, int sample_count,
                                                 int max_attempts) {
  CanonicalTrap t = trap;
  const bool complement = t.region.shape == Region<mp_real>::Shape::DiskComplement;
  const mp_real factor = complement ? mp_real(5) / 4 : mp_real(4) / 5;
  for (int k = 0; k < max_attempts; ++k) {
    TrapReport<mp_real> rep = certify_trapping(spec, t, sample_count);
    if (rep.passed) return CertifiedTrap{t, rep, k > 0};
    if (t.parabolic)
      t.region.center = *t.parabolic + (t.region.center - *t.parabolic) * factor;
    t.region.r1 *= factor;
    t.region.r2 *= factor;
  }
  return std::nullopt;
}

MapSpec limit_map(const MapSpec& spec, LimitSide side) {
  const DegreeVector& d = spec.deg();
  const int d1 = d.d(1), dn = d.d(d.n());
  switch (spec.kind) {
    case MapKind::ParabolicP:
      if (side == LimitSide::Inner) throw Unsupported("P has no inner limit map");
      return make_h(d1);
    case MapKind::ParabolicQ:
      return side == LimitSide::Outer ? make_h(d1) : make_h(dn);
    case MapKind::ParabolicR:
      return side == LimitSide::Outer ? make_h(d1, dn) : make_h(d1 * dn);
    default:
      throw Unsupported("no limit map for " + to_string(spec.kind));
  }
}

mp_real limit_map_deviation(const MapSpec& spec, const std::vector<mp_complex>& samples, LimitSide side) {
  RationalMap<mp_real> f = rational_map_mp(spec);
  RationalMap<mp_real> L = rational_map_mp(limit_map(spec, side));
  auto sup = [&](auto&& F) {
    mp_real worst = 0;
    for (auto& z : samples) {
      mp_complex a = F(z), b = L(z);
      if (!finite(a) || !finite(b)) return mp_real(std::numeric_limits<double>::infinity());
      worst = std::max(worst, mp_real(abs(a - b)));
    }
    return worst;
  };
  if (spec.kind == MapKind::ParabolicR) {
    SecondIterate<RationalMap<mp_real>> ff{f};
    if (side == LimitSide::Outer) return sup(ff);
    return sup(ReciprocalConjugate<SecondIterate<RationalMap<mp_real>>, mp_real>{ff, mp_complex(spec.R().z0)});
  }
  if (side == LimitSide::Inner)
    return sup(ReciprocalConjugate<RationalMap<mp_real>, mp_real>{f, mp_complex(spec.inner_parabolic_point())});
  return sup(f);
}

std::vector<mp_complex> circle_samples(const mp_real& radius, int count) {
  std::vector<mp_complex> out;
  for (int k = 0; k < count; ++k) out.push_back(radius * cis(2 * pi<mp_real>() * mp_real(k) / mp_real(count)));
  return out;
}

std::vector<ScheduleOrderRow> schedule_orders(MapKind kind, const DegreeVector& d, const mp_real& s) {
  RingParameters rings = make_schedule(kind, d, s);
  std::vector<ScheduleOrderRow> out;
  mp_real expo = 0;
  for (int i = 1; i < d.n(); ++i) {
    expo += mp_real(1) / d.d(i);
    ScheduleOrderRow row;
    row.ring = i;
    row.log_ratio = log(rings.modulus(i)) / log(s);
    row.exponent = expo;
    row.relative_error = abs(row.log_ratio - expo) / expo;
    out.push_back(row);
  }
  return out;
}

mp_real schedule_separation(MapKind kind, const DegreeVector& d, const mp_real& s) {
  RingParameters rings = make_schedule(kind, d, s);
  mp_real bound = pow(s, 1 + mp_real(2) / d.dmax());
  mp_real worst = 0;
  for (int i = 2; i < d.n(); ++i)
    for (int j = 1; j < i; ++j)
      worst = std::max(worst, mp_real(pow(rings.modulus(i) / rings.modulus(j), d.D(i)) / bound));
  return worst;
}

}  // namespace cantor
