#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cantor/families.hpp"
#include "cantor/newton.hpp"

namespace cantor {

// ---------------------------------------------------------------------------
// Map combinators over anything with a template call operator.

template <class M>
struct SecondIterate {
  const M& f;
  template <class T>
  T operator()(const T& z) const { return f(f(z)); }
};

// psi o f o psi^{-1} with psi(z) = c / z.
template <class M, class R>
struct ReciprocalConjugate {
  const M& f;
  Complex<R> c;
  template <class T>
  T operator()(const T& z) const { return T(c) / f(T(c) / z); }
};

// ---------------------------------------------------------------------------
// Regions

template <class R>
struct Region {
  enum class Shape { Disk, DiskComplement, Annulus };
  Shape shape = Shape::Disk;
  Complex<R> center{};
  R r1{};  // radius, or inner radius of an annulus
  R r2{};  // outer radius of an annulus

  static Region disk(Complex<R> c, R r) { return {Shape::Disk, c, r, r}; }
  static Region disk_complement(Complex<R> c, R r) { return {Shape::DiskComplement, c, r, r}; }
  static Region annulus(Complex<R> c, R inner, R outer) {
    if (!(inner < outer)) throw ConstraintViolated("annulus needs r_inner < r_outer");
    return {Shape::Annulus, c, inner, outer};
  }

  // Signed distance into the region (positive strictly inside); infinity counts
  // as inside only the disk complement.
  R margin(const SpherePoint<R>& p) const {
    using std::abs;
    if (p.infinite || !finite(p.z)) return shape == Shape::DiskComplement ? R(1) : R(-1);
    R rho = abs(p.z - center);
    switch (shape) {
      case Shape::Disk: return r1 - rho;
      case Shape::DiskComplement: return rho - r1;
      case Shape::Annulus: return std::min<R>(rho - r1, r2 - rho);
    }
    return R(-1);
  }
  bool contains(const SpherePoint<R>& p) const { return margin(p) > R(0); }
  bool contains(const Complex<R>& z) const { return contains(SpherePoint<R>{z, false}); }

  R boundary_diameter() const { return R(2) * (shape == Shape::Annulus ? r2 : r1); }

  // Boundary samples: one circle for disks, both circles for annuli (k < 2N).
  std::vector<Complex<R>> boundary_samples(int count) const {
    std::vector<Complex<R>> out;
    auto circle = [&](R r) {
      for (int k = 0; k < count; ++k) out.push_back(center + r * cis(R(2) * pi<R>() * R(k) / R(count)));
    };
    circle(r1);
    if (shape == Shape::Annulus) circle(r2);
    return out;
  }

  template <class S>
  Region<S> cast() const {
    return {static_cast<typename Region<S>::Shape>(shape), complex_cast<S>(center), real_cast<S>(r1), real_cast<S>(r2)};
  }
  std::string describe() const;
};

template <class R>
std::string Region<R>::describe() const {
  std::string c = "(" + to_decimal(center.real(), 8) + "," + to_decimal(center.imag(), 8) + ")";
  switch (shape) {
    case Shape::Disk: return "Disk" + c + " r=" + to_decimal(r1, 8);
    case Shape::DiskComplement: return "DiskComplement" + c + " r=" + to_decimal(r1, 8);
    case Shape::Annulus: return "Annulus" + c + " r=" + to_decimal(r1, 8) + ".." + to_decimal(r2, 8);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parabolic points

struct Residual {
  std::string name;
  mp_real value;
};

struct ParabolicReport {
  bool passed = false;
  mp_real tolerance;
  mp_real max_residual;
  std::vector<Residual> residuals;
};

// Default tolerance 10^-(digits-12).
ParabolicReport check_parabolic(const MapSpec& spec, std::optional<mp_real> tolerance = {});

// ---------------------------------------------------------------------------
// Critical points

struct ReferencePoint {
  int ring = 0;  // 1-based
  int j = 0;     // 1..D_i
  mp_complex point;
};

std::vector<ReferencePoint> reference_critical_points(const MapSpec& spec);

struct CriticalPoint {
  enum class Where { Ring, Origin, Infinity, Free };
  Where where = Where::Ring;
  int ring = 0;
  int j = 0;
  int multiplicity = 1;
  mp_complex location;
  mp_complex seed;
  mp_real distance = 0;  // |location - seed|
  mp_real bound = 0;     // s^{1/2} |v_ring|
  bool within = true;
};

struct CriticalReport {
  bool passed = false;
  std::vector<CriticalPoint> points;
  int total_multiplicity = 0;
  int expected_total = 0;
  mp_real min_separation;  // smallest distance between distinct ring critical points
  std::string failure;
};

CriticalReport certify_critical_points(const MapSpec& spec);

// Local degree of f at 0 and at infinity (multiplicity as a preimage of its image).
int local_degree_at_zero(const RationalMap<mp_real>& f);
int local_degree_at_infinity(const RationalMap<mp_real>& f);

// ---------------------------------------------------------------------------
// Trapping regions

template <class R>
struct TrapReport {
  bool passed = false;
  int samples = 0;
  int failures = 0;
  int petal_samples = 0;   // samples decided by the rectified-coordinate test
  Complex<R> worst_sample{};
  SpherePoint<R> worst_image{};
  R worst_margin{};        // smallest margin / boundary diameter
  std::string region;
};

// u = -1/(a (z - p)) with a = f''(p)/2; the map acts like u -> u + 1 near p.
template <class R>
struct Rectifier {
  Complex<R> p;
  Complex<R> a;
  Complex<R> operator()(const Complex<R>& z) const { return Complex<R>(-1) / (a * (z - p)); }
};

template <class R, class M>
Rectifier<R> make_rectifier(const M& f, const Complex<R>& p) {
  using std::abs;
  using std::pow;
  R scale = std::max<R>(R(1), abs(p));
  R h = scale * pow(epsilon<R>(), R(1) / R(3));
  Complex<R> up = f(DualComplex<R>::variable(p + h)).d;
  Complex<R> dn = f(DualComplex<R>::variable(p - h)).d;
  return {p, (up - dn) / (R(4) * h)};
}

template <class R, class M>
SpherePoint<R> image_of(const M& f, const Complex<R>& z) {
  Complex<R> w = f(z);
  if (!finite(w)) return SpherePoint<R>::at_infinity();
  return {w, false};
}

// Every boundary sample must map strictly inside, except samples whose image lies
// within 1e-6 diam of the parabolic point p: those must move right in the
// rectified coordinate or land on p itself.
template <class R, class M>
TrapReport<R> certify_trapping(const M& f, const Region<R>& region, int sample_count,
                               std::optional<Complex<R>> parabolic = std::nullopt) {
  using std::abs;
  TrapReport<R> rep;
  rep.region = region.describe();
  const R diam = region.boundary_diameter();
  std::optional<Rectifier<R>> rect;
  if (parabolic) rect = make_rectifier<R>(f, *parabolic);
  bool first = true;
  for (const Complex<R>& z : region.boundary_samples(sample_count)) {
    ++rep.samples;
    SpherePoint<R> w = image_of<R>(f, z);
    R margin = region.margin(w) / diam;
    bool ok = margin > R(0);
    if (parabolic && !w.infinite && abs(w.z - *parabolic) < R(1e-6) * diam) {
      ++rep.petal_samples;
      const R at_p = R(64) * epsilon<R>() * diam;
      if (abs(z - *parabolic) <= at_p || abs(w.z - *parabolic) <= at_p) {
        ok = true;
      } else {
        ok = (*rect)(w.z).real() > (*rect)(z).real();
      }
      margin = ok ? R(0) : R(-1);
    }
    if (!ok) ++rep.failures;
    if (first || margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_sample = z;
      rep.worst_image = w;
      first = false;
    }
  }
  rep.passed = rep.failures == 0;
  return rep;
}

// A canonical trap of a map family, with the map it is certified against.
enum class TrapLabel { Outer, Inner, Origin };

struct CanonicalTrap {
  std::string name;          // "U_inf", "U_0", "D_r", "D'_r"
  TrapLabel label = TrapLabel::Outer;
  Region<mp_real> region;
  bool second_iterate = false;
  std::optional<mp_complex> parabolic;  // parabolic point on the boundary
};

std::vector<CanonicalTrap> canonical_traps(const MapSpec& spec);

TrapReport<mp_real> certify_trapping(const MapSpec& spec, const CanonicalTrap& trap, int sample_count = 512);

// Shrink (or, for complements, grow) a canonical trap until its boundary check passes.
struct CertifiedTrap {
  CanonicalTrap trap;
  TrapReport<mp_real> report;
  bool adjusted = false;  // region differs from the canonical one
};
std::optional<CertifiedTrap> find_certified_trap(const MapSpec& spec, const CanonicalTrap& trap, int sample_count = 512,
                                                 int max_attempts = 40);

// ---------------------------------------------------------------------------
// Limit maps

enum class LimitSide { Outer, Inner };

// sup |f(z) - L(z)| over the samples: P, Q against h_{d_1}; Q conjugated by s^nu/z
// against h_{d_n}; R o R against h_{d_1,d_n}; conjugated R o R against h_{d_1 d_n}.
mp_real limit_map_deviation(const MapSpec& spec, const std::vector<mp_complex>& samples,
                            LimitSide side = LimitSide::Outer);
MapSpec limit_map(const MapSpec& spec, LimitSide side = LimitSide::Outer);
std::vector<mp_complex> circle_samples(const mp_real& radius, int count);

// ---------------------------------------------------------------------------
// Schedule orders

struct ScheduleOrderRow {
  int ring = 0;
  mp_real log_ratio;    // log|v_i| / log s
  mp_real exponent;     // sum_{j<=i} 1/d_j
  mp_real relative_error;
};
std::vector<ScheduleOrderRow> schedule_orders(MapKind kind, const DegreeVector& d, const mp_real& s);
// max over j<i of |v_i/v_j|^{D_i} / s^{1+2/dmax}; at most 1 when the separation estimate holds.
mp_real schedule_separation(MapKind kind, const DegreeVector& d, const mp_real& s);

}  // namespace cantor
