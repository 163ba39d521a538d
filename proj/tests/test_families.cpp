#include <doctest.h>

#include <random>

#include "cantor/certify.hpp"
#include "cantor/solver.hpp"

using namespace cantor;

namespace {

struct Digits50 {
  ScopedPrecision guard{50};
};

mp_real tol(int digits) { return pow(mp_real(10), -digits); }

MapSpec p33() {
  DegreeVector d = validate_degrees({3, 3});
  return make_P(d, explicit_rings(MapKind::ParabolicP, d, {mp_complex(mp_real("0.25"))}));
}

MapSpec p444() {
  DegreeVector d = validate_degrees({4, 4, 4});
  return make_P(d, explicit_rings(MapKind::ParabolicP, d, {mp_complex(mp_real("0.1")), mp_complex(mp_real("0.01"))}));
}

}  // namespace

TEST_CASE_FIXTURE(Digits50, "degree vectors expose D_i, dmax and the exponents") {
  DegreeVector a = validate_degrees({3, 3});
  CHECK(a.n() == 2);
  CHECK(a.D(1) == 6);
  CHECK(a.dmax() == 3);
  CHECK(a.nu_exponent() == Rational(1, 2));

  DegreeVector b = validate_degrees({4, 4, 4});
  CHECK(b.nu_exponent() == Rational(2, 3));
  CHECK(abs(b.tau<mp_real>() - 4) < tol(45));
  CHECK(abs(b.mu<mp_real>() - pow(mp_real(2), mp_real(-16) / 3)) < tol(45));

  CHECK(validate_degrees({2, 3}).dmax() == 3);
  CHECK(validate_degrees({2, 5}).sum() == 7);
}

TEST_CASE("degree validation rejects the boundary and malformed input") {
  CHECK_THROWS_AS(validate_degrees({2, 2}), ConstraintViolated);
  CHECK_THROWS_AS(validate_degrees({3, 3, 3}), ConstraintViolated);
  CHECK_THROWS_AS(validate_degrees({5}), ConstraintViolated);
  CHECK_THROWS_AS(validate_degrees({1, 9}), ConstraintViolated);
  CHECK_NOTHROW(validate_degrees({3, 3, 4}));
}

TEST_CASE_FIXTURE(Digits50, "schedules reproduce known ring values") {
  DegreeVector d33 = validate_degrees({3, 3});
  mp_real s = pow(mp_real("0.25"), 3) / 9;
  CHECK(abs(make_schedule(MapKind::ParabolicP, d33, s).modulus(1) - mp_real("0.25")) < tol(45));

  DegreeVector d = validate_degrees({4, 4, 4});
  RingParameters q = make_schedule(MapKind::ParabolicQ, d, mp_real("1e-8"));
  CHECK(abs(q.modulus(1) - 2 * sqrt(mp_real(2)) * mp_real("1e-2")) < tol(45));
  CHECK(abs(q.modulus(2) - mp_real("4e-4")) < tol(45));
  RingParameters r = make_schedule(MapKind::ParabolicR, d, mp_real("2.56e-10"));
  CHECK(abs(r.modulus(1) - mp_real("8e-3")) < tol(45));
  CHECK(abs(r.modulus(2) - mp_real("3.2e-5")) < tol(45));
  for (auto& v : q.values) CHECK(v.imag() == 0);
  for (auto& v : r.values) CHECK(v.imag() == 0);
}

TEST_CASE_FIXTURE(Digits50, "schedule moduli strictly decrease and follow the recursion") {
  for (auto raw : std::vector<std::vector<int>>{{3, 3}, {4, 4, 4}, {2, 5}, {3, 4, 5, 6}})
    for (const char* s : {"1e-4", "1e-8", "1e-12"}) {
      DegreeVector d = validate_degrees(raw);
      for (MapKind k : {MapKind::ParabolicP, MapKind::ParabolicQ, MapKind::ParabolicR}) {
        RingParameters rp = make_schedule(k, d, mp_real(s));
        mp_real kappa = k == MapKind::ParabolicQ ? d.tau<mp_real>() : mp_real(1);
        CHECK(abs(rp.modulus(1) / rational_pow(d.dmax() * d.dmax() * kappa * mp_real(s), 1, d.d(1)) - 1) < tol(40));
        for (int i = 2; i < d.n(); ++i) {
          CHECK(rp.modulus(i) < rp.modulus(i - 1));
          mp_real want = rational_pow(kappa * mp_real(s), 1, d.d(i)) * rp.modulus(i - 1);
          CHECK(abs(rp.modulus(i) / want - 1) < tol(40));
        }
      }
    }
}

TEST_CASE_FIXTURE(Digits50, "explicit rings recover s from the first modulus") {
  DegreeVector d = validate_degrees({3, 3});
  RingParameters r = explicit_rings(MapKind::ParabolicP, d, {mp_complex(mp_real("0.25"))});
  CHECK_FALSE(r.scheduled);
  CHECK(abs(r.s - pow(mp_real("0.25"), 3) / 9) < tol(48));
}

TEST_CASE_FIXTURE(Digits50, "coefficients of P at known ring values") {
  PCoefficients a = p33().P();
  CHECK(abs(a.A.real() - mp_real("0.99878079")) < mp_real("5e-9"));
  CHECK(abs(a.B.real() - mp_real("0.00146306")) < mp_real("5e-9"));
  PCoefficients b = p444().P();
  CHECK(abs(b.A.real() - 1 + mp_real("7e-8")) < mp_real("1e-8"));
  CHECK(abs(b.B.real() - mp_real("8e-8")) < mp_real("1e-8"));

  DegreeVector d = validate_degrees({4, 4, 4});
  PCoefficients z = coefficients_P(d, explicit_rings(MapKind::ParabolicP, d, {mp_complex(0), mp_complex(0)}));
  CHECK(z.A == mp_complex(1));
  CHECK(z.B == mp_complex(0));
  CHECK(z.C == mp_complex(0));
}

TEST_CASE_FIXTURE(Digits50, "evaluation at special points") {
  DegreeVector d = validate_degrees({3, 3});
  MapSpec zero = make_P(d, explicit_rings(MapKind::ParabolicP, d, {mp_complex(0)}));
  auto v = evaluate(zero, SpherePoint<mp_real>{mp_complex(2), false});
  CHECK(abs(v.value.v - mp_complex(mp_real(24) / 17)) < tol(45));

  auto one = evaluate(p33(), SpherePoint<mp_real>{mp_complex(1), false});
  CHECK(abs(one.value.v - mp_complex(1)) < tol(45));
  CHECK(abs(one.value.d - mp_complex(1)) < tol(45));

  auto origin = evaluate(p444(), SpherePoint<mp_real>{mp_complex(0), false});
  CHECK_FALSE(origin.at_infinity);
  CHECK(origin.local_degree == 4);
  CHECK(abs(origin.value.v - p444().P().B) < tol(45));

  auto pole = evaluate(p33(), SpherePoint<mp_real>{mp_complex(0), false});
  CHECK(pole.at_infinity);
  CHECK(pole.local_degree == 3);
}

TEST_CASE_FIXTURE(Digits50, "poles and the reciprocal chart") {
  RationalMap<mp_real> f = rational_map_mp(p33());
  // Pole of 1/(2 z^3 + 1).
  mp_complex pole = rational_pow(mp_real("0.5"), 1, 3) * cis(pi<mp_real>() / 3);
  CHECK(evaluate(f, pole).at_infinity);
  // Far out, the reciprocal chart agrees with the value at infinity.
  auto far = evaluate(f, mp_complex(mp_real("1e20")));
  auto inf = evaluate(f, SpherePoint<mp_real>::at_infinity());
  CHECK_FALSE(far.at_infinity);
  CHECK(abs(far.value.v - inf.value.v) < mp_real("1e-15"));
  CHECK(abs(far.value.v - f(mp_complex(mp_real("1e20")))) < tol(40));
}

TEST_CASE_FIXTURE(Digits50, "P is parabolic at 1 on every schedule") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ph(0, 6.28);
  for (auto raw : std::vector<std::vector<int>>{{3, 3}, {4, 4, 4}, {2, 5}, {3, 4, 5, 6}})
    for (const char* s : {"1e-3", "1e-6", "1e-10"}) {
      DegreeVector d = validate_degrees(raw);
      std::vector<mp_real> phases;
      for (int i = 1; i < d.n(); ++i) phases.push_back(mp_real(ph(rng)));
      MapSpec spec = make_P(d, make_schedule(MapKind::ParabolicP, d, mp_real(s), phases));
      auto v = evaluate(spec, SpherePoint<mp_real>{mp_complex(1), false});
      CHECK(abs(v.value.v - mp_complex(1)) < pow(mp_real(10), 5 - 50));
      CHECK(abs(v.value.d - mp_complex(1)) < pow(mp_real(10), 5 - 50));
    }
}

TEST_CASE_FIXTURE(Digits50, "degree bookkeeping gives sum d_i") {
  DegreeVector d = validate_degrees({4, 4, 4});
  CHECK(rational_map_mp(p444()).degree() == 12);
  CHECK(rational_map_mp(p33()).degree() == 6);
  CHECK(rational_map_mp(solve_Q(d, mp_real("1e-8")).spec).degree() == 12);
  CHECK(rational_map_mp(solve_R(d, mp_real("2.56e-10")).spec).degree() == 12);
  DegreeVector e = validate_degrees({3, 4, 5, 6});
  CHECK(rational_map_mp(make_P(e, make_schedule(MapKind::ParabolicP, e, mp_real("1e-9")))).degree() == 18);
}

TEST_CASE_FIXTURE(Digits50, "zero rings collapse P onto h_{d_1}") {
  for (auto raw : std::vector<std::vector<int>>{{3, 3}, {4, 4, 4}}) {
    DegreeVector d = validate_degrees(raw);
    MapSpec zero = make_P(d, explicit_rings(MapKind::ParabolicP, d, std::vector<mp_complex>(raw.size() - 1, mp_complex(0))));
    RationalMap<mp_real> f = rational_map_mp(zero), h = rational_map_mp(make_h(d.d(1)));
    for (int k = 0; k < 100; ++k) {
      mp_real r = mp_real("0.5") + mp_real("1.5") * (k % 10) / 9;
      mp_complex z = r * cis(2 * pi<mp_real>() * (k / 10) / 10 + mp_real("0.1"));
      CHECK(abs(f(z) - h(z)) < tol(45));
    }
  }
}

TEST_CASE_FIXTURE(Digits50, "reference maps trap their disks") {
  auto boundary_into = [](const MapSpec& spec, const Region<mp_real>& region) {
    RationalMap<mp_real> f = rational_map_mp(spec);
    return certify_trapping<mp_real>(f, region, 64, mp_complex(1)).passed;
  };
  for (const MapSpec& g : {make_g(4), make_g(4, 4)})
    for (const char* r : {"0.1", "0.5", "1"}) {
      mp_real rr(r);
      CHECK(boundary_into(g, Region<mp_real>::disk(mp_complex(1 - rr), rr)));
    }
  for (const MapSpec& h : {make_h(4), make_h(4, 4)})
    for (int r : {1, 2}) CHECK(boundary_into(h, Region<mp_real>::disk_complement(mp_complex(1 - r), mp_real(r))));
}

TEST_CASE_FIXTURE(Digits50, "reference maps are parabolic at 1") {
  for (const MapSpec& m : {make_g(3), make_g(2, 3), make_h(5), make_h(3, 2)}) {
    auto v = evaluate(m, SpherePoint<mp_real>{mp_complex(1), false});
    CHECK(abs(v.value.v - mp_complex(1)) < tol(45));
    CHECK(abs(v.value.d - mp_complex(1)) < tol(45));
  }
}

TEST_CASE_FIXTURE(Digits50, "hyperbolic family and kind names") {
  DegreeVector d = validate_degrees({5, 5, 5, 5});
  MapSpec f0 = make_F(0, d, make_schedule(MapKind::HyperbolicF, d, mp_real("1e-6")));
  MapSpec f1 = make_F(1, d, make_schedule(MapKind::HyperbolicF, d, mp_real("1e-6")));
  CHECK(rational_map_mp(f0).degree() == 20);
  CHECK(rational_map_mp(f1).degree() == 20);
  CHECK_THROWS(make_F(2, d, make_schedule(MapKind::HyperbolicF, d, mp_real("1e-6"))));
  for (MapKind k : {MapKind::HyperbolicF, MapKind::ParabolicP, MapKind::ParabolicQ, MapKind::ParabolicR,
                    MapKind::RefPolyG, MapKind::RefPolyGmn, MapKind::RefRatH, MapKind::RefRatHmn})
    CHECK(parse_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_kind("Z"), ParseError);
}
