#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "cantor/io.hpp"

using namespace cantor;

namespace {

struct Digits50 {
  ScopedPrecision guard{50};
};

MapSpec p33() {
  DegreeVector d = validate_degrees({3, 3});
  return make_P(d, explicit_rings(MapKind::ParabolicP, d, {mp_complex(mp_real("0.25"))}));
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cantor_test_" + name)).string();
}

}  // namespace

TEST_CASE_FIXTURE(Digits50, "reals travel as exact decimal strings") {
  mp_real x = mp_real(1) / 3;
  Json j = real_json(x);
  CHECK(j.is_string());
  CHECK(abs(real_from_json(j) - x) < pow(mp_real(10), -49));
  mp_complex z(mp_real("1e-30"), mp_real(-2) / 7);
  CHECK(abs(complex_from_json(complex_json(z)) - z) < pow(mp_real(10), -49));
  CHECK_THROWS_AS(real_from_json(Json("abc")), ParseError);
}

TEST_CASE_FIXTURE(Digits50, "map specs round-trip through JSON") {
  for (const MapSpec& m : {p33(), make_h(4), make_g(3, 4),
                           solve_Q(validate_degrees({4, 4, 4}), mp_real("1e-8")).spec,
                           solve_R(validate_degrees({4, 4, 4}), mp_real("2.56e-10")).spec}) {
    MapSpec back = spec_from_json(Json::parse(dump(spec_to_json(m))));
    CHECK(back.kind == m.kind);
    CHECK(dump(spec_to_json(back)) == dump(spec_to_json(m)));
    RationalMap<mp_real> f = rational_map_mp(m), g = rational_map_mp(back);
    mp_complex z(mp_real("0.7"), mp_real("0.3"));
    CHECK(abs(f(z) - g(z)) < pow(mp_real(10), -45));
  }
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"kind":"P"})")), ParseError);
}

TEST_CASE_FIXTURE(Digits50, "certificate bundle is valid JSON and its spec parses back") {
  CertificateBundle b = certify_all(p33(), 128);
  CHECK(b.passed);
  Json parsed = Json::parse(dump(b.document));
  CHECK(parsed["passed"] == true);
  CHECK(parsed["critical_points"]["total_multiplicity"] == 10);
  MapSpec back = spec_from_json(parsed["spec"]);
  CHECK(back.kind == MapKind::ParabolicP);
}

TEST_CASE_FIXTURE(Digits50, "solution JSON carries the coefficients") {
  CoefficientSolution sol = solve_Q(validate_degrees({4, 4, 4}), mp_real("1e-8"));
  Json j = solution_to_json(sol);
  CHECK(j["kind"] == "Q");
  mp_real X = parse_real<mp_real>(j["values"]["X"].get<std::string>());
  CHECK(abs(X - sol.value("X")) < pow(mp_real(10), -45));
  CHECK(j["asymptotic_ratios"].size() == 4);
}

TEST_CASE("curve CSV round trip") {
  ComponentCurve c = circle_curve(0.6, 100);
  c.vertices[7] = {1.0 / 3.0, -2e-300};
  std::string csv = curve_to_csv(c);
  ComponentCurve back = curve_from_csv(csv);
  REQUIRE(back.vertices.size() == c.vertices.size());
  for (size_t k = 0; k < c.vertices.size(); ++k) CHECK(std::abs(back.vertices[k] - c.vertices[k]) <= 1e-30);
  CHECK(curve_to_csv(back) == csv);
  CHECK_THROWS_AS(curve_from_csv("x,y\n1,2\n"), ParseError);
  CHECK_THROWS_AS(curve_from_csv("t,re,im\n0,1\n"), ParseError);
}

TEST_CASE("curve JSON envelope") {
  ComponentCurve c = circle_curve(1.0, 64);
  c.word = {1, 2};
  c.depth = 2;
  Json j = curve_to_json(c, 1.0);
  CHECK(j["word"] == "1,2");
  CHECK(j["depth"] == 2);
  CHECK(j["vertices"] == 64);
  CHECK(j["turning"] == 1.0);
}

TEST_CASE("file helpers") {
  std::string path = temp_path("io.txt");
  std::string bytes("a\0b\n", 4);
  write_text(path, bytes);
  CHECK(read_text(path) == bytes);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text(path), std::runtime_error);
  CHECK_THROWS_AS(write_text("/nonexistent-dir/x.txt", "x"), std::runtime_error);
}

TEST_CASE("PPM bytes are deterministic") {
  ScopedPrecision p(50);
  MapSpec m = p33();
  std::string a = to_ppm(render(m, Viewport::from_bounds(-1, 1, -1, 1), {16, 16}, 100, 1));
  std::string b = to_ppm(render(m, Viewport::from_bounds(-1, 1, -1, 1), {16, 16}, 100, 2));
  CHECK(a == b);
  CHECK(a.size() == std::string("P6\n16 16\n255\n").size() + 16 * 16 * 3);
}
