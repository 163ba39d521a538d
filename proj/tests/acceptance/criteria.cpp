#include "acceptance/criteria.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <random>

#include "acceptance/oracles/durand_kerner.hpp"
#include "cantor/io.hpp"

namespace cantor::acceptance {

namespace {

constexpr int kDigits = 50;

std::string num(const mp_real& x, int digits = 10) { return to_decimal(x, digits); }
std::string num(double x, int digits = 6) { return to_decimal(x, digits); }

Check within_abs(const std::string& name, const mp_real& got, const mp_real& want, const mp_real& tol) {
  return {name, num(got), num(want) + " +- " + num(tol, 2), abs(got - want) <= tol};
}

Check within_rel(const std::string& name, const mp_real& got, const mp_real& want, const mp_real& rel) {
  return {name, num(got), num(want) + " (rel " + num(rel, 2) + ")", abs(got - want) <= rel * abs(want)};
}

Check below(const std::string& name, const mp_real& got, const mp_real& bound) {
  return {name, num(got, 4), "< " + num(bound, 2), got < bound};
}

Check flag(const std::string& name, bool ok, const std::string& measured, const std::string& expected) {
  return {name, measured, expected, ok};
}

Check runtime(double seconds, double limit) {
  return {"runtime", num(seconds, 3) + " s", "< " + num(limit, 3) + " s", seconds < limit};
}

mp_real D(const char* s) { return mp_real(s); }

MapSpec p33() {
  DegreeVector d = validate_degrees({3, 3});
  return make_P(d, explicit_rings(MapKind::ParabolicP, d, {mp_complex(D("0.25"))}));
}

MapSpec p444() {
  DegreeVector d = validate_degrees({4, 4, 4});
  return make_P(d, explicit_rings(MapKind::ParabolicP, d, {mp_complex(D("0.1")), mp_complex(D("0.01"))}));
}

const DegreeVector& d444() {
  static const DegreeVector d = validate_degrees({4, 4, 4});
  return d;
}

// ---------------------------------------------------------------------------

void c1(CriterionResult& r) {
  r.title = "coefficient closed forms";
  auto start = std::chrono::steady_clock::now();
  MapSpec a = p33();
  MapSpec b = p444();
  r.checks.push_back(within_abs("A_2 (P_{3,3})", a.P().A.real(), D("0.99878079"), D("5e-8")));
  r.checks.push_back(within_abs("B_2 (P_{3,3})", a.P().B.real(), D("0.00146306"), D("5e-8")));
  r.checks.push_back(within_abs("A_3 - 1 (P_{4,4,4})", b.P().A.real() - 1, D("-7e-8"), D("1e-8")));
  r.checks.push_back(within_abs("B_3 (P_{4,4,4})", b.P().B.real(), D("8e-8"), D("1e-8")));
  r.checks.push_back(runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1));
}

void c2(CriterionResult& r) {
  r.title = "Q-system reproduction";
  auto start = std::chrono::steady_clock::now();
  CoefficientSolution q = solve_Q(d444(), D("1e-8"));
  QSystemState st = make_q_state(d444(), D("1e-8"));
  r.checks.push_back(within_rel("X_3 - 1", q.value("X") - 1, D("1.5471913857e-6"), D("1e-9")));
  r.checks.push_back(within_rel("Y_3", q.value("Y"), D("9.2832930409e-6"), D("1e-9")));
  r.checks.push_back(within_rel("Z_3 - 1", q.value("Z") - 1, D("-5.38605e-11"), D("1e-4")));
  r.checks.push_back(within_rel("W_3", q.value("W"), D("3.4811916252e-6"), D("1e-9")));
  r.checks.push_back(within_rel("rho_1 - 1", st.rho1 - 1, D("-4.096e-13"), D("0.01")));
  r.checks.push_back(within_rel("rho_3", st.rho3, D("3.2768e-12"), D("0.01")));
  r.checks.push_back(within_rel("rho_4", st.rho4, D("2.6e-15"), D("0.1")));
  r.checks.push_back(runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 5));
}

void c3(CriterionResult& r) {
  r.title = "R-system reproduction";
  auto start = std::chrono::steady_clock::now();
  const mp_real s = D("2.56e-10");
  CoefficientSolution sol = solve_R(d444(), s);
  RSystemState st = make_r_state(d444(), s);
  r.checks.push_back(within_rel("I_3 - 1", sol.value("I") - 1, D("2.5e-7"), D("0.1")));
  r.checks.push_back(within_rel("J_3 - 1", sol.value("J") - 1, D("9e-8"), D("0.1")));
  r.checks.push_back(within_rel("z_1 - 1", sol.value("z1") - 1, D("1e-7"), D("0.1")));
  r.checks.push_back(within_rel("S_3", sol.value("S"), D("1e-8"), D("1e-6")));
  r.checks.push_back(within_rel("T_3", sol.value("T"), D("1.5e-7"), D("1e-6")));
  r.checks.push_back(within_rel("z_0", sol.value("z0"), D("1.6e-7"), D("1e-6")));
  r.checks.push_back(within_abs("kappa_3", st.kappa3, D("-1.34217728e-16"), D("1e-22")));
  r.checks.push_back(runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 5));
}

void c4(CriterionResult& r) {
  r.title = "asymptotic limits";
  auto start = std::chrono::steady_clock::now();
  RegressionTable q = asymptotic_regression(MapKind::ParabolicQ, d444(), {D("1e-6"), D("1e-8"), D("1e-10")});
  for (const char* name : {"(X-1)/s^nu", "Y/s^nu", "W/s^nu"}) {
    std::string devs;
    for (size_t k = 0; k < q.rows.size(); ++k) devs += (k ? ", " : "") + num(q.at(k, name).deviation, 4);
    r.checks.push_back(flag(std::string("|") + name + " - limit| decreasing", q.monotone(name, true), devs,
                            "strictly decreasing"));
    r.checks.push_back(below(std::string("|") + name + " - limit| at s=1e-10", q.at(2, name).deviation, D("1e-3")));
  }
  RegressionTable rr = asymptotic_regression(MapKind::ParabolicR, d444(), {D("1e-9"), D("2.56e-10"), D("1e-14")});
  std::string devs;
  for (size_t k = 0; k < rr.rows.size(); ++k) devs += (k ? ", " : "") + num(rr.at(k, "S/s^nu").deviation, 4);
  r.checks.push_back(flag("|S/s^nu - mu| decreasing", rr.monotone("S/s^nu", true), devs, "strictly decreasing"));
  r.checks.push_back(runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30));
}

void c5(CriterionResult& r) {
  r.title = "parabolic certificates";
  std::vector<std::pair<std::string, MapSpec>> specs = {{"P_{3,3}", p33()},
                                                        {"P_{4,4,4}", p444()},
                                                        {"Q_{4,4,4}", solve_Q(d444(), D("1e-8")).spec},
                                                        {"R_{4,4,4}", solve_R(d444(), D("2.56e-10")).spec}};
  for (auto& [name, spec] : specs) r.checks.push_back(below(name + " max residual", check_parabolic(spec).max_residual, D("1e-30")));
}

void c6(CriterionResult& r) {
  r.title = "critical-point certificates";
  auto start = std::chrono::steady_clock::now();
  MapSpec spec = p444();
  CriticalReport rep = certify_critical_points(spec);
  int ring = 0, within = 0;
  for (auto& p : rep.points)
    if (p.where == CriticalPoint::Where::Ring) {
      ++ring;
      within += p.within ? 1 : 0;
    }
  r.checks.push_back(flag("ring critical points within s^{1/2}|a_i|", ring == 16 && within == 16,
                          std::to_string(within) + "/" + std::to_string(ring), "16/16"));
  r.checks.push_back(flag("total multiplicity", rep.total_multiplicity == 22, std::to_string(rep.total_multiplicity), "22"));

  mp_real worst = 0;
  {
    ScopedPrecision hi(80);
    std::vector<mp_complex> a = {mp_complex(D("0.1")), mp_complex(D("0.01"))};
    std::vector<mp_complex> roots = oracle::critical_points_oracle(oracle::p_family_fraction({4, 4, 4}, a));
    for (auto& p : rep.points) {
      if (p.where != CriticalPoint::Where::Ring) continue;
      mp_real best = -1;
      for (auto& z : roots) {
        mp_real e = abs(mp_complex(p.location) - z);
        if (best < 0 || e < best) best = e;
      }
      worst = std::max(worst, best);
    }
  }
  r.checks.push_back(below("max |refined - Durand-Kerner oracle|", worst, D("1e-20")));
  r.checks.push_back(runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 10));
}

void c7(CriterionResult& r) {
  r.title = "trapping certificates";
  auto check_all = [&](const std::string& label, const MapSpec& spec) {
    for (const CanonicalTrap& t : canonical_traps(spec)) {
      TrapReport<mp_real> rep = certify_trapping(spec, t, 512);
      r.checks.push_back(flag(label + " " + t.name + (t.second_iterate ? " (second iterate)" : ""), rep.passed,
                              std::to_string(rep.samples - rep.failures) + "/" + std::to_string(rep.samples) +
                                  " samples inside, worst margin " + num(rep.worst_margin, 3),
                              "512/512"));
    }
  };
  check_all("P_{3,3} a_1=0.25", p33());
  // The origin trap is only invariant in the small-s regime; the schedule at s = 1e-9 is used for it.
  DegreeVector d = d444();
  MapSpec sched = make_P(d, make_schedule(MapKind::ParabolicP, d, D("1e-9")));
  for (const CanonicalTrap& t : canonical_traps(sched)) {
    TrapReport<mp_real> rep = certify_trapping(sched, t, 512);
    r.checks.push_back(flag("P_{4,4,4} s=1e-9 " + t.name, rep.passed,
                            std::to_string(rep.samples - rep.failures) + "/512 inside", "512/512"));
  }
  check_all("Q_{4,4,4} s=1e-8", solve_Q(d444(), D("1e-8")).spec);
  check_all("h_4", make_h(4));
  check_all("g_4", make_g(4));
  check_all("R_{4,4,4} s=2.56e-10", solve_R(d444(), D("2.56e-10")).spec);
}

void c8(CriterionResult& r) {
  r.title = "limit-map convergence";
  DegreeVector d = validate_degrees({3, 3});
  auto circle = circle_samples(mp_real(1), 256);
  std::vector<mp_real> devs;
  for (const char* s : {"1e-4", "1e-6", "1e-8"})
    devs.push_back(limit_map_deviation(make_P(d, make_schedule(MapKind::ParabolicP, d, D(s))), circle));
  bool dec = devs[1] < devs[0] && devs[2] < devs[1];
  r.checks.push_back(flag("sup|P - h_3| over s = 1e-4, 1e-6, 1e-8", dec,
                          num(devs[0], 4) + ", " + num(devs[1], 4) + ", " + num(devs[2], 4), "strictly decreasing"));
  MapSpec zero = make_P(d, explicit_rings(MapKind::ParabolicP, d, {mp_complex(0)}));
  mp_real z = limit_map_deviation(zero, circle);
  r.checks.push_back(below("rings zeroed: sup|P - h_3|", z, pow(mp_real(10), -(kDigits - 5))));
  MapSpec R = solve_R(d444(), D("2.56e-10")).spec;
  r.checks.push_back(below("sup|R o R - h_{4,4}| on |z|=1", limit_map_deviation(R, circle), D("1e-4")));
}

void c9(CriterionResult& r) {
  r.title = "classifier truth table";
  auto verdict = [](MapKind k, int n, const std::string& w) { return classify_itinerary(k, n, ItineraryWord::parse(w)); };
  auto row = [&](const std::string& name, MapKind k, int n, const std::string& w, Regularity want) {
    Regularity got = verdict(k, n, w);
    r.checks.push_back(flag(name, got == want, to_string(got), to_string(want)));
  };
  row("P n=4 (1133)", MapKind::ParabolicP, 4, "(1133)", Regularity::Quasicircle);
  {
    std::string got;
    try {
      classify_itinerary(MapKind::ParabolicP, 4, ItineraryWord::parse("121121112"));
      got = "decided";
    } catch (const Undecidable&) {
      got = "Undecidable";
    }
    r.checks.push_back(flag("P n=4 121121112... as a finite word", got == "Undecidable", got, "Undecidable"));
    RunLengthSequence runs{{1, 2, 3}, 1};
    Regularity rl = classify_run_lengths(runs);
    r.checks.push_back(flag("P n=4 run lengths 1,2,3,...", rl == Regularity::NotQuasicircle, to_string(rl),
                            "NotQuasicircle"));
  }
  row("P n=3 (123)", MapKind::ParabolicP, 3, "(123)", Regularity::Quasicircle);
  row("Q n=3 (122)", MapKind::ParabolicQ, 3, "(122)", Regularity::Quasicircle);
  row("R n=3 (112)", MapKind::ParabolicR, 3, "(112)", Regularity::Quasicircle);
  row("P (1)", MapKind::ParabolicP, 3, "(1)", Regularity::NotQuasicircle);
  row("Q (1)", MapKind::ParabolicQ, 3, "(1)", Regularity::NotQuasicircle);

  std::mt19937 rng(20240611);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 5)(rng);
    std::uniform_int_distribution<int> sym(1, n);
    ItineraryWord w;
    int pre = std::uniform_int_distribution<int>(0, 6)(rng);
    int per = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int k = 0; k < pre; ++k) w.preperiod.push_back(sym(rng));
    for (int k = 0; k < per; ++k) w.period.push_back(sym(rng));
    for (MapKind k : {MapKind::ParabolicP, MapKind::ParabolicQ, MapKind::ParabolicR})
      if (classify_itinerary(k, n, w) != classify_itinerary(k, n, w.shifted())) ++mismatches;
  }
  r.checks.push_back(flag("shift invariance on 1000 random words", mismatches == 0,
                          std::to_string(mismatches) + " mismatches", "0 mismatches"));
}

void c10(CriterionResult& r) {
  r.title = "tracing and turning";
  auto start = std::chrono::steady_clock::now();
  MapSpec spec = p33();
  const double base = 0.6;
  const int samples = 16;
  auto word_of = [](int depth, std::vector<int> period) {
    std::vector<int> w;
    for (int k = 0; k < depth; ++k) w.push_back(period[static_cast<size_t>(k) % period.size()]);
    return w;
  };
  std::map<std::string, double> turning;
  bool all_closed = true, all_wind = true, all_symbols = true;
  std::string worst_gap;
  double worst_rel_gap = 0;
  for (auto [depth, period] : std::vector<std::pair<int, std::vector<int>>>{
           {4, {1}}, {6, {1}}, {8, {1}}, {6, {1, 2}}, {8, {1, 2}}}) {
    std::vector<int> w = word_of(depth, period);
    ComponentCurve c = trace_component(spec, w, base, samples);
    double rel = c.closure_gap / c.diameter();
    worst_rel_gap = std::max(worst_rel_gap, rel);
    all_closed = all_closed && rel < 1e-8;
    all_wind = all_wind && c.winding == 1;
    for (size_t v = 0; v < c.vertices.size(); v += c.vertices.size() / 7)
      all_symbols = all_symbols && forward_symbols(spec, c.vertices[v], depth) == w;
    std::string key = (period.size() == 1 ? "1" : "12") + std::string("@") + std::to_string(depth);
    turning[key] = turning_constant(c);
  }
  r.checks.push_back(flag("traces close", all_closed, "max gap/diam " + num(worst_rel_gap, 3), "< 1e-08"));
  r.checks.push_back(flag("winding number", all_wind, all_wind ? "1 for every trace" : "some trace differs", "1"));
  r.checks.push_back(flag("forward symbols reproduce words", all_symbols, all_symbols ? "yes" : "no", "yes"));
  double circle = turning_constant(circle_curve(1.0, 1024));
  r.checks.push_back(flag("turning of a 1024-gon", std::abs(circle - 1) <= 0.01, num(circle, 6), "1 +- 0.01"));
  double t4 = turning["1@4"], t6 = turning["1@6"], t8 = turning["1@8"];
  r.checks.push_back(flag("turning of (1) strictly increasing in depth 4,6,8", t4 < t6 && t6 < t8,
                          num(t4, 5) + ", " + num(t6, 5) + ", " + num(t8, 5), "strictly increasing"));
  r.checks.push_back(flag("turning growth depth 4 -> 8 for (1)", t8 >= 2 * t4, num(t8 / t4, 4) + "x", ">= 2x"));
  double s6 = turning["12@6"], s8 = turning["12@8"];
  r.checks.push_back(flag("turning of (12) stable between depths 6 and 8", std::abs(s8 - s6) <= 0.25 * s6,
                          num(s6, 5) + " vs " + num(s8, 5), "within 25%"));
  r.checks.push_back(runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 120));
}

void c11(CriterionResult& r) {
  r.title = "rendering";
  MapSpec spec = p33();
  std::vector<LabeledTrap> traps = certified_traps(spec);
  Viewport vp = Viewport::from_bounds(-1, 1, -1, 1);
  Resolution res{256, 256};
  LabelGrid g1 = render(spec, traps, vp, res, 10000, 1);
  r.checks.push_back(flag("Undecided fraction at budget 1e4", g1.undecided_fraction() < 0.2,
                          num(g1.undecided_fraction() * 100, 4) + "%", "< 20%"));
  LabelGrid g2 = render(spec, traps, vp, res, 20000, 1);
  int changed = 0;
  for (size_t k = 0; k < g1.labels.size(); ++k)
    if (g1.labels[k].tag != Basin::Undecided && g1.labels[k].tag != g2.labels[k].tag) ++changed;
  r.checks.push_back(flag("doubling the budget changes no decided pixel", changed == 0,
                          std::to_string(changed) + " changed", "0 changed"));

  std::vector<BasinLabel> ray = classify_segment(spec, mp_complex(0), mp_complex(2), 2048, 10000);
  std::vector<LabelRun> runs = label_runs(ray);
  int outer_runs = 0;
  for (auto& run : runs) outer_runs += run.tag == Basin::ParabolicOuter ? 1 : 0;
  bool separated = true;
  for (size_t k = 1; k < runs.size(); ++k)
    if (runs[k].tag == Basin::ParabolicOuter && runs[k - 1].tag == Basin::ParabolicOuter) separated = false;
  bool ok = !runs.empty() && runs.back().tag == Basin::ParabolicOuter && outer_runs >= 2 && separated;
  std::string shape;
  for (auto& run : runs) shape += (shape.empty() ? "" : " ") + to_string(run.tag) + "x" + std::to_string(run.length);
  r.checks.push_back(flag("radial runs on [0,2]", ok, shape,
                          "outermost ParabolicOuter, >= 2 ParabolicOuter runs separated by Undecided"));

  std::string ppm1 = to_ppm(g1);
  std::string again = to_ppm(render(spec, traps, vp, res, 10000, 1));
  std::string two = to_ppm(render(spec, traps, vp, res, 10000, 2));
  std::string four = to_ppm(render(spec, traps, vp, res, 10000, 4));
  bool same = ppm1 == again && ppm1 == two && ppm1 == four;
  r.checks.push_back(flag("PPM byte-identical across runs and 1/2/4 workers", same, same ? "identical" : "differs",
                          "identical"));
}

}  // namespace

bool CriterionResult::passed() const {
  for (auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

std::string CriterionResult::line() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "criterion %2d: %s", id, passed() ? "PASS" : "FAIL");
  std::string out = std::string(buf) + "  " + title + " (" + to_decimal(seconds, 3) + " s)";
  for (auto& c : checks)
    if (!c.passed) out += "\n    failed: " + c.name + ": measured " + c.measured + ", expected " + c.expected;
  return out;
}

CriterionResult run_criterion(int id) {
  static const std::vector<std::function<void(CriterionResult&)>> table = {c1, c2, c3, c4, c5, c6,
                                                                            c7, c8, c9, c10, c11};
  if (id < 1 || id > kCriterionCount) throw ConstraintViolated("no criterion " + std::to_string(id));
  ScopedPrecision guard(kDigits);
  CriterionResult r;
  r.id = id;
  auto start = std::chrono::steady_clock::now();
  try {
    table[static_cast<size_t>(id - 1)](r);
  } catch (const std::exception& e) {
    r.checks.push_back({"exception", e.what(), "no exception", false});
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id));
  return out;
}

std::string summary_json(const std::vector<CriterionResult>& results) {
  Json j;
  bool all = true;
  Json list = Json::array();
  for (auto& r : results) {
    Json checks = Json::array();
    for (auto& c : r.checks)
      checks.push_back({{"name", c.name}, {"measured", c.measured}, {"expected", c.expected}, {"passed", c.passed}});
    list.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed()}, {"checks", checks}});
    all = all && r.passed();
  }
  j["passed"] = all;
  j["criteria"] = list;
  return dump(j);
}

}  // namespace cantor::acceptance
