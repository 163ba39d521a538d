#include "cantor/io.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cantor {

Json real_json(const mp_real& x) { return to_decimal(x); }

Json complex_json(const mp_complex& z) { return Json::array({to_decimal(z.real()), to_decimal(z.imag())}); }

mp_real real_from_json(const Json& j) {
  if (j.is_string()) return parse_real<mp_real>(j.get<std::string>());
  if (j.is_number_integer()) return mp_real(j.get<long long>());
  throw ParseError("expected a decimal string, got " + j.dump());
}

mp_complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected [re, im], got " + j.dump());
  return {real_from_json(j[0]), real_from_json(j[1])};
}

Json spec_to_json(const MapSpec& spec) {
  ScopedPrecision guard(spec.precision);
  Json j;
  j["kind"] = to_string(spec.kind);
  j["precision"] = spec.precision.significant_digits;
  if (spec.degrees) j["degrees"] = spec.degrees->degrees();
  if (spec.kind == MapKind::HyperbolicF) j["p"] = spec.p;
  if (spec.kind == MapKind::RefPolyGmn || spec.kind == MapKind::RefRatHmn) j["m"] = spec.ref_m;
  if (!has_degrees(spec.kind)) {
    j["n"] = spec.ref_n;
    return j;
  }
  Json rings;
  rings["scheduled"] = spec.rings.scheduled;
  rings["s"] = real_json(spec.rings.s);
  Json values = Json::array();
  for (auto& v : spec.rings.values) values.push_back(complex_json(v));
  rings["values"] = values;
  Json phases = Json::array();
  for (auto& p : spec.rings.phases) phases.push_back(real_json(p));
  rings["phases"] = phases;
  j["rings"] = rings;
  Json c;
  if (auto* p = std::get_if<PCoefficients>(&spec.coeffs)) {
    c = {{"A", complex_json(p->A)}, {"B", complex_json(p->B)}, {"C", complex_json(p->C)}};
  } else if (auto* q = std::get_if<QCoefficients>(&spec.coeffs)) {
    c = {{"X", real_json(q->X)}, {"Y", real_json(q->Y)}, {"Z", real_json(q->Z)}, {"W", real_json(q->W)},
         {"nu", real_json(q->nu)}};
  } else if (auto* r = std::get_if<RCoefficients>(&spec.coeffs)) {
    c = {{"S", real_json(r->S)}, {"T", real_json(r->T)}, {"z0", real_json(r->z0)}, {"nu", real_json(r->nu)},
         {"mu", real_json(r->mu)}};
  }
  if (!c.is_null()) j["coefficients"] = c;
  return j;
}

MapSpec spec_from_json(const Json& j) {
  try {
    PrecisionContext prec{j.value("precision", 50)};
    prec.validate();
    ScopedPrecision guard(prec);
    MapKind kind = parse_kind(j.at("kind").get<std::string>());
    switch (kind) {
      case MapKind::RefPolyG: return make_g(j.at("n").get<int>());
      case MapKind::RefPolyGmn: return make_g(j.at("m").get<int>(), j.at("n").get<int>());
      case MapKind::RefRatH: return make_h(j.at("n").get<int>());
      case MapKind::RefRatHmn: return make_h(j.at("m").get<int>(), j.at("n").get<int>());
      default: break;
    }
    DegreeVector d = validate_degrees(j.at("degrees").get<std::vector<int>>());
    const Json& r = j.at("rings");
    RingParameters rings;
    rings.scheduled = r.at("scheduled").get<bool>();
    rings.s = real_from_json(r.at("s"));
    for (auto& v : r.at("values")) rings.values.push_back(complex_from_json(v));
    for (auto& p : r.at("phases")) rings.phases.push_back(real_from_json(p));
    if (static_cast<int>(rings.values.size()) != d.n() - 1)
      throw ParseError("expected " + std::to_string(d.n() - 1) + " ring values");
    const Json& c = j.contains("coefficients") ? j.at("coefficients") : Json::object();
    switch (kind) {
      case MapKind::ParabolicP: return make_P(d, rings, prec);
      case MapKind::HyperbolicF: return make_F(j.at("p").get<int>(), d, rings, prec);
      case MapKind::ParabolicQ:
        return make_Q(d, rings,
                      {real_from_json(c.at("X")), real_from_json(c.at("Y")), real_from_json(c.at("Z")),
                       real_from_json(c.at("W")), real_from_json(c.at("nu"))},
                      prec);
      case MapKind::ParabolicR:
        return make_R(d, rings,
                      {real_from_json(c.at("S")), real_from_json(c.at("T")), real_from_json(c.at("z0")),
                       real_from_json(c.at("nu")), real_from_json(c.at("mu"))},
                      prec);
      default: break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed map spec: ") + e.what());
  }
  throw ParseError("unhandled map kind");
}

Json solution_to_json(const CoefficientSolution& sol, int digits) {
  ScopedPrecision guard(sol.spec.precision);
  Json j;
  j["kind"] = to_string(sol.kind);
  j["degrees"] = sol.spec.deg().degrees();
  j["s"] = to_decimal(sol.spec.rings.s, digits);
  j["precision"] = sol.spec.precision.significant_digits;
  Json values;
  for (auto& [name, v] : sol.values) values[name] = to_decimal(v, digits);
  j["values"] = values;
  j["residual_norm"] = to_decimal(sol.residual_norm, 6);
  j["iterations"] = sol.iterations;
  Json hist = Json::array();
  for (auto& h : sol.history) hist.push_back(to_decimal(h, 6));
  j["residual_history"] = hist;
  Json ratios = Json::array();
  for (auto& r : sol.ratios)
    ratios.push_back({{"name", r.name},
                      {"ratio", to_decimal(r.ratio, 12)},
                      {"limit", to_decimal(r.limit, 12)},
                      {"deviation", to_decimal(r.deviation, 6)}});
  j["asymptotic_ratios"] = ratios;
  j["spec"] = spec_to_json(sol.spec);
  return j;
}

Json parabolic_to_json(const ParabolicReport& rep) {
  Json res = Json::array();
  for (auto& r : rep.residuals) res.push_back({{"name", r.name}, {"value", to_decimal(r.value, 6)}});
  return {{"passed", rep.passed},
          {"tolerance", to_decimal(rep.tolerance, 6)},
          {"max_residual", to_decimal(rep.max_residual, 6)},
          {"residuals", res}};
}

Json critical_to_json(const CriticalReport& rep) {
  Json pts = Json::array();
  for (auto& p : rep.points) {
    Json q;
    switch (p.where) {
      case CriticalPoint::Where::Ring:
        q["ring"] = p.ring;
        q["j"] = p.j;
        q["location"] = complex_json(p.location);
        q["distance"] = to_decimal(p.distance, 6);
        q["bound"] = to_decimal(p.bound, 6);
        q["within"] = p.within;
        break;
      case CriticalPoint::Where::Origin: q["at"] = "origin"; break;
      case CriticalPoint::Where::Infinity: q["at"] = "infinity"; break;
      case CriticalPoint::Where::Free:
        q["at"] = "free";
        q["location"] = complex_json(p.location);
        break;
    }
    q["multiplicity"] = p.multiplicity;
    pts.push_back(q);
  }
  Json j = {{"passed", rep.passed},
            {"total_multiplicity", rep.total_multiplicity},
            {"expected_total", rep.expected_total},
            {"min_separation", to_decimal(rep.min_separation, 6)},
            {"points", pts}};
  if (!rep.failure.empty()) j["failure"] = rep.failure;
  return j;
}

Json trap_to_json(const std::string& name, const TrapReport<mp_real>& rep) {
  Json j = {{"name", name},
            {"region", rep.region},
            {"passed", rep.passed},
            {"samples", rep.samples},
            {"failures", rep.failures},
            {"petal_samples", rep.petal_samples},
            {"worst_margin", to_decimal(rep.worst_margin, 6)}};
  if (!rep.passed) j["offending_sample"] = complex_json(rep.worst_sample);
  return j;
}

CertificateBundle certify_all(const MapSpec& spec, int samples) {
  ScopedPrecision guard(spec.precision);
  CertificateBundle b;
  b.passed = true;
  b.document["spec"] = spec_to_json(spec);
  if (spec.kind != MapKind::HyperbolicF) {
    ParabolicReport p = check_parabolic(spec);
    b.document["parabolic"] = parabolic_to_json(p);
    b.passed = b.passed && p.passed;
  }
  if (spec.degrees) {
    CriticalReport c = certify_critical_points(spec);
    b.document["critical_points"] = critical_to_json(c);
    b.passed = b.passed && c.passed;
  }
  Json traps = Json::array();
  for (const CanonicalTrap& t : canonical_traps(spec)) {
    TrapReport<mp_real> rep = certify_trapping(spec, t, samples);
    Json tj = trap_to_json(t.name, rep);
    tj["second_iterate"] = t.second_iterate;
    if (!rep.passed) {
      if (auto found = find_certified_trap(spec, t, samples)) {
        tj["adjusted_region"] = found->trap.region.describe();
        tj["adjusted_passed"] = true;
      }
    }
    traps.push_back(tj);
    b.passed = b.passed && rep.passed;
  }
  b.document["traps"] = traps;
  b.document["passed"] = b.passed;
  return b;
}

std::string curve_to_csv(const ComponentCurve& curve) {
  std::string out = "t,re,im\n";
  const size_t N = curve.vertices.size();
  char buf[96];
  for (size_t k = 0; k < N; ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", static_cast<double>(k) / static_cast<double>(N),
                  curve.vertices[k].real(), curve.vertices[k].imag());
    out += buf;
  }
  return out;
}

ComponentCurve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,re,im") throw ParseError("curve CSV must start with 't,re,im'");
  ComponentCurve c;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t, re, im;
    if (!std::getline(row, t, ',') || !std::getline(row, re, ',') || !std::getline(row, im))
      throw ParseError("bad curve row '" + line + "'");
    c.vertices.emplace_back(parse_real<double>(re), parse_real<double>(im));
  }
  if (c.vertices.size() >= 3) {
    c.winding = winding_number(c.vertices);
  }
  return c;
}

Json curve_to_json(const ComponentCurve& curve, std::optional<double> turning) {
  std::string word;
  for (int s : curve.word) word += (word.empty() ? "" : ",") + std::to_string(s);
  Json j = {{"word", word},
            {"depth", curve.depth},
            {"vertices", curve.vertices.size()},
            {"closure_gap", curve.closure_gap},
            {"winding", curve.winding},
            {"diameter", curve.diameter()}};
  if (turning) j["turning"] = *turning;
  return j;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "': " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw std::runtime_error("write to '" + path + "' failed: " + std::strerror(errno));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cantor
