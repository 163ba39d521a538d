#include "cantor/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acceptance/criteria.hpp"
#include "cantor/io.hpp"

namespace cantor::cli {

namespace {

// A usage problem tied to a flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Job {
  std::string family;
  std::string degrees;
  std::string s;
  std::string a1;
  std::string rings;
  std::string phases;
  int p = 0;
  int m = 0;
  int n = 0;
  int precision = 0;
  std::string viewport = "-1,1,-1,1";
  std::string res = "256";
  int budget = 10000;
  int workers = 0;
  std::string out;
  std::string word;
  std::string runs;
  double base_radius = 0;
  int samples = 16;
  std::string curve;
  long pairs = kDefaultPairBudget;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, sep)) parts.push_back(tok);
  return parts;
}

int parse_int(const std::string& flag, const std::string& text) {
  try {
    size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(flag + ": not an integer: '" + text + "'");
}

mp_real parse_mp(const std::string& flag, const std::string& text) {
  try {
    return parse_real<mp_real>(text);
  } catch (const ParseError&) {
    throw UsageError(flag + ": not a decimal number: '" + text + "'");
  }
}

// "x" or "x:y" for x + iy.
mp_complex parse_complex(const std::string& flag, const std::string& text) {
  auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_mp(flag, parts[0]), mp_real(0)};
  if (parts.size() == 2) return {parse_mp(flag, parts[0]), parse_mp(flag, parts[1])};
  throw UsageError(flag + ": expected x or x:y, got '" + text + "'");
}

PrecisionContext precision_of(const Job& job) {
  PrecisionContext p = PrecisionContext::from_env(50);
  if (job.precision != 0) p.significant_digits = job.precision;
  try {
    p.validate();
  } catch (const ConstraintViolated& e) {
    throw UsageError(std::string("--precision: ") + e.what());
  }
  return p;
}

DegreeVector degrees_of(const Job& job) {
  if (job.degrees.empty()) throw UsageError("--degrees is required for family " + job.family);
  std::vector<int> raw;
  for (auto& t : split(job.degrees, ',')) raw.push_back(parse_int("--degrees", t));
  try {
    return validate_degrees(raw);
  } catch (const Error& e) {
    throw UsageError(std::string("--degrees: ") + e.what());
  }
}

RingParameters rings_of(const Job& job, MapKind kind, const DegreeVector& d) {
  std::vector<mp_complex> values;
  if (!job.rings.empty())
    for (auto& t : split(job.rings, ',')) values.push_back(parse_complex("--rings", t));
  else if (!job.a1.empty())
    values.push_back(parse_complex("--a1", job.a1));
  if (!values.empty()) {
    if (!job.s.empty()) throw UsageError("--s: give either a schedule parameter or explicit rings, not both");
    if (static_cast<int>(values.size()) != d.n() - 1)
      throw UsageError((job.rings.empty() ? "--a1" : "--rings") + std::string(": expected ") +
                       std::to_string(d.n() - 1) + " ring values");
    return explicit_rings(kind, d, values);
  }
  if (job.s.empty()) throw UsageError("--s: a schedule parameter (or --a1/--rings) is required");
  std::vector<mp_real> phases;
  if (!job.phases.empty())
    for (auto& t : split(job.phases, ',')) phases.push_back(parse_mp("--phases", t));
  try {
    return make_schedule(kind, d, parse_mp("--s", job.s), phases);
  } catch (const ConstraintViolated& e) {
    throw UsageError(std::string("--s: ") + e.what());
  }
}

MapKind kind_of(const Job& job) {
  if (job.family.empty()) throw UsageError("--family is required");
  try {
    return parse_kind(job.family);
  } catch (const Error&) {
    throw UsageError("--family: unknown family '" + job.family + "'");
  }
}

// Builds the spec; Q and R are solved for their coefficients first.
MapSpec spec_of(const Job& job, std::optional<CoefficientSolution>* solution = nullptr) {
  MapKind kind = kind_of(job);
  PrecisionContext prec = precision_of(job);
  mp_real::default_precision(static_cast<unsigned>(prec.significant_digits));
  auto need_n = [&] {
    if (job.n <= 0) throw UsageError("--n is required for family " + job.family);
    return job.n;
  };
  switch (kind) {
    case MapKind::RefPolyG: return make_g(need_n());
    case MapKind::RefRatH: return make_h(need_n());
    case MapKind::RefPolyGmn:
    case MapKind::RefRatHmn:
      if (job.m <= 0) throw UsageError("--m is required for family " + job.family);
      return kind == MapKind::RefPolyGmn ? make_g(job.m, need_n()) : make_h(job.m, need_n());
    default: break;
  }
  DegreeVector d = degrees_of(job);
  if (kind == MapKind::ParabolicQ || kind == MapKind::ParabolicR) {
    if (!job.a1.empty() || !job.rings.empty())
      throw UsageError("--rings: Q and R take their rings from the schedule; use --s");
    if (job.s.empty()) throw UsageError("--s is required for family " + job.family);
    SolveOptions opt;
    opt.precision = prec;
    CoefficientSolution sol = kind == MapKind::ParabolicQ ? solve_Q(d, parse_mp("--s", job.s), opt)
                                                          : solve_R(d, parse_mp("--s", job.s), opt);
    MapSpec spec = sol.spec;
    if (solution) *solution = std::move(sol);
    return spec;
  }
  RingParameters rings = rings_of(job, kind, d);
  if (kind == MapKind::HyperbolicF) return make_F(job.p, d, rings, prec);
  return make_P(d, rings, prec);
}

void emit(const Job& job, const std::string& content, std::ostream& out) {
  if (job.out.empty())
    out << content;
  else
    write_text(job.out, content);
}

Viewport viewport_of(const Job& job) {
  auto parts = split(job.viewport, ',');
  if (parts.size() != 4) throw UsageError("--viewport: expected xmin,xmax,ymin,ymax");
  double v[4];
  for (int k = 0; k < 4; ++k) {
    try {
      v[k] = parse_real<double>(parts[static_cast<size_t>(k)]);
    } catch (const ParseError&) {
      throw UsageError("--viewport: not a number: '" + parts[static_cast<size_t>(k)] + "'");
    }
  }
  try {
    return Viewport::from_bounds(v[0], v[1], v[2], v[3]);
  } catch (const ConstraintViolated& e) {
    throw UsageError(std::string("--viewport: ") + e.what());
  }
}

Resolution resolution_of(const Job& job) {
  auto parts = split(job.res, 'x');
  Resolution r;
  if (parts.size() == 1) {
    r.width = r.height = parse_int("--res", parts[0]);
  } else if (parts.size() == 2) {
    r.width = parse_int("--res", parts[0]);
    r.height = parse_int("--res", parts[1]);
  } else {
    throw UsageError("--res: expected N or WxH");
  }
  if (r.width < 16 || r.height < 16) throw UsageError("--res: at least 16x16");
  return r;
}

std::vector<int> symbols_of(const std::string& flag, const std::string& text) {
  if (text.empty()) throw UsageError(flag + " is required");
  try {
    ItineraryWord w = ItineraryWord::parse(text);
    if (w.periodic()) throw UsageError(flag + ": a finite word is expected here");
    return w.preperiod;
  } catch (const ParseError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

int cmd_params(const Job& job, std::ostream& out) {
  MapSpec spec = spec_of(job);
  emit(job, dump(spec_to_json(spec)), out);
  return kExitOk;
}

int cmd_solve(const Job& job, std::ostream& out) {
  MapKind kind = kind_of(job);
  if (kind != MapKind::ParabolicQ && kind != MapKind::ParabolicR) throw UsageError("--family: solve takes Q or R");
  std::optional<CoefficientSolution> sol;
  spec_of(job, &sol);
  emit(job, dump(solution_to_json(*sol)), out);
  return kExitOk;
}

int cmd_certify(const Job& job, std::ostream& out) {
  MapSpec spec = spec_of(job);
  CertificateBundle b = certify_all(spec);
  emit(job, dump(b.document), out);
  return b.passed ? kExitOk : kExitCertificateFailed;
}

int cmd_render(const Job& job, std::ostream& out, std::ostream& err) {
  if (job.budget < 1) throw UsageError("--budget: at least 1");
  MapSpec spec = spec_of(job);
  Viewport vp = viewport_of(job);
  Resolution res = resolution_of(job);
  LabelGrid grid = render(spec, vp, res, job.budget, job.workers);
  std::string ppm = to_ppm(grid);
  if (job.out.empty()) {
    out << ppm;
  } else {
    write_text(job.out, ppm);
    err << "wrote " << job.out << " (" << res.width << "x" << res.height << ", undecided "
        << grid.undecided_fraction() * 100 << "%)\n";
  }
  return kExitOk;
}

int cmd_trace(const Job& job, std::ostream& out) {
  MapSpec spec = spec_of(job);
  std::vector<int> word = symbols_of("--word", job.word);
  double base = job.base_radius > 0 ? job.base_radius : BandMap(spec).midpoint(1);
  ComponentCurve c = trace_component(spec, word, base, job.samples);
  if (job.out.empty()) {
    out << curve_to_csv(c);
  } else {
    write_text(job.out, curve_to_csv(c));
    out << dump(curve_to_json(c));
  }
  return kExitOk;
}

int cmd_classify(const Job& job, std::ostream& out) {
  if (!job.runs.empty()) {
    // "1,2,3+1": explicit run lengths, then growth by 1 per run.
    RunLengthSequence seq;
    auto plus = job.runs.find('+');
    std::string head = job.runs.substr(0, plus);
    for (auto& t : split(head, ',')) seq.lengths.push_back(parse_int("--runs", t));
    if (plus != std::string::npos) seq.step = parse_int("--runs", job.runs.substr(plus + 1));
    if (seq.step < 0) throw UsageError("--runs: step cannot be negative");
    out << to_string(classify_run_lengths(seq)) << "\n";
    return kExitOk;
  }
  MapKind kind = kind_of(job);
  if (job.word.empty()) throw UsageError("--word (or --runs) is required");
  ItineraryWord w;
  try {
    w = ItineraryWord::parse(job.word);
  } catch (const ParseError& e) {
    throw UsageError(std::string("--word: ") + e.what());
  }
  int n = job.n;
  if (n <= 0 && !job.degrees.empty()) n = degrees_of(job).n();
  if (n <= 0) throw UsageError("--n (or --degrees) is required");
  if (w.max_symbol() > n) throw UsageError("--word: symbol exceeds n = " + std::to_string(n));
  try {
    out << to_string(classify_itinerary(kind, n, w)) << "\n";
  } catch (const Undecidable& e) {
    out << "Undecidable\n";
  }
  return kExitOk;
}

int cmd_turning(const Job& job, std::ostream& out) {
  ComponentCurve c;
  if (!job.curve.empty()) {
    c = curve_from_csv(read_text(job.curve));
  } else {
    MapSpec spec = spec_of(job);
    std::vector<int> word = symbols_of("--word", job.word);
    double base = job.base_radius > 0 ? job.base_radius : BandMap(spec).midpoint(1);
    c = trace_component(spec, word, base, job.samples);
  }
  double t = turning_constant(c, job.pairs);
  emit(job, dump(curve_to_json(c, t)), out);
  return kExitOk;
}

int cmd_repro(const Job& job, std::ostream& out, std::ostream& err) {
  std::vector<acceptance::CriterionResult> results;
  for (int id = 1; id <= acceptance::kCriterionCount; ++id) {
    results.push_back(acceptance::run_criterion(id));
    err << results.back().line() << "\n";
  }
  emit(job, acceptance::summary_json(results), out);
  for (auto& r : results)
    if (!r.passed()) return kExitCertificateFailed;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parabolic Cantor-circle Julia sets: construction, certification, rendering, tracing"};
  app.require_subcommand(1);
  Job job;

  auto spec_flags = [&](CLI::App* c) {
    c->add_option("--family", job.family, "P, Q, R, F, g, gmn, h or hmn");
    c->add_option("--degrees", job.degrees, "comma-separated degrees, e.g. 4,4,4");
    c->add_option("--s", job.s, "schedule parameter (decimal string)");
    c->add_option("--a1", job.a1, "explicit first ring value (x or x:y)");
    c->add_option("--rings", job.rings, "explicit ring values, comma-separated");
    c->add_option("--phases", job.phases, "ring phases for the schedule, comma-separated");
    c->add_option("--p", job.p, "index p for family F");
    c->add_option("--m", job.m, "first index for gmn/hmn");
    c->add_option("--n", job.n, "degree for g/h, second index for gmn/hmn, symbol count for classify");
    c->add_option("--precision", job.precision, "significant digits (default: CANTOR_PRECISION or 50)");
    c->add_option("--out", job.out, "output path");
  };

  auto* params = app.add_subcommand("params", "print the constructed map as JSON");
  auto* solve = app.add_subcommand("solve", "solve the Q or R coefficient system");
  auto* certify = app.add_subcommand("certify", "parabolic, critical-point and trap certificates");
  auto* rend = app.add_subcommand("render", "render basin labels to a PPM image");
  auto* trace = app.add_subcommand("trace", "trace a Julia component by curve pullback");
  auto* classify = app.add_subcommand("classify", "quasicircle verdict for an itinerary");
  auto* turning = app.add_subcommand("turning", "turning constant of a traced or loaded curve");
  auto* repro = app.add_subcommand("repro", "run every acceptance criterion");
  for (auto* c : {params, solve, certify, rend, trace, classify, turning}) spec_flags(c);
  rend->add_option("--viewport", job.viewport, "xmin,xmax,ymin,ymax");
  rend->add_option("--res", job.res, "N or WxH");
  rend->add_option("--budget", job.budget, "iteration budget per pixel");
  rend->add_option("--workers", job.workers, "render threads (default: hardware)");
  for (auto* c : {trace, turning}) {
    c->add_option("--word", job.word, "finite word, e.g. 1212");
    c->add_option("--base-radius", job.base_radius, "radius of the starting circle");
    c->add_option("--samples", job.samples, "vertices of the starting circle");
  }
  turning->add_option("--curve", job.curve, "curve CSV (t,re,im) instead of tracing");
  turning->add_option("--budget", job.pairs, "vertex-pair budget");
  classify->add_option("--word", job.word, "eventually periodic word, e.g. 11(33)");
  classify->add_option("--runs", job.runs, "run lengths, e.g. 1,2,3+1");
  repro->add_option("--out", job.out, "summary JSON path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*params) return cmd_params(job, out);
    if (*solve) return cmd_solve(job, out);
    if (*certify) return cmd_certify(job, out);
    if (*rend) return cmd_render(job, out, err);
    if (*trace) return cmd_trace(job, out);
    if (*classify) return cmd_classify(job, out);
    if (*turning) return cmd_turning(job, out);
    if (*repro) return cmd_repro(job, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CertificateFailed& e) {
    err << "certificate failed: " << e.what() << "\n";
    return kExitCertificateFailed;
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << "\n";
    return kExitCertificateFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCertificateFailed;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cantor::cli
