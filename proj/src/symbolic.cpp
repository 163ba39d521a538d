#include "cantor/symbolic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace cantor {

// ---------------------------------------------------------------------------
// Words

std::vector<int> primitive_root(const std::vector<int>& period) {
  const size_t n = period.size();
  for (size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (size_t k = p; k < n && ok; ++k) ok = period[k] == period[k - p];
    if (ok) return {period.begin(), period.begin() + static_cast<long>(p)};
  }
  return period;
}

namespace {

std::vector<int> parse_symbols(const std::string& s) {
  std::vector<int> out;
  if (s.find(',') != std::string::npos) {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) throw ParseError("empty symbol in word");
      size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        throw ParseError("bad symbol '" + tok + "'");
      }
      if (used != tok.size()) throw ParseError("bad symbol '" + tok + "'");
      out.push_back(v);
    }
    return out;
  }
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError(std::string("bad symbol '") + c + "'");
    out.push_back(c - '0');
  }
  return out;
}

std::string print_symbols(const std::vector<int>& v, bool commas) {
  std::string out;
  for (size_t k = 0; k < v.size(); ++k) {
    if (commas && k) out += ",";
    out += std::to_string(v[k]);
  }
  return out;
}

}  // namespace

ItineraryWord ItineraryWord::parse(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  ItineraryWord w;
  auto open = text.find('(');
  if (open == std::string::npos) {
    if (text.find(')') != std::string::npos) throw ParseError("unbalanced ')' in word '" + raw + "'");
    w.preperiod = parse_symbols(text);
  } else {
    if (text.back() != ')' || text.find('(', open + 1) != std::string::npos ||
        text.find(')') != text.size() - 1)
      throw ParseError("period must be a single trailing '(...)' in word '" + raw + "'");
    std::string pre = text.substr(0, open);
    if (!pre.empty() && pre.back() == ',') pre.pop_back();
    w.preperiod = parse_symbols(pre);
    w.period = parse_symbols(text.substr(open + 1, text.size() - open - 2));
    if (w.period.empty()) throw ParseError("empty period in word '" + raw + "'");
  }
  if (w.preperiod.empty() && w.period.empty()) throw ParseError("empty word");
  for (int s : w.preperiod)
    if (s < 1) throw ParseError("symbols start at 1");
  for (int s : w.period)
    if (s < 1) throw ParseError("symbols start at 1");
  return w;
}

std::string ItineraryWord::str() const {
  bool commas = max_symbol() > 9;
  std::string out = print_symbols(preperiod, commas);
  if (!period.empty()) out += (commas && !preperiod.empty() ? ",(" : "(") + print_symbols(period, commas) + ")";
  return out;
}

int ItineraryWord::max_symbol() const {
  int m = 0;
  for (int s : preperiod) m = std::max(m, s);
  for (int s : period) m = std::max(m, s);
  return m;
}

ItineraryWord ItineraryWord::normalized() const {
  ItineraryWord w = *this;
  if (w.period.empty()) return w;
  w.period = primitive_root(w.period);
  while (!w.preperiod.empty() && w.preperiod.back() == w.period.back()) {
    w.preperiod.pop_back();
    std::rotate(w.period.rbegin(), w.period.rbegin() + 1, w.period.rend());
  }
  return w;
}

ItineraryWord ItineraryWord::shifted() const {
  ItineraryWord w = *this;
  if (!w.preperiod.empty()) {
    w.preperiod.erase(w.preperiod.begin());
  } else if (!w.period.empty()) {
    std::rotate(w.period.begin(), w.period.begin() + 1, w.period.end());
  }
  return w;
}

std::vector<int> ItineraryWord::prefix(int length) const {
  std::vector<int> out;
  for (int k = 0; k < length; ++k) {
    size_t i = static_cast<size_t>(k);
    if (i < preperiod.size()) {
      out.push_back(preperiod[i]);
    } else if (!period.empty()) {
      out.push_back(period[(i - preperiod.size()) % period.size()]);
    } else {
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classifier

std::string to_string(Regularity r) { return r == Regularity::Quasicircle ? "Quasicircle" : "NotQuasicircle"; }

std::vector<int> critical_runs(MapKind kind, int n, const std::vector<int>& s) {
  std::vector<int> runs;
  const size_t N = s.size();
  if (kind == MapKind::ParabolicR) {
    size_t k = 0;
    while (k < N) {
      if (s[k] != 1 && s[k] != n) {
        ++k;
        continue;
      }
      size_t j = k + 1;
      while (j < N && (s[j] == 1 || s[j] == n) && s[j] != s[j - 1]) ++j;
      runs.push_back(static_cast<int>(j - k));
      k = j;
    }
    return runs;
  }
  auto counts = [&](int sym) { return sym == 1 || (kind == MapKind::ParabolicQ && sym == n); };
  size_t k = 0;
  while (k < N) {
    if (!counts(s[k])) {
      ++k;
      continue;
    }
    size_t j = k + 1;
    while (j < N && s[j] == s[k]) ++j;
    runs.push_back(static_cast<int>(j - k));
    k = j;
  }
  return runs;
}

Regularity classify_itinerary(MapKind kind, int n, const ItineraryWord& word) {
  if (kind != MapKind::ParabolicP && kind != MapKind::ParabolicQ && kind != MapKind::ParabolicR)
    throw Unsupported("itinerary classification covers P, Q and R");
  if (word.max_symbol() > n) throw ConstraintViolated("symbol exceeds n = " + std::to_string(n));
  if (!word.periodic()) throw Undecidable("word '" + word.str() + "' has no periodic tail");
  // A run is unbounded exactly when it survives a whole cycle; three copies suffice to see it.
  std::vector<int> p = primitive_root(word.period);
  std::vector<int> cycles;
  for (int k = 0; k < 3; ++k) cycles.insert(cycles.end(), p.begin(), p.end());
  for (int r : critical_runs(kind, n, cycles))
    if (r >= static_cast<int>(2 * p.size())) return Regularity::NotQuasicircle;
  return Regularity::Quasicircle;
}

Regularity classify_run_lengths(const RunLengthSequence& runs) {
  if (runs.step < 0) throw ConstraintViolated("run lengths cannot shrink forever");
  return runs.unbounded() ? Regularity::NotQuasicircle : Regularity::Quasicircle;
}

// ---------------------------------------------------------------------------
// Bands

BandMap::BandMap(const MapSpec& spec) {
  if (!spec.degrees) throw Unsupported("bands need a degree vector");
  for (int i = 1; i < spec.deg().n(); ++i) t_.push_back(real_cast<double>(spec.rings.modulus(i)));
  for (auto& t : canonical_traps(spec)) traps_.push_back(t.region.cast<double>());
}

double BandMap::outer_radius(int band) const {
  if (band == 1) return 1.0;
  return threshold(band - 1);
}

double BandMap::inner_radius(int band) const {
  if (band < n()) return threshold(band);
  double prev = threshold(n() - 1);
  double prev2 = n() >= 3 ? threshold(n() - 2) : 1.0;
  return prev * prev / prev2;
}

bool BandMap::in_trap(const Complex<double>& z) const {
  for (auto& r : traps_)
    if (r.contains(z)) return true;
  return false;
}

int BandMap::symbol(const Complex<double>& z) const {
  if (in_trap(z)) throw OutOfBand("point lies inside a trap region");
  double m = std::abs(z);
  for (int i = 1; i < n(); ++i)
    if (m > threshold(i)) return i;
  return n();
}

int symbol_of(const MapSpec& spec, const mp_complex& z) {
  const int n = spec.deg().n();
  for (auto& t : canonical_traps(spec))
    if (t.region.contains(z)) throw OutOfBand("point lies inside trap " + t.name);
  mp_real m = abs(z);
  for (int i = 1; i < n; ++i)
    if (m > spec.rings.modulus(i)) return i;
  return n;
}

// ---------------------------------------------------------------------------
// Curves

double ComponentCurve::diameter() const {
  // Projections onto 64 directions, then the widest.
  double best = 0;
  for (int k = 0; k < 64; ++k) {
    Complex<double> u = std::polar(1.0, M_PI * k / 64);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (auto& z : vertices) {
      double p = z.real() * u.real() + z.imag() * u.imag();
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

ComponentCurve circle_curve(double radius, int samples) {
  if (samples < 3) throw ConstraintViolated("a closed curve needs at least 3 vertices");
  ComponentCurve c;
  for (int k = 0; k < samples; ++k) c.vertices.push_back(std::polar(radius, 2 * M_PI * k / samples));
  c.winding = 1;
  return c;
}

int winding_number(const std::vector<Complex<double>>& v) {
  double total = 0;
  for (size_t k = 0; k < v.size(); ++k) total += std::arg(v[(k + 1) % v.size()] / v[k]);
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

namespace {

struct Corrected {
  Complex<double> z;
  int steps;
  bool ok;
};

Corrected newton_to(const RationalMap<double>& f, Complex<double> z, const Complex<double>& target,
                    const ContinuationOptions& opt, int max_steps) {
  for (int k = 0; k <= max_steps; ++k) {
    auto v = f(DualComplex<double>::variable(z));
    if (!finite(v.v) || !finite(v.d) || std::abs(v.d) == 0) return {z, k, false};
    Complex<double> dz = (v.v - target) / v.d;
    z -= dz;
    if (!finite(z)) return {z, k, false};
    if (std::abs(dz) <= opt.newton_tol * std::abs(z)) return {z, k + 1, true};
  }
  return {z, max_steps, false};
}

}  // namespace

ComponentCurve pull_back_curve(const MapSpec& spec, const ComponentCurve& curve, int band,
                               const ContinuationOptions& opt) {
  BandMap bands(spec);
  if (band < 1 || band > bands.n()) throw ConstraintViolated("target symbol out of range");
  const auto& in = curve.vertices;
  if (in.size() < 3) throw ConstraintViolated("input curve needs at least 3 vertices");
  RationalMap<double> f = rational_map<double>(spec);
  const int di = spec.deg().d(band);

  auto in_band = [&](const Complex<double>& z) {
    try {
      return bands.symbol(z) == band;
    } catch (const OutOfBand&) {
      return false;
    }
  };

  // Seed: the in-band preimage of in[0] closest to the log-radial midpoint.
  const double mid = bands.midpoint(band);
  bool have = false;
  Complex<double> z;
  double best = 0;
  for (int k = 0; k < opt.seed_count; ++k) {
    Corrected c = newton_to(f, std::polar(mid, 2 * M_PI * (k + 0.5) / opt.seed_count), in[0], opt, 80);
    if (!c.ok || !in_band(c.z)) continue;
    double key = std::abs(std::log(std::abs(c.z) / mid));
    if (!have || key < best - 1e-12) {
      have = true;
      best = key;
      z = c.z;
    }
  }
  if (!have) throw SeedNotFound("no preimage of the curve start in band " + std::to_string(band));

  ComponentCurve out;
  out.depth = curve.depth + 1;
  out.word.push_back(band);
  out.word.insert(out.word.end(), curve.word.begin(), curve.word.end());
  const size_t N = in.size();
  out.vertices.reserve(N * static_cast<size_t>(di) + 1);
  out.vertices.push_back(z);
  for (int lap = 0; lap < di; ++lap) {
    for (size_t k = 0; k < N; ++k) {
      const Complex<double> t0 = in[k], t1 = in[(k + 1) % N];
      double s = 0, h = 1.0 / opt.substeps;
      while (s < 1 - 1e-15) {
        double hh = std::min(h, 1 - s);
        Complex<double> target = t0 + (t1 - t0) * (s + hh);
        auto v = f(DualComplex<double>::variable(z));
        Complex<double> predicted = z + (target - v.v) / v.d;
        Corrected c = newton_to(f, predicted, target, opt, opt.max_newton + 3);
        if (!c.ok || c.steps > opt.max_newton) {
          h /= 2;
          if (h < opt.min_step)
            throw ContinuationBreakdown("corrector stalled near t = " + std::to_string((k + s) / N) + " on lap " +
                                        std::to_string(lap));
          continue;
        }
        z = c.z;
        s += hh;
      }
      out.vertices.push_back(z);
    }
  }
  Complex<double> last = out.vertices.back();
  out.vertices.pop_back();
  out.closure_gap = std::abs(last - out.vertices.front());
  out.winding = winding_number(out.vertices);
  if (out.winding == -1) {
    // Orientation-reversing branch: traverse backwards from the same start vertex.
    std::reverse(out.vertices.begin() + 1, out.vertices.end());
    out.winding = 1;
  }
  for (auto& v : out.vertices)
    if (!in_band(v)) throw ContinuationBreakdown("pullback left band " + std::to_string(band));
  if (out.closure_gap > 1e-8 * out.diameter()) throw ContinuationBreakdown("pullback did not close");
  return out;
}

ComponentCurve trace_component(const MapSpec& spec, const std::vector<int>& word, double base_radius, int samples,
                               const ContinuationOptions& opt) {
  if (word.empty()) throw ConstraintViolated("word must have at least one symbol");
  ComponentCurve c = circle_curve(base_radius, samples);
  double gap = 0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    c = pull_back_curve(spec, c, *it, opt);
    gap = std::max(gap, c.closure_gap);
  }
  c.closure_gap = gap;
  return c;
}

ItineraryWord itinerary_of_point(const MapSpec& spec, const mp_complex& z0, int length) {
  RationalMap<mp_real> f = rational_map_mp(spec);
  const int n = spec.deg().n();
  std::vector<CanonicalTrap> traps = canonical_traps(spec);
  const mp_real slack = pow(mp_real(10), -(spec.precision.significant_digits - 20));
  ItineraryWord w;
  SpherePoint<mp_real> z{z0, false};
  for (int k = 0; k < length; ++k) {
    for (auto& t : traps)
      if (t.region.margin(z) > slack * t.region.boundary_diameter())
        throw OrbitEscaped("orbit entered trap " + t.name + " after " + std::to_string(k) + " steps");
    int sym = n;
    for (int i = 1; i < n; ++i)
      if (abs(z.z) > spec.rings.modulus(i)) {
        sym = i;
        break;
      }
    w.preperiod.push_back(sym);
    Evaluation<mp_real> e = evaluate(f, z);
    z = e.at_infinity ? SpherePoint<mp_real>::at_infinity() : SpherePoint<mp_real>{e.value.v, false};
  }
  return w;
}

std::vector<int> forward_symbols(const MapSpec& spec, const Complex<double>& z0, int length) {
  BandMap bands(spec);
  RationalMap<double> f = rational_map<double>(spec);
  std::vector<int> out;
  Complex<double> z = z0;
  for (int k = 0; k < length; ++k) {
    out.push_back(bands.symbol(z));
    z = f(z);
  }
  return out;
}

std::vector<Complex<double>> image_of_curve(const MapSpec& spec, const ComponentCurve& curve) {
  RationalMap<double> f = rational_map<double>(spec);
  std::vector<Complex<double>> out;
  out.reserve(curve.vertices.size());
  for (auto& z : curve.vertices) out.push_back(f(z));
  return out;
}

// ---------------------------------------------------------------------------
// Turning

double turning_constant(const ComponentCurve& curve, long pair_budget) {
  const auto& z = curve.vertices;
  const long N = static_cast<long>(z.size());
  if (N < 64) throw ConstraintViolated("turning needs at least 64 vertices");
  if (pair_budget < 1) throw ConstraintViolated("pair budget must be positive");
  constexpr int K = 64;
  std::array<Complex<double>, K> dirs;
  for (int k = 0; k < K; ++k) dirs[static_cast<size_t>(k)] = std::polar(1.0, M_PI * k / K);

  long stride = 1;
  if (N * (N - 1) / 2 > pair_budget) {
    long ratio = (N * N + pair_budget - 1) / pair_budget;
    stride = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(ratio))));
  }
  const long nb = (N + stride - 1) / stride;
  std::vector<long> idx(static_cast<size_t>(nb));
  for (long b = 0; b < nb; ++b) idx[static_cast<size_t>(b)] = b * stride;

  // Block b spans vertices idx[b] .. idx[b+1] inclusive (the last block wraps to vertex 0).
  using Ext = std::array<double, K>;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Ext> bmin(static_cast<size_t>(nb)), bmax(static_cast<size_t>(nb));
  for (long b = 0; b < nb; ++b) {
    Ext lo, hi;
    lo.fill(inf);
    hi.fill(-inf);
    long end = b + 1 < nb ? idx[static_cast<size_t>(b + 1)] : N;
    for (long v = idx[static_cast<size_t>(b)]; v <= end; ++v) {
      const Complex<double>& p = z[static_cast<size_t>(v % N)];
      for (int k = 0; k < K; ++k) {
        double q = p.real() * dirs[static_cast<size_t>(k)].real() + p.imag() * dirs[static_cast<size_t>(k)].imag();
        lo[static_cast<size_t>(k)] = std::min(lo[static_cast<size_t>(k)], q);
        hi[static_cast<size_t>(k)] = std::max(hi[static_cast<size_t>(k)], q);
      }
    }
    bmin[static_cast<size_t>(b)] = lo;
    bmax[static_cast<size_t>(b)] = hi;
  }
  // pre[b]: blocks 0..b-1; suf[b]: blocks b..nb-1.
  std::vector<Ext> pre_min(static_cast<size_t>(nb + 1)), pre_max(static_cast<size_t>(nb + 1)),
      suf_min(static_cast<size_t>(nb + 1)), suf_max(static_cast<size_t>(nb + 1));
  pre_min[0].fill(inf);
  pre_max[0].fill(-inf);
  suf_min[static_cast<size_t>(nb)].fill(inf);
  suf_max[static_cast<size_t>(nb)].fill(-inf);
  for (long b = 0; b < nb; ++b)
    for (int k = 0; k < K; ++k) {
      size_t i = static_cast<size_t>(b), j = static_cast<size_t>(k);
      pre_min[i + 1][j] = std::min(pre_min[i][j], bmin[i][j]);
      pre_max[i + 1][j] = std::max(pre_max[i][j], bmax[i][j]);
    }
  for (long b = nb - 1; b >= 0; --b)
    for (int k = 0; k < K; ++k) {
      size_t i = static_cast<size_t>(b), j = static_cast<size_t>(k);
      suf_min[i][j] = std::min(suf_min[i + 1][j], bmin[i][j]);
      suf_max[i][j] = std::max(suf_max[i + 1][j], bmax[i][j]);
    }

  double best = 0;
  Ext fmin, fmax;
  for (long a = 0; a < nb; ++a) {
    fmin.fill(inf);
    fmax.fill(-inf);
    const Complex<double>& za = z[static_cast<size_t>(idx[static_cast<size_t>(a)])];
    for (long b = a + 1; b < nb; ++b) {
      const size_t pb = static_cast<size_t>(b - 1);
      double w1 = 0, w2 = 0;
      for (int k = 0; k < K; ++k) {
        size_t j = static_cast<size_t>(k);
        fmin[j] = std::min(fmin[j], bmin[pb][j]);
        fmax[j] = std::max(fmax[j], bmax[pb][j]);
        w1 = std::max(w1, fmax[j] - fmin[j]);
        double lo = std::min(suf_min[static_cast<size_t>(b)][j], pre_min[static_cast<size_t>(a)][j]);
        double hi = std::max(suf_max[static_cast<size_t>(b)][j], pre_max[static_cast<size_t>(a)][j]);
        w2 = std::max(w2, hi - lo);
      }
      double chord = std::abs(z[static_cast<size_t>(idx[static_cast<size_t>(b)])] - za);
      if (chord == 0) throw DegenerateCurve("repeated vertex in curve");
      best = std::max(best, std::min(w1, w2) / chord);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Hausdorff distance

namespace {

class PointGrid {
 public:
  explicit PointGrid(const std::vector<Complex<double>>& pts) : pts_(pts) {
    lo_ = hi_ = pts.front();
    for (auto& p : pts) {
      lo_ = {std::min(lo_.real(), p.real()), std::min(lo_.imag(), p.imag())};
      hi_ = {std::max(hi_.real(), p.real()), std::max(hi_.imag(), p.imag())};
    }
    double w = std::max(hi_.real() - lo_.real(), hi_.imag() - lo_.imag());
    side_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(pts.size()))));
    cell_ = w > 0 ? w / side_ : 1.0;
    cells_.assign(static_cast<size_t>(side_) * side_, {});
    for (size_t k = 0; k < pts.size(); ++k) cells_[cell_index(pts[k])].push_back(k);
  }

  double nearest(const Complex<double>& q) const {
    auto [cx, cy] = coords(q);
    double best = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring <= 2 * side_; ++ring) {
      for (int x = cx - ring; x <= cx + ring; ++x)
        for (int y = cy - ring; y <= cy + ring; ++y) {
          if (std::max(std::abs(x - cx), std::abs(y - cy)) != ring) continue;
          if (x < 0 || y < 0 || x >= side_ || y >= side_) continue;
          for (size_t k : cells_[static_cast<size_t>(x) * side_ + y]) best = std::min(best, std::abs(pts_[k] - q));
        }
      // Cells beyond this ring are at least ring * cell_ away from q's cell.
      if (best < ring * cell_) break;
    }
    return best;
  }

 private:
  std::pair<int, int> coords(const Complex<double>& q) const {
    auto clampi = [&](double v) { return std::clamp(static_cast<int>(std::floor(v / cell_)), 0, side_ - 1); };
    return {clampi(q.real() - lo_.real()), clampi(q.imag() - lo_.imag())};
  }
  size_t cell_index(const Complex<double>& q) const {
    auto [x, y] = coords(q);
    return static_cast<size_t>(x) * side_ + y;
  }

  const std::vector<Complex<double>>& pts_;
  Complex<double> lo_, hi_;
  int side_;
  double cell_;
  std::vector<std::vector<size_t>> cells_;
};

}  // namespace

double hausdorff_distance(const std::vector<Complex<double>>& a, const std::vector<Complex<double>>& b) {
  if (a.empty() || b.empty()) throw ConstraintViolated("Hausdorff distance of an empty set");
  PointGrid ga(a), gb(b);
  double d = 0;
  for (auto& p : a) d = std::max(d, gb.nearest(p));
  for (auto& p : b) d = std::max(d, ga.nearest(p));
  return d;
}

}  // namespace cantor
