#include "cantor/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace cantor {

std::string to_string(Basin b) {
  switch (b) {
    case Basin::ParabolicOuter: return "ParabolicOuter";
    case Basin::ParabolicInner: return "ParabolicInner";
    case Basin::AttractingOrigin: return "AttractingOrigin";
    case Basin::Undecided: return "Undecided";
  }
  return "Undecided";
}

Basin basin_of(TrapLabel label) {
  switch (label) {
    case TrapLabel::Outer: return Basin::ParabolicOuter;
    case TrapLabel::Inner: return Basin::ParabolicInner;
    case TrapLabel::Origin: return Basin::AttractingOrigin;
  }
  return Basin::Undecided;
}

std::vector<LabeledTrap> certified_traps(const MapSpec& spec) {
  std::vector<CanonicalTrap> canon = canonical_traps(spec);
  if (canon.empty()) throw Unsupported("no certified traps for kind " + to_string(spec.kind));
  std::vector<LabeledTrap> out;
  for (const CanonicalTrap& t : canon) {
    auto found = find_certified_trap(spec, t);
    if (!found) throw CertificateFailed("trap " + t.name + " could not be certified: " + t.region.describe());
    out.push_back({found->trap.region, basin_of(t.label)});
  }
  return out;
}

BasinLabel classify_point(const MapSpec& spec, const mp_complex& z, int budget) {
  if (budget < 1) throw ConstraintViolated("budget must be at least 1");
  Classifier<mp_real> c(spec);
  return c.classify(z, budget);
}

Viewport Viewport::from_bounds(double xmin, double xmax, double ymin, double ymax) {
  if (!(xmin < xmax) || !(ymin < ymax)) throw ConstraintViolated("viewport bounds must be increasing");
  return {(xmin + xmax) / 2, (ymin + ymax) / 2, xmax - xmin, ymax - ymin};
}

double LabelGrid::undecided_fraction() const {
  if (labels.empty()) return 0;
  auto n = std::count_if(labels.begin(), labels.end(), [](const BasinLabel& l) { return l.tag == Basin::Undecided; });
  return static_cast<double>(n) / static_cast<double>(labels.size());
}

bool needs_extended_precision(const MapSpec& spec, const Viewport& vp) {
  if (spec.kind != MapKind::ParabolicQ && spec.kind != MapKind::ParabolicR) return false;
  double scale = real_cast<double>(spec.inner_parabolic_point());
  return std::max(vp.width, vp.height) < 10 * scale;
}

namespace {

template <class R>
void render_rows(const Classifier<R>& c, LabelGrid& grid, int budget, int workers) {
  const Resolution res = grid.resolution;
  std::atomic<int> next_row{0};
  auto work = [&] {
    for (int row = next_row++; row < res.height; row = next_row++)
      for (int col = 0; col < res.width; ++col)
        grid.labels[static_cast<size_t>(row) * res.width + col] =
            c.classify(pixel_center<R>(grid.viewport, res, row, col), budget);
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace

LabelGrid render(const MapSpec& spec, const std::vector<LabeledTrap>& traps, const Viewport& vp, const Resolution& res,
                 int budget, int workers) {
  if (res.width < 16 || res.height < 16) throw ConstraintViolated("resolution must be at least 16x16");
  if (budget < 1) throw ConstraintViolated("budget must be at least 1");
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, res.height);
  LabelGrid grid{vp, res, std::vector<BasinLabel>(static_cast<size_t>(res.width) * res.height)};
  if (needs_extended_precision(spec, vp))
    render_rows(Classifier<long double>(spec, traps), grid, budget, workers);
  else
    render_rows(Classifier<double>(spec, traps), grid, budget, workers);
  return grid;
}

LabelGrid render(const MapSpec& spec, const Viewport& vp, const Resolution& res, int budget, int workers) {
  return render(spec, certified_traps(spec), vp, res, budget, workers);
}

Rgb palette(Basin b) {
  switch (b) {
    case Basin::ParabolicOuter: return {200, 200, 200};
    case Basin::ParabolicInner:
    case Basin::AttractingOrigin: return {255, 255, 255};
    case Basin::Undecided: return {0, 0, 0};
  }
  return {0, 0, 0};
}

std::string to_ppm(const LabelGrid& grid) {
  std::string out = "P6\n" + std::to_string(grid.resolution.width) + " " + std::to_string(grid.resolution.height) + "\n255\n";
  out.reserve(out.size() + grid.labels.size() * 3);
  for (const BasinLabel& l : grid.labels) {
    Rgb c = palette(l.tag);
    out.push_back(static_cast<char>(c.r));
    out.push_back(static_cast<char>(c.g));
    out.push_back(static_cast<char>(c.b));
  }
  return out;
}

std::vector<BasinLabel> classify_segment(const MapSpec& spec, const mp_complex& a, const mp_complex& b, int count,
                                         int budget) {
  if (count < 2) throw ConstraintViolated("segment needs at least two samples");
  Classifier<double> c(spec);
  Complex<double> da = complex_cast<double>(a), db = complex_cast<double>(b);
  std::vector<BasinLabel> out;
  for (int k = 0; k < count; ++k) {
    double t = static_cast<double>(k) / (count - 1);
    out.push_back(c.classify(da + t * (db - da), budget));
  }
  return out;
}

std::vector<LabelRun> label_runs(const std::vector<BasinLabel>& labels) {
  std::vector<LabelRun> runs;
  for (int k = 0; k < static_cast<int>(labels.size()); ++k) {
    if (!runs.empty() && runs.back().tag == labels[static_cast<size_t>(k)].tag)
      ++runs.back().length;
    else
      runs.push_back({labels[static_cast<size_t>(k)].tag, k, 1});
  }
  return runs;
}

}  // namespace cantor
