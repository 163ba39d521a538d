#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cantor/certify.hpp"

namespace cantor {

enum class Basin : std::uint8_t { ParabolicOuter, ParabolicInner, AttractingOrigin, Undecided };

std::string to_string(Basin b);

struct BasinLabel {
  Basin tag = Basin::Undecided;
  int steps = 0;  // iterations taken when the orbit entered a trap (or the budget)
  bool operator==(const BasinLabel&) const = default;
};

Basin basin_of(TrapLabel label);

// Certified traps of a spec, each tagged with its basin.
struct LabeledTrap {
  Region<mp_real> region;
  Basin basin;
};
std::vector<LabeledTrap> certified_traps(const MapSpec& spec);

// Orbit classifier at scalar type R. An orbit point counts as trapped only when it
// is more than a few ulps inside, so boundary points such as the parabolic point stay undecided. For kind R the traps are invariant under the
// second iterate only, so the orbit is advanced by f o f.
template <class R>
class Classifier {
 public:
  Classifier(const MapSpec& spec, const std::vector<LabeledTrap>& traps)
      : f_(rational_map<R>(spec)), second_(spec.kind == MapKind::ParabolicR) {
    for (auto& t : traps) {
      Region<R> r = t.region.template cast<R>();
      traps_.push_back({r, t.basin, R(64) * epsilon<R>() * r.boundary_diameter()});
    }
  }
  explicit Classifier(const MapSpec& spec) : Classifier(spec, certified_traps(spec)) {}

  BasinLabel classify(const Complex<R>& z0, int budget) const {
    SpherePoint<R> z{z0, false};
    for (int k = 0;; ++k) {
      for (auto& t : traps_)
        if (t.region.margin(z) > t.slack) return {t.basin, k};
      if (k >= budget) return {Basin::Undecided, k};
      z = step(z);
      if (second_) z = step(z);
    }
  }

  const RationalMap<R>& map() const { return f_; }

 private:
  struct Trap {
    Region<R> region;
    Basin basin;
    R slack;  // points this close to the boundary do not count as inside
  };

  SpherePoint<R> step(const SpherePoint<R>& z) const {
    using std::abs;
    if (!z.infinite && abs(z.z) <= R(kReciprocalChartRadius) && z.z != Complex<R>(0)) {
      Complex<R> w = f_(z.z);
      if (finite(w)) return {w, false};
    }
    Evaluation<R> e = evaluate(f_, z);
    if (e.at_infinity) return SpherePoint<R>::at_infinity();
    return {e.value.v, false};
  }

  RationalMap<R> f_;
  bool second_;
  std::vector<Trap> traps_;
};

BasinLabel classify_point(const MapSpec& spec, const mp_complex& z, int budget);

// Axis-aligned window of the plane.
struct Viewport {
  double center_re = 0, center_im = 0, width = 2, height = 2;

  static Viewport from_bounds(double xmin, double xmax, double ymin, double ymax);
  double xmin() const { return center_re - width / 2; }
  double ymax() const { return center_im + height / 2; }
};

struct Resolution {
  int width = 256;
  int height = 256;
};

struct LabelGrid {
  Viewport viewport;
  Resolution resolution;
  std::vector<BasinLabel> labels;  // row-major, row 0 at the top

  const BasinLabel& at(int row, int col) const { return labels[static_cast<size_t>(row) * resolution.width + col]; }
  double undecided_fraction() const;
};

// Pixel center in the plane for (row, col); row 0 is the top edge.
template <class R>
Complex<R> pixel_center(const Viewport& vp, const Resolution& res, int row, int col) {
  R x = R(vp.xmin()) + (R(col) + R(0.5)) * R(vp.width) / R(res.width);
  R y = R(vp.ymax()) - (R(row) + R(0.5)) * R(vp.height) / R(res.height);
  return {x, y};
}

// True when the render switches from double to long double.
bool needs_extended_precision(const MapSpec& spec, const Viewport& vp);

// workers <= 0 uses the hardware concurrency.
LabelGrid render(const MapSpec& spec, const Viewport& vp, const Resolution& res, int budget, int workers = 0);
LabelGrid render(const MapSpec& spec, const std::vector<LabeledTrap>& traps, const Viewport& vp, const Resolution& res,
                 int budget, int workers = 0);

struct Rgb {
  std::uint8_t r, g, b;
};
Rgb palette(Basin b);

// Binary P6 image of a grid.
std::string to_ppm(const LabelGrid& grid);

// Labels along the segment from a to b at `count` evenly spaced points, endpoints included.
std::vector<BasinLabel> classify_segment(const MapSpec& spec, const mp_complex& a, const mp_complex& b, int count,
                                         int budget);

struct LabelRun {
  Basin tag;
  int begin;
  int length;
};
std::vector<LabelRun> label_runs(const std::vector<BasinLabel>& labels);

}  // namespace cantor
