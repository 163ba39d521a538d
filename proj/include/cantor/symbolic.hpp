#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cantor/certify.hpp"

namespace cantor {

// Eventually periodic word over {1..n}: preperiod followed by the period repeated forever.
struct ItineraryWord {
  std::vector<int> preperiod;
  std::vector<int> period;  // empty: finite word

  // "11(33)" means 11 followed by 33 repeated; commas separate multi-digit symbols.
  static ItineraryWord parse(const std::string& text);
  std::string str() const;

  // Primitive period, with the preperiod absorbed into it as far as possible.
  ItineraryWord normalized() const;
  ItineraryWord shifted() const;  // drops the first symbol
  bool periodic() const { return !period.empty(); }
  int max_symbol() const;
  // First `length` symbols.
  std::vector<int> prefix(int length) const;
  bool operator==(const ItineraryWord&) const = default;
};

std::vector<int> primitive_root(const std::vector<int>& period);

enum class Regularity { Quasicircle, NotQuasicircle };
std::string to_string(Regularity r);

Regularity classify_itinerary(MapKind kind, int n, const ItineraryWord& word);

// Maximal-run lengths of a run-length sequence: the explicit `lengths`, then
// continuing from the last one with common difference `step`.
struct RunLengthSequence {
  std::vector<long> lengths;
  long step = 0;
  bool unbounded() const { return step > 0; }
};
Regularity classify_run_lengths(const RunLengthSequence& runs);

// Lengths of the maximal runs that decide regularity: runs of 1 for P, runs of 1
// and runs of n for Q, alternating 1n blocks for R.
std::vector<int> critical_runs(MapKind kind, int n, const std::vector<int>& symbols);

// Band thresholds t_0 = infinity > t_1 > ... > t_{n-1} > t_n = 0 with t_i = |v_i|.
class BandMap {
 public:
  explicit BandMap(const MapSpec& spec);
  int n() const { return static_cast<int>(t_.size()) + 1; }
  double threshold(int i) const { return t_.at(static_cast<size_t>(i - 1)); }
  // Band radii with caps t_0 = 1, t_n = t_{n-1}^2 / t_{n-2}; midpoint is geometric.
  double inner_radius(int band) const;
  double outer_radius(int band) const;
  double midpoint(int band) const { return std::sqrt(inner_radius(band) * outer_radius(band)); }
  bool in_trap(const Complex<double>& z) const;
  int symbol(const Complex<double>& z) const;  // throws OutOfBand inside a trap

 private:
  std::vector<double> t_;
  std::vector<Region<double>> traps_;
};

int symbol_of(const MapSpec& spec, const mp_complex& z);

struct ComponentCurve {
  std::vector<Complex<double>> vertices;
  int depth = 0;
  std::vector<int> word;
  double closure_gap = 0;
  int winding = 0;

  double diameter() const;
};

ComponentCurve circle_curve(double radius, int samples);
int winding_number(const std::vector<Complex<double>>& closed);

struct ContinuationOptions {
  int substeps = 4;            // initial substeps per input edge
  int max_newton = 5;          // more corrector steps than this halves the step
  double min_step = 1e-12;     // floor on the parameter step
  double newton_tol = 1e-14;   // relative step size at convergence
  int seed_count = 64;
};

ComponentCurve pull_back_curve(const MapSpec& spec, const ComponentCurve& curve, int target_symbol,
                               const ContinuationOptions& opt = {});

// Applies the last symbol first so that the forward itinerary of the result starts with `word`.
ComponentCurve trace_component(const MapSpec& spec, const std::vector<int>& word, double base_radius, int samples,
                               const ContinuationOptions& opt = {});

// Symbols of z, f(z), ..., f^{length-1}(z); throws OrbitEscaped when the orbit enters a trap.
ItineraryWord itinerary_of_point(const MapSpec& spec, const mp_complex& z, int length);
std::vector<int> forward_symbols(const MapSpec& spec, const Complex<double>& z, int length);

inline constexpr long kDefaultPairBudget = 2000000;

// Largest diam(smaller arc) / chord over vertex pairs; diameters from 64 projection directions.
double turning_constant(const ComponentCurve& curve, long pair_budget = kDefaultPairBudget);

// Sampled Hausdorff distance between two vertex sets.
double hausdorff_distance(const std::vector<Complex<double>>& a, const std::vector<Complex<double>>& b);

// Image of every vertex under f.
std::vector<Complex<double>> image_of_curve(const MapSpec& spec, const ComponentCurve& curve);

}  // namespace cantor
