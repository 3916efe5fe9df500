#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hbac/config.hpp"
#include "hbac/seqlang.hpp"

namespace hbac {

struct OptimizationProblem {
  Sequence sequence;  // k >= 1 auto waits
  SystemConfig config;
  int target = 0;
  // Per auto wait, in order of appearance. Empty means (0, 10 max T1) for all.
  std::vector<std::pair<double, double>> bounds;
  double duration_tolerance = 1e-3;  // s
  double objective_tolerance = 1e-9;
  int max_cycles = 100;
  // Extra coordinate-ascent runs from uniformly drawn starting points.
  int random_restarts = 0;
  std::uint64_t seed = 0x5eed;
};

/// Final bias of the target (config units) with the auto waits set to `durations`.
double objective(const std::vector<double>& durations, const OptimizationProblem& p);

struct OptimizationResult {
  std::vector<double> durations;
  double objective = 0.0;
  int evaluations = 0;
  int cycles = 0;
};

/// Golden-section maximizer of f on [lo, hi]; stops once the bracket is
/// narrower than tol and returns its midpoint with f there.
struct LineMaximum {
  double x = 0.0;
  double fx = 0.0;
};
template <typename F>
LineMaximum golden_section_maximize(F&& f, double lo, double hi, double tol);

/// Cyclic coordinate ascent over the auto waits, golden-section search per
/// coordinate, starting from the midpoint of every interval.
OptimizationResult optimize_waits(const OptimizationProblem& p);

/// Bounds actually used for `p` (defaults filled in), validated.
std::vector<std::pair<double, double>> effective_bounds(const OptimizationProblem& p);

// ---------------------------------------------------------------------------

template <typename F>
LineMaximum golden_section_maximize(F&& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  if (b - a > tol) {
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = f(d);
      }
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace hbac
