#include "hbac/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "hbac/engine.hpp"

namespace hbac {

double objective(const std::vector<double>& durations, const OptimizationProblem& p) {
  const Sequence resolved = resolve_auto_waits(p.sequence, durations);
  const Trace trace = execute(resolved, p.config);
  check_qubit_index(trace.final_state, p.target);
  return trace.steps.back().biases_after[static_cast<std::size_t>(p.target)];
}

std::vector<std::pair<double, double>> effective_bounds(const OptimizationProblem& p) {
  const std::size_t k = p.sequence.auto_labels().size();
  if (k == 0) throw Error(Errc::invalid_parameter, "sequence has no auto waits to optimize");
  std::vector<std::pair<double, double>> bounds = p.bounds;
  if (bounds.empty()) {
    double max_t1 = 0.0;
    for (const auto& q : p.config.qubits) max_t1 = std::max(max_t1, q.t1);
    bounds.assign(k, {0.0, 10.0 * max_t1});
  }
  if (bounds.size() != k) {
    throw Error(Errc::invalid_parameter, fmt::format("{} bounds for {} auto waits", bounds.size(), k));
  }
  for (const auto& [lo, hi] : bounds) {
    if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
      throw Error(Errc::invalid_parameter, fmt::format("invalid wait bounds ({}, {})", lo, hi));
    }
  }
  if (!(p.duration_tolerance > 0.0) || !(p.objective_tolerance >= 0.0) || p.max_cycles < 1) {
    throw Error(Errc::invalid_parameter, "invalid optimizer tolerances");
  }
  return bounds;
}

namespace {

OptimizationResult ascend(const OptimizationProblem& p, const std::vector<std::pair<double, double>>& bounds,
                          std::vector<double> start) {
  OptimizationResult r;
  auto eval = [&](const std::vector<double>& x) {
    ++r.evaluations;
    const double v = objective(x, p);
    if (!std::isfinite(v)) {
      throw Error(Errc::non_finite_objective,
                  fmt::format("objective is {} at durations [{}]", v, fmt::join(x, ", ")));
    }
    return v;
  };

  r.durations = std::move(start);
  r.objective = eval(r.durations);
  for (r.cycles = 1; r.cycles <= p.max_cycles; ++r.cycles) {
    const double before = r.objective;
    for (std::size_t k = 0; k < r.durations.size(); ++k) {
      std::vector<double> x = r.durations;
      const auto line = golden_section_maximize(
          [&](double t) {
            x[k] = t;
            return eval(x);
          },
          bounds[k].first, bounds[k].second, p.duration_tolerance);
      if (line.fx > r.objective) {
        r.durations[k] = line.x;
        r.objective = line.fx;
      }
    }
    if (r.objective - before < p.objective_tolerance) break;
  }
  r.cycles = std::min(r.cycles, p.max_cycles);
  return r;
}

}  // namespace

OptimizationResult optimize_waits(const OptimizationProblem& p) {
  const auto bounds = effective_bounds(p);

  std::vector<double> mid;
  for (const auto& [lo, hi] : bounds) mid.push_back(0.5 * (lo + hi));
  OptimizationResult best = ascend(p, bounds, mid);

  std::mt19937_64 rng(p.seed);
  int evaluations = best.evaluations;
  for (int r = 0; r < p.random_restarts; ++r) {
    std::vector<double> start;
    for (const auto& [lo, hi] : bounds) start.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
    OptimizationResult candidate = ascend(p, bounds, std::move(start));
    evaluations += candidate.evaluations;
    if (candidate.objective > best.objective ||
        (candidate.objective == best.objective && candidate.durations < best.durations)) {
      best = std::move(candidate);
    }
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace hbac
