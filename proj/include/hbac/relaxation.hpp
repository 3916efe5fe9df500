#pragma once

// Open-system part of the cooling cycle: every qubit relaxes independently
// towards its thermal marginal with time constant T1. T2 is not simulated
// as dephasing; it only bounds the coherent time spent in gates.

#include <span>
#include <string>
#include <vector>

#include "hbac/spin_state.hpp"

namespace hbac {

struct RelaxationClock {
  double elapsed_total = 0.0;       // s
  double coherent_time_used = 0.0;  // s, time spent inside gates

  void advance_wait(double dt);
  void advance_gate(double dt);
};

/// exp(-dt / t1).
double relax_factor(double dt, double t1);

/// Applies to every qubit i the single-bit channel
///   m_i(x | y) = λ_i δ_xy + (1 − λ_i) π_i(x),   λ_i = exp(−dt / T1_i),
/// where π_i is the thermal marginal of qubits[i] (absolute bias).
DiagonalState relax(DiagonalState s, std::span<const QubitSpec> qubits, double dt);

struct T1RatioRow {
  std::string name;
  double t1 = 0.0;
  double ratio_to_reset = 0.0;
};

std::vector<T1RatioRow> t1_ratio_report(std::span<const QubitSpec> qubits, int reset);

// Relative changes between two T1 measurements of the same molecule, in
// percent of the "before" value (negative = decrease).
struct T1Change {
  std::string name;
  double t1_change_percent = 0.0;
  double ratio_before = 0.0;
  double ratio_after = 0.0;
  double ratio_change_percent = 0.0;
};

std::vector<T1Change> compare_t1(std::span<const QubitSpec> before, std::span<const QubitSpec> after, int reset);

}  // namespace hbac
