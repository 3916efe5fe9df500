#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hbac/config.hpp"
#include "hbac/relaxation.hpp"
#include "hbac/seqlang.hpp"
#include "hbac/spin_state.hpp"

namespace hbac {

struct TraceStep {
  std::string op;  // "init" for the initial snapshot
  double time_after = 0.0;
  std::vector<double> biases_after;  // config bias units
  double entropy_after = 0.0;
  double coherent_time_used = 0.0;
};

struct Trace {
  std::vector<TraceStep> steps;
  Warnings warnings;
  DiagonalState initial;
  DiagonalState final_state;
};

/// Runs `seq` on `config`. Each gate applies its permutation, then the clock
/// advances by config.gate_duration with relaxation over that interval; each
/// wait relaxes only. The initial state defaults to thermal equilibrium.
Trace execute(const Sequence& seq, const SystemConfig& config,
              const std::optional<DiagonalState>& initial = std::nullopt);

struct FixedWait {
  double seconds = 0.0;
};
struct AutoWait {};
using WaitPolicy = std::variant<FixedWait, AutoWait>;

/// 3 T1 of the (single) reset qubit; ~95% re-thermalization.
double default_wait(const SystemConfig& config);

/// Two-reset cooling round for a 3-qubit system with one reset qubit:
///
///   swap reset far ; wait ; swap reset near ; wait ; comp target others
///
/// `near` is the computation qubit coupled to the reset qubit (when a
/// coupling graph is declared and singles one out); otherwise the qubit
/// with the longer T1 is loaded first. Auto waits are labelled w1, w2.
Sequence canonical_ac_schedule(const SystemConfig& config, int target, const WaitPolicy& wait_policy);

struct Metrics {
  double final_bias = 0.0;      // config units
  double cooling_factor = 0.0;  // final_bias / equilibrium bias of target
  double entropy_initial = 0.0;
  double entropy_final = 0.0;
  double bound_initial = 0.0;  // reversible_bias_bound(initial), config units
  double bypass_margin = 0.0;  // final_bias - bound_initial
  std::optional<double> effective_temperature;  // K, absolute mode with physical params
};

/// When require_temperature is set, a relative-unit config is an
/// Errc::unit_mismatch error.
Metrics trace_metrics(const Trace& trace, const SystemConfig& config, int target,
                      bool require_temperature = false);

struct SweepAxis {
  std::string path;  // qubits[<name|index>].{t1,t2,eq_bias}, waits.<label>, gate_duration_s, t2_budget_fraction
  std::vector<double> values;
};

struct SweepRow {
  double axis_value = 0.0;
  Metrics metrics;
};

struct SweepTable {
  std::string axis_path;
  std::string target_name;
  std::vector<SweepRow> rows;  // in axis order
};

/// Checks that `path` names a settable parameter of this config/sequence.
void check_parameter_path(const SystemConfig& config, const Sequence& seq, const std::string& path);

/// Applies one axis value. Returns the updated config and sequence.
std::pair<SystemConfig, Sequence> apply_parameter(SystemConfig config, Sequence seq, const std::string& path,
                                                  double value);

/// Evaluates every axis point on up to `threads` workers (0 = hardware
/// concurrency). Row order and contents do not depend on the thread count.
SweepTable sweep(const SystemConfig& config_template, const SweepAxis& axis, const Sequence& seq, int target,
                 unsigned threads = 0);

}  // namespace hbac
