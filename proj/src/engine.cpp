#include "hbac/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <regex>
#include <thread>

#include <fmt/format.h>

#include "hbac/gates.hpp"

namespace hbac {

namespace {

TraceStep snapshot(std::string op, const DiagonalState& s, const RelaxationClock& clock,
                   const SystemConfig& config) {
  TraceStep step;
  step.op = std::move(op);
  step.time_after = clock.elapsed_total;
  step.biases_after = marginal_biases(s);
  for (double& b : step.biases_after) b = config.to_config_units(b);
  step.entropy_after = shannon_entropy(s);
  step.coherent_time_used = clock.coherent_time_used;
  return step;
}

DiagonalState apply_gate(const DiagonalState& s, const OpKind& op, Warnings& warnings) {
  struct Apply {
    const DiagonalState& s;
    Warnings& warnings;
    DiagonalState operator()(const SwapOp& o) const { return swap_qubits(s, o.i, o.j, &warnings); }
    DiagonalState operator()(const CompOp& o) const { return compress_3b(s, o.target, o.a, o.b); }
    DiagonalState operator()(const NotOp& o) const { return not_qubit(s, o.i); }
    DiagonalState operator()(const PermOp& o) const { return apply_permutation(s, Permutation{o.pairs}); }
    DiagonalState operator()(const WaitOp&) const { return s; }
  };
  return std::visit(Apply{s, warnings}, op);
}

}  // namespace

Trace execute(const Sequence& seq, const SystemConfig& config, const std::optional<DiagonalState>& initial) {
  Trace trace;
  config.check(&trace.warnings);
  const auto qubits = config.physical_qubits();

  DiagonalState state = initial ? *initial : equilibrium_state(qubits);
  if (state.n_qubits() != config.n_qubits()) {
    throw Error(Errc::invalid_parameter, fmt::format("initial state has {} qubits, config has {}",
                                                     state.n_qubits(), config.n_qubits()));
  }
  for (const auto& op : seq.ops) {
    if (const auto* w = std::get_if<WaitOp>(&op.kind); w && w->is_auto()) {
      throw Error(Errc::unresolved_wait,
                  fmt::format("line {}: wait auto {} has no duration", op.source_line, w->auto_label));
    }
  }

  trace.initial = state;
  RelaxationClock clock;
  trace.steps.push_back(snapshot("init", state, clock, config));

  const std::optional<double> min_t2 = config.min_t2();
  bool budget_flagged = false;

  for (const auto& op : seq.ops) {
    if (const auto* w = std::get_if<WaitOp>(&op.kind)) {
      state = relax(std::move(state), qubits, w->seconds);
      clock.advance_wait(w->seconds);
    } else {
      state = apply_gate(state, op.kind, trace.warnings);
      state = relax(std::move(state), qubits, config.gate_duration);
      clock.advance_gate(config.gate_duration);
      if (min_t2 && !budget_flagged && clock.coherent_time_used > config.t2_budget_fraction * *min_t2) {
        trace.warnings.push_back(fmt::format("line {}: coherent time {} s exceeds T2 budget {} s",
                                             op.source_line, clock.coherent_time_used,
                                             config.t2_budget_fraction * *min_t2));
        budget_flagged = true;
      }
    }
    trace.steps.push_back(snapshot(format_op(op.kind), state, clock, config));
  }
  if (state.clamped_count() > 0) {
    trace.warnings.push_back(fmt::format("{} probabilities clamped to zero", state.clamped_count()));
  }
  trace.final_state = std::move(state);
  return trace;
}

double default_wait(const SystemConfig& config) {
  if (config.reset_qubits.size() != 1) {
    throw Error(Errc::unsupported_schedule, "default wait needs exactly one reset qubit");
  }
  return 3.0 * config.qubits[static_cast<std::size_t>(config.reset_qubits.front())].t1;
}

Sequence canonical_ac_schedule(const SystemConfig& config, int target, const WaitPolicy& wait_policy) {
  if (config.n_qubits() != 3) {
    throw Error(Errc::unsupported_schedule,
                fmt::format("canonical schedule is defined for 3 qubits, config has {}; write the sequence "
                            "by hand in the .acs DSL",
                            config.n_qubits()));
  }
  if (config.reset_qubits.size() != 1) {
    throw Error(Errc::unsupported_schedule, "canonical schedule needs exactly one reset qubit");
  }
  const int reset = config.reset_qubits.front();
  if (target < 0 || target >= 3 || target == reset) {
    throw Error(Errc::unsupported_schedule, fmt::format("target {} must be a computation qubit", target));
  }
  std::vector<int> comp;
  for (int q = 0; q < 3; ++q) {
    if (q != reset) comp.push_back(q);
  }
  const bool adj0 = config.adjacent(reset, comp[0]);
  const bool adj1 = config.adjacent(reset, comp[1]);
  if (!adj0 && !adj1) {
    throw Error(Errc::unsupported_schedule, "reset qubit is not coupled to any computation qubit");
  }
  int near = 0;
  int far = 0;
  if (adj0 != adj1) {
    near = adj0 ? comp[0] : comp[1];
    far = adj0 ? comp[1] : comp[0];
  } else {
    const auto t1 = [&](int q) { return config.qubits[static_cast<std::size_t>(q)].t1; };
    far = t1(comp[1]) > t1(comp[0]) ? comp[1] : comp[0];
    near = far == comp[0] ? comp[1] : comp[0];
  }

  auto wait = [&](const char* label) {
    if (std::holds_alternative<AutoWait>(wait_policy)) return WaitOp{0.0, label};
    const double s = std::get<FixedWait>(wait_policy).seconds;
    if (!(s >= 0.0) || !std::isfinite(s)) throw Error(Errc::invalid_parameter, "wait must be >= 0");
    return WaitOp{s, {}};
  };
  std::vector<int> others;
  for (int q = 0; q < 3; ++q) {
    if (q != target) others.push_back(q);
  }

  Sequence seq;
  seq.ops = {
      {SwapOp{reset, far}, 1},
      {wait("w1"), 2},
      {SwapOp{reset, near}, 3},
      {wait("w2"), 4},
      {CompOp{target, others[0], others[1]}, 5},
  };
  return seq;
}

Metrics trace_metrics(const Trace& trace, const SystemConfig& config, int target, bool require_temperature) {
  if (trace.steps.empty()) throw Error(Errc::invalid_parameter, "empty trace");
  check_qubit_index(trace.final_state, target);
  if (require_temperature && config.bias_unit != BiasUnit::absolute) {
    throw Error(Errc::unit_mismatch, "effective temperature needs absolute bias units");
  }

  Metrics m;
  const auto idx = static_cast<std::size_t>(target);
  m.final_bias = trace.steps.back().biases_after[idx];
  const double eq = config.qubits[idx].eq_bias;
  m.cooling_factor = m.final_bias / eq;
  m.entropy_initial = trace.steps.front().entropy_after;
  m.entropy_final = trace.steps.back().entropy_after;
  m.bound_initial = config.to_config_units(reversible_bias_bound(trace.initial, target).value());
  m.bypass_margin = m.final_bias - m.bound_initial;

  if (config.bias_unit == BiasUnit::absolute && config.physical) {
    m.effective_temperature =
        effective_temperature(Bias(m.final_bias), config.physical->delta_e, config.physical->k_boltzmann);
  } else if (require_temperature) {
    throw Error(Errc::unit_mismatch, "effective temperature needs physical parameters");
  }
  return m;
}

namespace {

struct ParsedPath {
  enum class Kind { qubit_field, wait, gate_duration, t2_budget_fraction } kind;
  int qubit = -1;
  std::string field;
};

ParsedPath parse_path(const SystemConfig& config, const Sequence& seq, const std::string& path) {
  static const std::regex qubit_re(R"(qubits\[([^\]]+)\]\.(t1|t2|eq_bias))");
  static const std::regex wait_re(R"(waits\.([A-Za-z_][A-Za-z0-9_]*))");
  std::smatch m;
  if (path == "gate_duration_s") return {ParsedPath::Kind::gate_duration, -1, {}};
  if (path == "t2_budget_fraction") return {ParsedPath::Kind::t2_budget_fraction, -1, {}};
  if (std::regex_match(path, m, qubit_re)) {
    try {
      return {ParsedPath::Kind::qubit_field, config.resolve_qubit(m[1].str()), m[2].str()};
    } catch (const Error&) {
      throw Error(Errc::unknown_parameter_path, fmt::format("unknown qubit in parameter path '{}'", path));
    }
  }
  if (std::regex_match(path, m, wait_re)) {
    const auto labels = seq.auto_labels();
    if (std::find(labels.begin(), labels.end(), m[1].str()) == labels.end()) {
      throw Error(Errc::unknown_parameter_path, fmt::format("sequence has no auto wait '{}'", m[1].str()));
    }
    return {ParsedPath::Kind::wait, -1, m[1].str()};
  }
  throw Error(Errc::unknown_parameter_path, fmt::format("unknown parameter path '{}'", path));
}

}  // namespace

void check_parameter_path(const SystemConfig& config, const Sequence& seq, const std::string& path) {
  (void)parse_path(config, seq, path);
}

std::pair<SystemConfig, Sequence> apply_parameter(SystemConfig config, Sequence seq, const std::string& path,
                                                  double value) {
  const ParsedPath p = parse_path(config, seq, path);
  switch (p.kind) {
    case ParsedPath::Kind::gate_duration: config.gate_duration = value; break;
    case ParsedPath::Kind::t2_budget_fraction: config.t2_budget_fraction = value; break;
    case ParsedPath::Kind::wait: seq = resolve_auto_wait(std::move(seq), p.field, value); break;
    case ParsedPath::Kind::qubit_field: {
      auto& q = config.qubits[static_cast<std::size_t>(p.qubit)];
      if (p.field == "t1") q.t1 = value;
      else if (p.field == "t2") q.t2 = value;
      else q.eq_bias = value;
      break;
    }
  }
  config.check();
  return {std::move(config), std::move(seq)};
}

SweepTable sweep(const SystemConfig& config_template, const SweepAxis& axis, const Sequence& seq, int target,
                 unsigned threads) {
  check_parameter_path(config_template, seq, axis.path);
  if (target < 0 || target >= config_template.n_qubits()) {
    throw Error(Errc::index_out_of_range, fmt::format("target {} out of range", target));
  }
  SweepTable table;
  table.axis_path = axis.path;
  table.target_name = config_template.qubits[static_cast<std::size_t>(target)].name;
  table.rows.resize(axis.values.size());

  auto evaluate = [&](std::size_t k) {
    auto [config, resolved] = apply_parameter(config_template, seq, axis.path, axis.values[k]);
    const Trace trace = execute(resolved, config);
    table.rows[k] = {axis.values[k], trace_metrics(trace, config, target)};
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(axis.values.size()));
  if (threads <= 1) {
    for (std::size_t k = 0; k < axis.values.size(); ++k) evaluate(k);
    return table;
  }

  // Each point writes only its own row; the first failure (by axis index) is rethrown.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(axis.values.size());
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t k = next++; k < axis.values.size(); k = next++) {
        try {
          evaluate(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return table;
}

}  // namespace hbac
