#include "hbac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "hbac/engine.hpp"
#include "hbac/io.hpp"
#include "hbac/optimizer.hpp"
#include "hbac/relaxation.hpp"
#include "hbac/seqlang.hpp"

namespace hbac::cli {

namespace {

// Input-phase failure: reported on stderr, exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string both_notations(double v) {
  const double mag = std::abs(v);
  if (mag != 0.0 && (mag >= 1e6 || mag < 1e-3)) return fmt::format("{:.6f} ({:.6e})", v, v);
  return fmt::format("{:.9g}", v);
}

struct SystemSource {
  std::string config_path;
  std::string preset;

  void add_options(CLI::App& app) {
    auto* c = app.add_option("--config", config_path, "JSON system config");
    auto* p = app.add_option("--preset", preset, "built-in system: tce-unsalted | tce-salted");
    c->excludes(p);
  }

  SystemConfig load(bool required = true) const {
    try {
      if (!preset.empty()) return io::preset(preset);
      if (!config_path.empty()) return io::load_config(config_path);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    if (required) throw InputError("one of --config or --preset is required");
    return {};
  }
};

int default_target(const SystemConfig& config) {
  for (int q = 0; q < config.n_qubits(); ++q) {
    if (!config.is_reset(q)) return q;
  }
  return 0;
}

int resolve_target(const SystemConfig& config, const std::string& target) {
  if (target.empty()) return default_target(config);
  try {
    return config.resolve_qubit(target);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

Sequence load_sequence(const std::string& path, const SystemConfig& config, std::ostream& err) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const ParseResult parsed = parse_sequence_all(text);
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) {
      fmt::print(err, "{}:{}: error: {}: {}\n", path, d.line, to_string(d.kind), d.message);
    }
    throw InputError(fmt::format("{}: {} parse error(s)", path, parsed.diagnostics.size()));
  }
  const auto diags = validate(parsed.sequence, config);
  for (const auto& d : diags) {
    fmt::print(err, "{}:{}: {}: {}\n", path, d.line, d.severity == Severity::error ? "error" : "warning", d.message);
  }
  if (has_errors(diags)) throw InputError(fmt::format("{}: sequence does not fit the system", path));
  return parsed.sequence;
}

void print_metrics(std::ostream& out, const SystemConfig& config, int target, const Metrics& m) {
  const auto& name = config.qubits[static_cast<std::size_t>(target)].name;
  fmt::print(out, "target: {}\n", name);
  fmt::print(out, "bias_unit: {}\n", config.bias_unit == BiasUnit::relative ? "relative" : "absolute");
  fmt::print(out, "equilibrium_bias: {}\n", both_notations(config.qubits[static_cast<std::size_t>(target)].eq_bias));
  fmt::print(out, "final_bias: {}\n", both_notations(m.final_bias));
  fmt::print(out, "cooling_factor: {}\n", both_notations(m.cooling_factor));
  fmt::print(out, "entropy_initial_bits: {}\n", both_notations(m.entropy_initial));
  fmt::print(out, "entropy_final_bits: {}\n", both_notations(m.entropy_final));
  fmt::print(out, "reversible_bound_initial: {}\n", both_notations(m.bound_initial));
  fmt::print(out, "bypass_margin: {}\n", both_notations(m.bypass_margin));
  if (m.effective_temperature) {
    fmt::print(out, "effective_temperature_k: {}\n", both_notations(*m.effective_temperature));
  }
}

void print_warnings(std::ostream& err, const Warnings& warnings) {
  for (const auto& w : warnings) fmt::print(err, "warning: {}\n", w);
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) throw InputError("empty entry in --values");
    token = token.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) throw InputError(fmt::format("bad value '{}' in --values", token));
    values.push_back(v);
  }
  if (values.empty()) throw InputError("--values is empty");
  return values;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
  SystemSource system;
  std::string sequence;
  std::string trace_csv = "trace.csv";
  std::string target;
  std::optional<double> gate_duration;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  SystemConfig config = o.system.load();
  if (o.gate_duration) config.gate_duration = *o.gate_duration;
  const int target = resolve_target(config, o.target);
  const Sequence seq = load_sequence(o.sequence, config, err);
  if (seq.has_auto_waits()) throw InputError("sequence has unresolved auto waits; run `hbac optimize` first");

  const Trace trace = execute(seq, config);
  const Metrics m = trace_metrics(trace, config, target);
  io::write_file_atomic(o.trace_csv, io::to_csv(io::trace_table(trace, config)));
  print_warnings(err, trace.warnings);
  print_metrics(out, config, target, m);
  fmt::print(out, "trace_csv: {}\n", o.trace_csv);
  return kExitOk;
}

struct BoundOptions {
  int nj = 1;
  double eps = 0.0;
};

int cmd_bound(const BoundOptions& o, std::ostream& out) {
  double n0 = 0.0;
  try {
    if (!(o.eps > 0.0) || o.eps > 1.0) throw InputError(fmt::format("--eps must be in (0, 1], got {}", o.eps));
    n0 = shannon_qubit_bound(o.nj, Bias(o.eps));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  fmt::print(out, "n_j: {}\neps0: {}\n", o.nj, both_notations(o.eps));
  fmt::print(out, "n0 = ln(4) n_j / eps0^2 = {:.4f} ({:.6e})\n", n0, n0);
  return kExitOk;
}

struct SweepOptions {
  SystemSource system;
  std::string sequence;
  std::string axis;
  std::string values;
  std::string out_csv;
  std::string svg;
  std::string target;
  unsigned threads = 0;
};

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  const SystemConfig config = o.system.load();
  const int target = resolve_target(config, o.target);
  const Sequence seq = load_sequence(o.sequence, config, err);
  SweepAxis axis{o.axis, parse_values(o.values)};
  try {
    check_parameter_path(config, seq, axis.path);
    for (double v : axis.values) (void)apply_parameter(config, seq, axis.path, v);
  } catch (const Error& e) {
    throw InputError(e.what());
  }

  const SweepTable table = sweep(config, axis, seq, target, o.threads);
  io::write_file_atomic(o.out_csv, io::to_csv(io::sweep_csv_table(table)));
  if (!o.svg.empty()) io::write_file_atomic(o.svg, io::sweep_svg(table));
  fmt::print(out, "{} rows over {} -> {}\n", table.rows.size(), axis.path, o.out_csv);
  for (const auto& r : table.rows) {
    fmt::print(out, "{} = {}: final_bias {} bypass_margin {}\n", axis.path, io::format_number(r.axis_value),
               both_notations(r.metrics.final_bias), both_notations(r.metrics.bypass_margin));
  }
  return kExitOk;
}

struct OptimizeOptions {
  SystemSource system;
  std::string sequence;
  std::string out_acs;
  std::string trace_csv;
  std::string target;
  std::optional<double> min_wait;
  std::optional<double> max_wait;
  double duration_tol = 1e-3;
  int restarts = 0;
};

int cmd_optimize(const OptimizeOptions& o, std::ostream& out, std::ostream& err) {
  const SystemConfig config = o.system.load();
  const int target = resolve_target(config, o.target);
  const Sequence seq = load_sequence(o.sequence, config, err);
  const auto labels = seq.auto_labels();
  if (labels.empty()) throw InputError(fmt::format("{}: no `wait auto` operations to optimize", o.sequence));

  OptimizationProblem p;
  p.sequence = seq;
  p.config = config;
  p.target = target;
  p.duration_tolerance = o.duration_tol;
  p.random_restarts = o.restarts;
  try {
    auto bounds = effective_bounds(p);
    for (auto& b : bounds) {
      if (o.min_wait) b.first = *o.min_wait;
      if (o.max_wait) b.second = *o.max_wait;
    }
    p.bounds = bounds;
    (void)effective_bounds(p);
  } catch (const Error& e) {
    throw InputError(e.what());
  }

  const OptimizationResult r = optimize_waits(p);
  const Sequence resolved = resolve_auto_waits(seq, r.durations);
  std::string text = fmt::format("# resolved from {} for target {}\n", o.sequence,
                                 config.qubits[static_cast<std::size_t>(target)].name);
  text += format_sequence(resolved);
  io::write_file_atomic(o.out_acs, text);

  const Trace trace = execute(resolved, config);
  if (!o.trace_csv.empty()) io::write_file_atomic(o.trace_csv, io::to_csv(io::trace_table(trace, config)));
  print_warnings(err, trace.warnings);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    fmt::print(out, "wait {}: {} s\n", labels[k], both_notations(r.durations[k]));
  }
  fmt::print(out, "objective: {}\n", both_notations(r.objective));
  fmt::print(out, "evaluations: {}\ncycles: {}\n", r.evaluations, r.cycles);
  print_metrics(out, config, target, trace_metrics(trace, config, target));
  fmt::print(out, "resolved: {}\n", o.out_acs);
  return kExitOk;
}

void print_ratio_table(std::ostream& out, const std::string& title, const SystemConfig& config, int reset) {
  fmt::print(out, "{}\n", title);
  fmt::print(out, "  {:<8} {:>10} {:>12}\n", "qubit", "T1 [s]", "T1/T1_reset");
  for (const auto& row : t1_ratio_report(config.qubits, reset)) {
    fmt::print(out, "  {:<8} {:>10.4g} {:>12.2f}\n", row.name, row.t1, row.ratio_to_reset);
  }
}

struct ReportOptions {
  SystemSource system;
};

int cmd_report(const ReportOptions& o, std::ostream& out) {
  const SystemConfig single = o.system.load(false);
  if (single.n_qubits() > 0) {
    if (single.reset_qubits.empty()) throw InputError("config declares no reset qubit");
    print_ratio_table(out, single.description.empty() ? "T1 ratios" : single.description, single,
                      single.reset_qubits.front());
    return kExitOk;
  }
  const SystemConfig before = io::preset("tce-unsalted");
  const SystemConfig after = io::preset("tce-salted");
  const int reset = before.reset_qubits.front();
  print_ratio_table(out, "tce-unsalted: " + before.description, before, reset);
  print_ratio_table(out, "tce-salted: " + after.description, after, reset);
  fmt::print(out, "changes (unsalted -> salted)\n");
  fmt::print(out, "  {:<8} {:>12} {:>16}\n", "qubit", "T1 change %", "ratio change %");
  for (const auto& c : compare_t1(before.qubits, after.qubits, reset)) {
    fmt::print(out, "  {:<8} {:>12.1f} {:>16.1f}\n", c.name, c.t1_change_percent, c.ratio_change_percent);
  }
  return kExitOk;
}

struct ScheduleOptions {
  SystemSource system;
  std::string target;
  std::optional<double> wait;
  bool auto_waits = false;
  std::string out_acs;
};

int cmd_schedule(const ScheduleOptions& o, std::ostream& out) {
  const SystemConfig config = o.system.load();
  const int target = resolve_target(config, o.target);
  Sequence seq;
  try {
    WaitPolicy policy = FixedWait{o.wait ? *o.wait : default_wait(config)};
    if (o.auto_waits) policy = AutoWait{};
    seq = canonical_ac_schedule(config, target, policy);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const std::string text = format_sequence(seq);
  if (o.out_acs.empty()) {
    out << text;
  } else {
    io::write_file_atomic(o.out_acs, text);
    fmt::print(out, "schedule: {}\n", o.out_acs);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hbac: heat-bath algorithmic cooling simulator for nuclear-spin qubits", "hbac"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "run a .acs sequence and write its trace CSV");
  sim.system.add_options(*simulate);
  simulate->add_option("sequence", sim.sequence, ".acs sequence file")->required();
  simulate->add_option("--trace-csv,--out", sim.trace_csv, "trace CSV path")->capture_default_str();
  simulate->add_option("--target", sim.target, "target qubit name or index");
  simulate->add_option("--gate-duration", sim.gate_duration, "override gate duration [s]");

  BoundOptions bnd;
  auto* bound = app.add_subcommand("bound", "qubits needed by entropy-preserving compression");
  bound->add_option("--nj", bnd.nj, "number of pure qubits wanted")->capture_default_str();
  bound->add_option("--eps", bnd.eps, "initial bias eps0")->required();

  SweepOptions swp;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter and tabulate the final metrics");
  swp.system.add_options(*sweep_cmd);
  sweep_cmd->add_option("sequence", swp.sequence, ".acs sequence file")->required();
  sweep_cmd->add_option("--axis", swp.axis, "qubits[<name>].t1|t2|eq_bias, waits.<label>, gate_duration_s, ...")
      ->required();
  sweep_cmd->add_option("--values", swp.values, "comma-separated axis values")->required();
  sweep_cmd->add_option("--out", swp.out_csv, "sweep CSV path")->required();
  sweep_cmd->add_option("--svg", swp.svg, "optional SVG plot path");
  sweep_cmd->add_option("--target", swp.target, "target qubit name or index");
  sweep_cmd->add_option("--threads", swp.threads, "worker threads (0 = all cores)");

  OptimizeOptions opt;
  auto* optimize = app.add_subcommand("optimize", "choose `wait auto` durations that maximize the target bias");
  opt.system.add_options(*optimize);
  optimize->add_option("sequence", opt.sequence, ".acs sequence with auto waits")->required();
  optimize->add_option("--out", opt.out_acs, "resolved .acs output")->required();
  optimize->add_option("--trace-csv", opt.trace_csv, "trace CSV of the resolved sequence");
  optimize->add_option("--target", opt.target, "target qubit name or index");
  optimize->add_option("--min-wait", opt.min_wait, "lower bound for every wait [s]");
  optimize->add_option("--max-wait", opt.max_wait, "upper bound for every wait [s]");
  optimize->add_option("--duration-tol", opt.duration_tol, "duration tolerance [s]")->capture_default_str();
  optimize->add_option("--restarts", opt.restarts, "extra random-start ascents")->capture_default_str();

  ReportOptions rep;
  auto* report = app.add_subcommand("report", "T1 ratio table (both TCE presets and their changes by default)");
  rep.system.add_options(*report);

  ScheduleOptions sch;
  auto* schedule = app.add_subcommand("schedule", "emit the canonical two-reset cooling schedule");
  sch.system.add_options(*schedule);
  schedule->add_option("--target", sch.target, "target qubit name or index");
  auto* wait_opt = schedule->add_option("--wait", sch.wait, "fixed wait [s] (default 3 T1 of the reset qubit)");
  schedule->add_flag("--auto", sch.auto_waits, "emit `wait auto` placeholders")->excludes(wait_opt);
  schedule->add_option("--out", sch.out_acs, "output path (default stdout)");

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
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out, err);
    if (bound->parsed()) return cmd_bound(bnd, out);
    if (sweep_cmd->parsed()) return cmd_sweep(swp, out, err);
    if (optimize->parsed()) return cmd_optimize(opt, out, err);
    if (report->parsed()) return cmd_report(rep, out);
    if (schedule->parsed()) return cmd_schedule(sch, out);
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitInput;
}

}  // namespace hbac::cli
