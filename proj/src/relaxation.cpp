#include "hbac/relaxation.hpp"

#include <cmath>

#include <fmt/format.h>

namespace hbac {

namespace {

void check_duration(double dt) {
  if (!std::isfinite(dt) || dt < 0.0) {
    throw Error(Errc::invalid_parameter, fmt::format("duration must be finite and >= 0, got {}", dt));
  }
}

}  // namespace

void RelaxationClock::advance_wait(double dt) {
  check_duration(dt);
  elapsed_total += dt;
}

void RelaxationClock::advance_gate(double dt) {
  check_duration(dt);
  elapsed_total += dt;
  coherent_time_used += dt;
}

double relax_factor(double dt, double t1) {
  check_duration(dt);
  if (!(t1 > 0.0) || std::isnan(t1)) {
    throw Error(Errc::invalid_parameter, fmt::format("t1 must be > 0, got {}", t1));
  }
  return std::exp(-dt / t1);
}

DiagonalState relax(DiagonalState s, std::span<const QubitSpec> qubits, double dt) {
  check_duration(dt);
  if (static_cast<int>(qubits.size()) != s.n_qubits()) {
    throw Error(Errc::invalid_parameter,
                fmt::format("{} qubit specs for a {}-qubit state", qubits.size(), s.n_qubits()));
  }
  if (dt == 0.0) return s;

  auto& probs = s.mutable_probs();
  for (int i = 0; i < s.n_qubits(); ++i) {
    const QubitSpec& q = qubits[static_cast<std::size_t>(i)];
    const double lambda = relax_factor(dt, q.t1);
    const double eps_eq = Bias(q.eq_bias).value();
    const double pi_up = 0.5 * (1.0 + eps_eq);
    const double pi_down = 0.5 * (1.0 - eps_eq);
    const std::uint64_t m = s.mask(i);
    for (std::uint64_t b = 0; b < probs.size(); ++b) {
      if (b & m) continue;
      const double up = probs[b];
      const double down = probs[b | m];
      const double total = up + down;
      probs[b] = lambda * up + (1.0 - lambda) * pi_up * total;
      probs[b | m] = lambda * down + (1.0 - lambda) * pi_down * total;
    }
  }
  return s;
}

std::vector<T1RatioRow> t1_ratio_report(std::span<const QubitSpec> qubits, int reset) {
  if (reset < 0 || reset >= static_cast<int>(qubits.size())) {
    throw Error(Errc::index_out_of_range, fmt::format("reset index {} out of range", reset));
  }
  const double t1_reset = qubits[static_cast<std::size_t>(reset)].t1;
  std::vector<T1RatioRow> rows;
  rows.reserve(qubits.size());
  for (const auto& q : qubits) rows.push_back({q.name, q.t1, q.t1 / t1_reset});
  return rows;
}

std::vector<T1Change> compare_t1(std::span<const QubitSpec> before, std::span<const QubitSpec> after, int reset) {
  if (before.size() != after.size()) {
    throw Error(Errc::invalid_parameter, "T1 comparison needs the same qubits on both sides");
  }
  const auto rb = t1_ratio_report(before, reset);
  const auto ra = t1_ratio_report(after, reset);
  std::vector<T1Change> out;
  for (std::size_t i = 0; i < before.size(); ++i) {
    T1Change c;
    c.name = before[i].name;
    c.t1_change_percent = 100.0 * (after[i].t1 - before[i].t1) / before[i].t1;
    c.ratio_before = rb[i].ratio_to_reset;
    c.ratio_after = ra[i].ratio_to_reset;
    c.ratio_change_percent = 100.0 * (c.ratio_after - c.ratio_before) / c.ratio_before;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace hbac
