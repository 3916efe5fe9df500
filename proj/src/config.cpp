#include "hbac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace hbac {

int SystemConfig::index_of(std::string_view name) const {
  for (int i = 0; i < n_qubits(); ++i) {
    if (qubits[static_cast<std::size_t>(i)].name == name) return i;
  }
  return -1;
}

int SystemConfig::resolve_qubit(std::string_view name_or_index) const {
  if (int i = index_of(name_or_index); i >= 0) return i;
  int idx = -1;
  const auto* end = name_or_index.data() + name_or_index.size();
  auto [ptr, ec] = std::from_chars(name_or_index.data(), end, idx);
  if (ec == std::errc{} && ptr == end && idx >= 0 && idx < n_qubits()) return idx;
  throw Error(Errc::index_out_of_range, fmt::format("no qubit named or indexed '{}'", name_or_index));
}

bool SystemConfig::is_reset(int qubit) const {
  return std::find(reset_qubits.begin(), reset_qubits.end(), qubit) != reset_qubits.end();
}

bool SystemConfig::adjacent(int a, int b) const {
  if (!coupling_edges) return true;
  return std::any_of(coupling_edges->begin(), coupling_edges->end(), [&](const auto& e) {
    return (e.first == a && e.second == b) || (e.first == b && e.second == a);
  });
}

double SystemConfig::to_absolute(double bias) const {
  return bias_unit == BiasUnit::relative ? bias * relative_scale : bias;
}

double SystemConfig::to_config_units(double bias) const {
  return bias_unit == BiasUnit::relative ? bias / relative_scale : bias;
}

std::vector<QubitSpec> SystemConfig::physical_qubits() const {
  std::vector<QubitSpec> out = qubits;
  for (auto& q : out) q.eq_bias = to_absolute(q.eq_bias);
  return out;
}

std::optional<double> SystemConfig::min_t2() const {
  std::optional<double> out;
  for (const auto& q : qubits) {
    if (q.t2 && (!out || *q.t2 < *out)) out = q.t2;
  }
  return out;
}

void SystemConfig::check(Warnings* warnings) const {
  check_qubit_count(n_qubits());
  std::set<std::string> names;
  for (const auto& q : qubits) {
    q.check(warnings);
    if (!names.insert(q.name).second) {
      throw Error(Errc::invalid_parameter, fmt::format("duplicate qubit name '{}'", q.name));
    }
  }
  if (bias_unit == BiasUnit::relative && (!(relative_scale > 0.0) || !std::isfinite(relative_scale))) {
    throw Error(Errc::invalid_parameter, "relative_scale must be > 0");
  }
  for (const auto& q : qubits) {
    const double eps = to_absolute(q.eq_bias);
    if (!std::isfinite(eps) || std::abs(eps) > 1.0) {
      throw Error(Errc::invalid_parameter,
                  fmt::format("qubit '{}': equilibrium bias {} is outside [-1, 1] in absolute units", q.name, eps));
    }
  }
  for (int r : reset_qubits) {
    if (r < 0 || r >= n_qubits()) {
      throw Error(Errc::index_out_of_range, fmt::format("reset qubit index {} out of range", r));
    }
  }
  if (coupling_edges) {
    for (const auto& [a, b] : *coupling_edges) {
      if (a < 0 || a >= n_qubits() || b < 0 || b >= n_qubits() || a == b) {
        throw Error(Errc::index_out_of_range, fmt::format("invalid coupling edge ({}, {})", a, b));
      }
    }
  }
  if (!(gate_duration >= 0.0) || !std::isfinite(gate_duration)) {
    throw Error(Errc::invalid_parameter, "gate duration must be >= 0");
  }
  if (!(t2_budget_fraction > 0.0) || !std::isfinite(t2_budget_fraction)) {
    throw Error(Errc::invalid_parameter, "t2_budget_fraction must be > 0");
  }
  if (physical) {
    const auto& p = *physical;
    if (!std::isfinite(p.delta_e) || !(p.k_boltzmann > 0.0) || !(p.temperature > 0.0) ||
        !std::isfinite(p.k_boltzmann) || !std::isfinite(p.temperature)) {
      throw Error(Errc::invalid_parameter, "physical parameters need finite delta_e, k > 0, T > 0");
    }
  }
}

}  // namespace hbac
