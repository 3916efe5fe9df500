#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hbac/spin_state.hpp"

namespace hbac {

enum class BiasUnit { relative, absolute };

// Relative biases are multiples of this absolute bias when a state is built.
inline constexpr double kDefaultRelativeScale = 1e-5;
inline constexpr double kDefaultGateDuration = 10e-3;  // s

struct SystemConfig {
  std::vector<QubitSpec> qubits;
  std::vector<int> reset_qubits;
  std::optional<std::vector<std::pair<int, int>>> coupling_edges;
  double gate_duration = kDefaultGateDuration;
  double t2_budget_fraction = 1.0;
  BiasUnit bias_unit = BiasUnit::relative;
  double relative_scale = kDefaultRelativeScale;
  std::optional<PhysicalParams> physical;
  std::string description;

  int n_qubits() const noexcept { return static_cast<int>(qubits.size()); }

  /// Index of the qubit with this name, or -1.
  int index_of(std::string_view name) const;

  /// Resolves a qubit given by name or by decimal index; throws if neither.
  int resolve_qubit(std::string_view name_or_index) const;

  bool is_reset(int qubit) const;
  bool adjacent(int a, int b) const;

  double to_absolute(double bias) const;
  double to_config_units(double bias) const;

  /// Qubit specs with eq_bias converted to absolute bias.
  std::vector<QubitSpec> physical_qubits() const;

  /// Smallest configured T2, if any qubit has one.
  std::optional<double> min_t2() const;

  /// Throws Errc::invalid_parameter / index_out_of_range on violated invariants.
  void check(Warnings* warnings = nullptr) const;
};

}  // namespace hbac
