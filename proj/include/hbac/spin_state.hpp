#pragma once

// Diagonal n-qubit spin states.
//
// Basis labelling (shared by every module): qubit 0 is the most significant
// bit of a basis index, qubit n-1 the least significant. A bit value of 0
// means spin up (|↑⟩), 1 means spin down. Hence for n = 3 the index 0b100
// is |↓↑↑⟩ and qubit i of index b is (b >> (n - 1 - i)) & 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbac/error.hpp"

namespace hbac {

inline constexpr int kMaxQubits = 20;

// Tolerances for accepting externally supplied probability vectors.
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kClampTolerance = 1e-12;

/// Polarization bias ε = P↑ − P↓, always in [-1, 1].
class Bias {
 public:
  constexpr Bias() = default;
  explicit Bias(double value);

  constexpr double value() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

struct PhysicalParams {
  double delta_e = 0.0;      // J
  double k_boltzmann = 0.0;  // J/K
  double temperature = 0.0;  // K
};

struct QubitSpec {
  std::string name;
  double eq_bias = 0.0;  // in the owning config's bias unit
  double t1 = 1.0;       // s
  std::optional<double> t2;

  // Throws on t1 <= 0 or t2 <= 0; appends a warning if t2 > 2 t1.
  void check(Warnings* warnings = nullptr) const;
};

class DiagonalState {
 public:
  /// Empty placeholder with no qubits; every factory below yields a valid state.
  DiagonalState() = default;

  /// Validates a probability vector. Entries in
  /// [-kClampTolerance, 0) are clamped to zero and counted; anything more
  /// negative, a length that is not a power of two, or a sum off by more
  /// than kNormTolerance is an Errc::invalid_state error.
  static DiagonalState from_probs(std::vector<double> probs);

  /// Basis state |b⟩ with probability one.
  static DiagonalState basis(int n_qubits, std::uint64_t index);

  static DiagonalState uniform(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t b) const { return probs_[b]; }

  /// Number of entries clamped from slightly negative to zero since construction.
  int clamped_count() const noexcept { return clamped_; }

  /// Bit mask selecting qubit i within a basis index.
  std::uint64_t mask(int qubit) const;

  // Mutable access for in-place gate and channel kernels. Callers keep the
  // vector a distribution.
  std::vector<double>& mutable_probs() noexcept { return probs_; }

  friend bool operator==(const DiagonalState&, const DiagonalState&) = default;

 private:
  DiagonalState(int n, std::vector<double> probs, int clamped)
      : n_qubits_(n), probs_(std::move(probs)), clamped_(clamped) {}

  int n_qubits_ = 0;
  std::vector<double> probs_;
  int clamped_ = 0;
};

void check_qubit_count(int n);
void check_qubit_index(const DiagonalState& s, int qubit);

Bias bias_from_physics(const PhysicalParams& p);

/// Spin temperature (K) at which a two-level system with gap delta_e has bias b.
double effective_temperature(Bias b, double delta_e, double k_boltzmann);

/// Product of single-qubit thermal states. eq_bias of every spec is taken
/// as an absolute bias.
DiagonalState equilibrium_state(std::span<const QubitSpec> qubits);

/// Same, from bare bias values.
DiagonalState product_state(std::span<const double> biases);

Bias marginal_bias(const DiagonalState& s, int qubit);

/// All marginals in qubit order.
std::vector<double> marginal_biases(const DiagonalState& s);

/// Shannon entropy in bits with 0 log 0 = 0.
double shannon_entropy(const DiagonalState& s);

/// H₂(p) in bits.
double binary_entropy(double p);

/// Number of qubits at bias eps0 that an entropy-preserving compression
/// needs in order to distil n_pure pure qubits: ln(4) n_pure / eps0².
double shannon_qubit_bound(int n_pure, Bias eps0);

}  // namespace hbac
