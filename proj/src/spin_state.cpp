#include "hbac/spin_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

namespace hbac {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_parameter: return "invalid parameter";
    case Errc::capacity: return "capacity exceeded";
    case Errc::index_out_of_range: return "index out of range";
    case Errc::invalid_state: return "invalid state";
    case Errc::temperature_undefined: return "temperature undefined";
    case Errc::unit_mismatch: return "unit mismatch";
    case Errc::unresolved_wait: return "unresolved auto wait";
    case Errc::unsupported_schedule: return "unsupported schedule";
    case Errc::unknown_parameter_path: return "unknown parameter path";
    case Errc::config_schema: return "config schema violation";
    case Errc::non_finite_objective: return "non-finite objective";
    case Errc::io: return "i/o error";
  }
  return "unknown error";
}

Bias::Bias(double value) : value_(value) {
  if (!std::isfinite(value) || std::abs(value) > 1.0) {
    throw Error(Errc::invalid_parameter, fmt::format("bias {} outside [-1, 1]", value));
  }
}

void QubitSpec::check(Warnings* warnings) const {
  if (!(t1 > 0.0) || !std::isfinite(t1)) {
    throw Error(Errc::invalid_parameter, fmt::format("qubit '{}': t1 must be finite and > 0, got {}", name, t1));
  }
  if (t2) {
    if (!(*t2 > 0.0) || !std::isfinite(*t2)) {
      throw Error(Errc::invalid_parameter, fmt::format("qubit '{}': t2 must be finite and > 0, got {}", name, *t2));
    }
    if (*t2 > 2.0 * t1 && warnings) {
      warnings->push_back(fmt::format("qubit '{}': t2 = {} s exceeds 2 t1 = {} s", name, *t2, 2.0 * t1));
    }
  }
}

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw Error(Errc::capacity, fmt::format("qubit count {} outside [1, {}]", n, kMaxQubits));
  }
}

void check_qubit_index(const DiagonalState& s, int qubit) {
  if (qubit < 0 || qubit >= s.n_qubits()) {
    throw Error(Errc::index_out_of_range,
                fmt::format("qubit index {} out of range for {} qubits", qubit, s.n_qubits()));
  }
}

DiagonalState DiagonalState::from_probs(std::vector<double> probs) {
  const std::size_t size = probs.size();
  if (size < 2 || (size & (size - 1)) != 0) {
    throw Error(Errc::invalid_state, fmt::format("probability vector length {} is not 2^n, n >= 1", size));
  }
  const int n = std::countr_zero(size);
  check_qubit_count(n);

  int clamped = 0;
  double sum = 0.0;
  for (double& p : probs) {
    if (!std::isfinite(p)) throw Error(Errc::invalid_state, "non-finite probability");
    if (p < 0.0) {
      if (p < -kClampTolerance) {
        throw Error(Errc::invalid_state, fmt::format("negative probability {}", p));
      }
      p = 0.0;
      ++clamped;
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw Error(Errc::invalid_state, fmt::format("probabilities sum to {}, not 1", sum));
  }
  return DiagonalState(n, std::move(probs), clamped);
}

DiagonalState DiagonalState::basis(int n_qubits, std::uint64_t index) {
  check_qubit_count(n_qubits);
  std::vector<double> probs(std::size_t{1} << n_qubits, 0.0);
  if (index >= probs.size()) {
    throw Error(Errc::index_out_of_range, fmt::format("basis index {} out of range", index));
  }
  probs[index] = 1.0;
  return DiagonalState(n_qubits, std::move(probs), 0);
}

DiagonalState DiagonalState::uniform(int n_qubits) {
  check_qubit_count(n_qubits);
  const std::size_t size = std::size_t{1} << n_qubits;
  return DiagonalState(n_qubits, std::vector<double>(size, 1.0 / static_cast<double>(size)), 0);
}

std::uint64_t DiagonalState::mask(int qubit) const {
  return std::uint64_t{1} << (n_qubits_ - 1 - qubit);
}

Bias bias_from_physics(const PhysicalParams& p) {
  if (!std::isfinite(p.delta_e) || !std::isfinite(p.k_boltzmann) || !std::isfinite(p.temperature)) {
    throw Error(Errc::invalid_parameter, "non-finite physical parameter");
  }
  if (!(p.k_boltzmann > 0.0) || !(p.temperature > 0.0)) {
    throw Error(Errc::invalid_parameter, "Boltzmann constant and temperature must be positive");
  }
  return Bias(std::tanh(p.delta_e / (2.0 * p.k_boltzmann * p.temperature)));
}

double effective_temperature(Bias b, double delta_e, double k_boltzmann) {
  const double eps = b.value();
  if (std::abs(eps) >= 1.0) {
    throw Error(Errc::temperature_undefined, "|bias| = 1 corresponds to zero temperature");
  }
  if (eps == 0.0) {
    throw Error(Errc::temperature_undefined, "zero bias corresponds to infinite temperature");
  }
  if (!std::isfinite(delta_e) || !std::isfinite(k_boltzmann) || !(k_boltzmann > 0.0)) {
    throw Error(Errc::invalid_parameter, "energy gap and Boltzmann constant must be finite, k > 0");
  }
  return delta_e / (2.0 * k_boltzmann * std::atanh(eps));
}

DiagonalState product_state(std::span<const double> biases) {
  const int n = static_cast<int>(biases.size());
  check_qubit_count(n);
  for (double e : biases) (void)Bias(e);

  // Build by doubling: after qubit i the vector holds the joint distribution
  // of qubits 0..i, so qubit 0 ends up as the most significant bit.
  std::vector<double> probs{1.0};
  probs.reserve(std::size_t{1} << n);
  for (double eps : biases) {
    const double up = 0.5 * (1.0 + eps);
    const double down = 0.5 * (1.0 - eps);
    std::vector<double> next(probs.size() * 2);
    for (std::size_t b = 0; b < probs.size(); ++b) {
      next[2 * b] = probs[b] * up;
      next[2 * b + 1] = probs[b] * down;
    }
    probs = std::move(next);
  }
  return DiagonalState::from_probs(std::move(probs));
}

DiagonalState equilibrium_state(std::span<const QubitSpec> qubits) {
  std::vector<double> biases;
  biases.reserve(qubits.size());
  for (const auto& q : qubits) biases.push_back(q.eq_bias);
  return product_state(biases);
}

Bias marginal_bias(const DiagonalState& s, int qubit) {
  check_qubit_index(s, qubit);
  const std::uint64_t m = s.mask(qubit);
  const auto probs = s.probs();
  double up = 0.0;
  double down = 0.0;
  for (std::size_t b = 0; b < probs.size(); ++b) {
    ((b & m) ? down : up) += probs[b];
  }
  return Bias(std::clamp(up - down, -1.0, 1.0));
}

std::vector<double> marginal_biases(const DiagonalState& s) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(s.n_qubits()));
  for (int i = 0; i < s.n_qubits(); ++i) out.push_back(marginal_bias(s, i).value());
  return out;
}

double shannon_entropy(const DiagonalState& s) {
  double h = 0.0;
  for (double p : s.probs()) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double shannon_qubit_bound(int n_pure, Bias eps0) {
  if (n_pure < 1) {
    throw Error(Errc::invalid_parameter, fmt::format("n_j must be >= 1, got {}", n_pure));
  }
  if (!(eps0.value() > 0.0)) {
    throw Error(Errc::invalid_parameter, fmt::format("eps0 must be > 0, got {}", eps0.value()));
  }
  return std::log(4.0) * n_pure / (eps0.value() * eps0.value());
}

}  // namespace hbac
