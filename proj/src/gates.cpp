#include "hbac/gates.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace hbac {

Permutation Permutation::inverse() const {
  Permutation out{transpositions};
  std::reverse(out.transpositions.begin(), out.transpositions.end());
  return out;
}

DiagonalState apply_permutation(DiagonalState s, const Permutation& p) {
  for (const auto& [x, y] : p.transpositions) {
    if (x >= s.size() || y >= s.size()) {
      throw Error(Errc::index_out_of_range,
                  fmt::format("transposition ({}, {}) out of range for {} basis states", x, y, s.size()));
    }
  }
  auto& probs = s.mutable_probs();
  for (const auto& [x, y] : p.transpositions) std::swap(probs[x], probs[y]);
  return s;
}

DiagonalState swap_qubits(DiagonalState s, int i, int j, Warnings* warnings) {
  check_qubit_index(s, i);
  check_qubit_index(s, j);
  if (i == j) {
    if (warnings) warnings->push_back(fmt::format("swap {} {} is a no-op", i, j));
    return s;
  }
  const std::uint64_t mi = s.mask(i);
  const std::uint64_t mj = s.mask(j);
  auto& probs = s.mutable_probs();
  // Each unordered pair (bit i = 1, bit j = 0) <-> (bit i = 0, bit j = 1) visited once.
  for (std::uint64_t b = 0; b < probs.size(); ++b) {
    if ((b & mi) && !(b & mj)) std::swap(probs[b], probs[b ^ mi ^ mj]);
  }
  return s;
}

DiagonalState compress_3b(DiagonalState s, int target, int a, int b) {
  check_qubit_index(s, target);
  check_qubit_index(s, a);
  check_qubit_index(s, b);
  if (target == a || target == b || a == b) {
    throw Error(Errc::invalid_parameter,
                fmt::format("compression qubits must be distinct, got ({}, {}, {})", target, a, b));
  }
  const std::uint64_t mt = s.mask(target);
  const std::uint64_t ma = s.mask(a);
  const std::uint64_t mb = s.mask(b);
  const std::uint64_t all = mt | ma | mb;
  auto& probs = s.mutable_probs();
  for (std::uint64_t x = 0; x < probs.size(); ++x) {
    if ((x & all) == mt) std::swap(probs[x], probs[x ^ all]);
  }
  return s;
}

DiagonalState not_qubit(DiagonalState s, int i) {
  check_qubit_index(s, i);
  const std::uint64_t m = s.mask(i);
  auto& probs = s.mutable_probs();
  for (std::uint64_t b = 0; b < probs.size(); ++b) {
    if (!(b & m)) std::swap(probs[b], probs[b | m]);
  }
  return s;
}

Bias reversible_bias_bound(const DiagonalState& s, int target) {
  check_qubit_index(s, target);
  const auto probs = s.probs();
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return probs[l] > probs[r]; });
  const std::size_t half = probs.size() / 2;
  double up = 0.0;
  double down = 0.0;
  for (std::size_t k = 0; k < half; ++k) up += probs[order[k]];
  for (std::size_t k = half; k < probs.size(); ++k) down += probs[order[k]];
  return Bias(std::clamp(up - down, -1.0, 1.0));
}

}  // namespace hbac
