#pragma once

// Reversible operations on diagonal states. For a diagonal density matrix
// every entropy-preserving closed-system operation acts as a permutation of
// basis-state populations, so each gate here is a permutation.

#include <cstdint>
#include <utility>
#include <vector>

#include "hbac/spin_state.hpp"

namespace hbac {

/// Basis-state transpositions, applied left to right.
struct Permutation {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> transpositions;

  /// The same transpositions in reverse order; undoes this permutation.
  Permutation inverse() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

DiagonalState apply_permutation(DiagonalState s, const Permutation& p);

/// Exchanges qubits i and j in every basis index. i == j is a no-op and
/// appends a warning.
DiagonalState swap_qubits(DiagonalState s, int i, int j, Warnings* warnings = nullptr);

/// 3-bit compression onto `target`: within every setting of the other
/// qubits, exchanges the populations of (target, a, b) = (1,0,0) and (0,1,1).
/// On an equal-bias product state the target bias becomes (3ε − ε³)/2.
DiagonalState compress_3b(DiagonalState s, int target, int a, int b);

DiagonalState not_qubit(DiagonalState s, int i);

/// Largest bias any basis permutation can give `target`: the 2^(n-1) most
/// probable basis states are placed on target-up. Ties are ordered by
/// basis index.
Bias reversible_bias_bound(const DiagonalState& s, int target);

}  // namespace hbac
