#pragma once

// Independent reference computations used only by tests. None of these call
// into the library's kernels; they work from the textbook definitions on
// plain vectors.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

// Bit of qubit i in basis index b, qubit 0 most significant.
inline int bit(std::uint64_t b, int i, int n) { return static_cast<int>((b >> (n - 1 - i)) & 1u); }

inline std::vector<double> product(const std::vector<double>& eps) {
  const int n = static_cast<int>(eps.size());
  std::vector<double> p(std::size_t{1} << n);
  for (std::uint64_t b = 0; b < p.size(); ++b) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= bit(b, i, n) ? (1.0 - eps[i]) / 2.0 : (1.0 + eps[i]) / 2.0;
    p[b] = v;
  }
  return p;
}

inline double marginal(const std::vector<double>& p, int i) {
  const int n = std::countr_zero(p.size());
  double e = 0.0;
  for (std::uint64_t b = 0; b < p.size(); ++b) e += (bit(b, i, n) ? -1.0 : 1.0) * p[b];
  return e;
}

inline double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0) h -= x * std::log2(x);
  }
  return h;
}

// Maximum bias of qubit `target` over all (2^n)! basis permutations.
// Exhaustive, so only sensible for n <= 3.
inline double exhaustive_max_bias(const std::vector<double>& p, int target) {
  std::vector<std::size_t> perm(p.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = -2.0;
  do {
    std::vector<double> q(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) q[perm[k]] = p[k];
    best = std::max(best, marginal(q, target));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Full 2^n x 2^n transition matrix of independent single-qubit relaxation,
// built as a Kronecker product and applied by dense matrix-vector product.
inline std::vector<double> relax_dense(const std::vector<double>& p, const std::vector<double>& eps_eq,
                                       const std::vector<double>& t1, double dt) {
  const int n = static_cast<int>(eps_eq.size());
  std::vector<double> m{1.0};
  std::size_t dim = 1;
  for (int i = 0; i < n; ++i) {
    const double lam = std::exp(-dt / t1[i]);
    const double pi[2] = {(1 + eps_eq[i]) / 2, (1 - eps_eq[i]) / 2};
    double single[2][2];
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) single[x][y] = (x == y ? lam : 0.0) + (1 - lam) * pi[x];
    }
    std::vector<double> next(dim * 2 * dim * 2);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        for (int x = 0; x < 2; ++x) {
          for (int y = 0; y < 2; ++y) next[(2 * r + x) * (2 * dim) + (2 * c + y)] = m[r * dim + c] * single[x][y];
        }
      }
    }
    m = std::move(next);
    dim *= 2;
  }
  std::vector<double> out(dim, 0.0);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) out[r] += m[r * dim + c] * p[c];
  }
  return out;
}

// Random distribution over 2^n outcomes (normalized exponentials).
inline std::vector<double> random_distribution(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(std::size_t{1} << n);
  double s = 0.0;
  for (double& x : p) s += (x = ex(rng));
  for (double& x : p) x /= s;
  return p;
}

}  // namespace oracle
