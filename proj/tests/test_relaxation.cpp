#include <cmath>
#include <random>

#include "doctest.h"
#include "hbac/gates.hpp"
#include "hbac/relaxation.hpp"
#include "oracles.hpp"

using namespace hbac;

namespace {

std::vector<QubitSpec> specs(const std::vector<double>& eps, const std::vector<double>& t1) {
  std::vector<QubitSpec> out;
  for (std::size_t i = 0; i < eps.size(); ++i) out.push_back({"q" + std::to_string(i), eps[i], t1[i], std::nullopt});
  return out;
}

}  // namespace

TEST_CASE("relax_factor") {
  CHECK(relax_factor(0.0, 3.0) == 1.0);
  CHECK(relax_factor(2.5, 2.5) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(relax_factor(4.0 * std::log(2.0), 4.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(relax_factor(-1.0, 1.0), Error);
  CHECK_THROWS_AS(relax_factor(1.0, 0.0), Error);
}

TEST_CASE("relax") {
  SUBCASE("dt = 0 is the identity") {
    std::mt19937_64 rng(5);
    const auto s = DiagonalState::from_probs(oracle::random_distribution(rng, 3));
    CHECK(relax(s, specs({0.1, 0.2, 0.3}, {1, 2, 3}), 0.0) == s);
  }
  SUBCASE("long times reach equilibrium") {
    const auto q = specs({0.1, -0.2, 0.3}, {1, 2, 3});
    const auto s = relax(DiagonalState::basis(3, 5), q, 1e4);
    const auto eq = equilibrium_state(q);
    for (std::size_t b = 0; b < eq.size(); ++b) CHECK(s[b] == doctest::Approx(eq[b]).epsilon(1e-12));
  }
  SUBCASE("single qubit closed form at dt = T1") {
    const auto q = specs({0.2}, {7.0});
    const auto s = relax(product_state(std::vector<double>{0.8}), q, 7.0);
    CHECK(marginal_bias(s, 0).value() == doctest::Approx(0.4207276647028654).epsilon(1e-14));
  }
  SUBCASE("errors") {
    const auto s = DiagonalState::uniform(2);
    CHECK_THROWS_AS(relax(s, specs({0, 0}, {1, 1}), -1.0), Error);
    CHECK_THROWS_AS(relax(s, specs({0, 0}, {1, 0}), 1.0), Error);
    CHECK_THROWS_AS(relax(s, specs({0}, {1}), 1.0), Error);
  }
}

TEST_CASE("relax matches the dense Kronecker-product channel") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::uniform_real_distribution<double> t(0.5, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<double> eps(static_cast<std::size_t>(n));
    std::vector<double> t1(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      eps[static_cast<std::size_t>(i)] = u(rng);
      t1[static_cast<std::size_t>(i)] = t(rng);
    }
    const auto p = oracle::random_distribution(rng, n);
    const double dt = t(rng) / 3.0;
    const auto ref = oracle::relax_dense(p, eps, t1, dt);
    const auto got = relax(DiagonalState::from_probs(p), specs(eps, t1), dt);
    for (std::size_t b = 0; b < ref.size(); ++b) CHECK(got[b] == doctest::Approx(ref[b]).epsilon(1e-12));
  }
}

TEST_CASE("relaxation properties") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::uniform_real_distribution<double> t(0.5, 30.0);

  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 6;
    std::vector<double> eps(static_cast<std::size_t>(n));
    std::vector<double> t1(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      eps[static_cast<std::size_t>(i)] = u(rng);
      t1[static_cast<std::size_t>(i)] = t(rng);
    }
    const auto q = specs(eps, t1);
    auto s0 = DiagonalState::from_probs(oracle::random_distribution(rng, n));
    if (n >= 3) s0 = compress_3b(std::move(s0), 0, 1, 2);  // correlated input
    const double dt1 = t(rng);
    const double dt2 = t(rng);

    const auto s1 = relax(s0, q, dt1);
    double sum = 0.0;
    for (double p : s1.probs()) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);

    // Marginals follow ε_eq + (ε0 − ε_eq) e^{−dt/T1}.
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double e0 = marginal_bias(s0, i).value();
      const double expect = eps[k] + (e0 - eps[k]) * std::exp(-dt1 / t1[k]);
      CHECK(std::abs(marginal_bias(s1, i).value() - expect) < 1e-12);
    }

    // Semigroup.
    const auto twice = relax(s1, q, dt2);
    const auto once = relax(s0, q, dt1 + dt2);
    for (std::size_t b = 0; b < once.size(); ++b) CHECK(std::abs(twice[b] - once[b]) < 1e-9);

    // Fixed point.
    const auto eq = equilibrium_state(q);
    const auto eq_relaxed = relax(eq, q, dt1);
    for (std::size_t b = 0; b < eq.size(); ++b) CHECK(std::abs(eq_relaxed[b] - eq[b]) < 1e-12);
  }
}

TEST_CASE("covariance of two correlated bits decays by λ_i λ_j") {
  // Perfectly correlated pair: P(00) = P(11) = 1/2.
  const auto s0 = DiagonalState::from_probs({0.5, 0.0, 0.0, 0.5});
  const auto q = specs({0.3, -0.1}, {2.0, 5.0});
  auto covariance = [](const DiagonalState& s) {
    const double e0 = marginal_bias(s, 0).value();
    const double e1 = marginal_bias(s, 1).value();
    const double zz = s[0] - s[1] - s[2] + s[3];
    return zz - e0 * e1;
  };
  for (double dt : {0.1, 1.0, 4.0}) {
    const auto s = relax(s0, q, dt);
    const double lam = std::exp(-dt / 2.0) * std::exp(-dt / 5.0);
    CHECK(covariance(s) == doctest::Approx(lam * covariance(s0)).epsilon(1e-12));
  }
}

TEST_CASE("relaxation changes entropy of non-equilibrium states") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = specs({0.2, 0.1, -0.3}, {1.0, 2.0, 3.0});
    const auto s = DiagonalState::from_probs(oracle::random_distribution(rng, 3));
    const double dt = 0.01 + 0.1 * static_cast<double>(trial);
    CHECK(shannon_entropy(relax(s, q, dt)) != doctest::Approx(shannon_entropy(s)).epsilon(1e-12));
  }
}

TEST_CASE("t1_ratio_report and compare_t1") {
  const std::vector<QubitSpec> unsalted = {{"C2", 1, 30.85, {}}, {"C1", 1, 27.45, {}}, {"H", 4, 5.46, {}}};
  const std::vector<QubitSpec> salted = {{"C2", 1, 28.3, {}}, {"C1", 1, 16.0, {}}, {"H", 4, 1.88, {}}};

  const auto u = t1_ratio_report(unsalted, 2);
  CHECK(u[0].ratio_to_reset == doctest::Approx(5.65).epsilon(0.01 / 5.65));
  CHECK(u[1].ratio_to_reset == doctest::Approx(5.03).epsilon(0.01 / 5.03));
  CHECK(u[2].ratio_to_reset == 1.0);
  const auto s = t1_ratio_report(salted, 2);
  CHECK(std::abs(s[0].ratio_to_reset - 15.05) <= 0.01);
  CHECK(std::abs(s[1].ratio_to_reset - 8.51) <= 0.01);

  const std::vector<QubitSpec> same = {{"a", 0, 2.0, {}}, {"b", 0, 2.0, {}}};
  for (const auto& row : t1_ratio_report(same, 1)) CHECK(row.ratio_to_reset == 1.0);
  CHECK_THROWS_AS(t1_ratio_report(same, 2), Error);

  const auto c = compare_t1(unsalted, salted, 2);
  CHECK(std::abs(c[2].t1_change_percent + 65.6) <= 0.1);
  CHECK(std::abs(c[1].t1_change_percent + 41.7) <= 0.1);
  CHECK(std::abs(c[0].t1_change_percent + 8.3) <= 0.1);
  CHECK(std::abs(c[1].ratio_change_percent - 69.2) <= 0.1);
  CHECK(std::abs(c[0].ratio_change_percent - 166.4) <= 0.1);
}

TEST_CASE("RelaxationClock") {
  RelaxationClock clock;
  clock.advance_gate(0.01);
  clock.advance_wait(2.0);
  CHECK(clock.elapsed_total == doctest::Approx(2.01));
  CHECK(clock.coherent_time_used == doctest::Approx(0.01));
  CHECK(clock.coherent_time_used <= clock.elapsed_total);
  CHECK_THROWS_AS(clock.advance_wait(-1.0), Error);
}
