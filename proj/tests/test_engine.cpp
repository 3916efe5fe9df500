#include <cmath>
#include <random>

#include "doctest.h"
#include "hbac/engine.hpp"
#include "hbac/gates.hpp"
#include "hbac/io.hpp"
#include "oracles.hpp"

using namespace hbac;

namespace {

SystemConfig ideal(SystemConfig c, double t1_comp) {
  for (int q = 0; q < c.n_qubits(); ++q) {
    if (!c.is_reset(q)) c.qubits[static_cast<std::size_t>(q)].t1 = t1_comp;
  }
  return c;
}

double final_bias(const Sequence& seq, const SystemConfig& c, int target) {
  return execute(seq, c).steps.back().biases_after[static_cast<std::size_t>(target)];
}

}  // namespace

TEST_CASE("execute: empty sequence") {
  const auto c = io::preset("tce-salted");
  const auto t = execute({}, c);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].op == "init");
  CHECK(t.steps[0].biases_after[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t.steps[0].biases_after[2] == doctest::Approx(4.0).epsilon(1e-9));
  const auto m = trace_metrics(t, c, 0);
  CHECK(m.cooling_factor == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.bypass_margin <= 0.0);
}

TEST_CASE("execute: swap loads the proton bias onto a carbon") {
  auto c = io::preset("tce-salted");
  c.gate_duration = 0.0;
  const auto t = execute(parse_sequence("swap 2 1"), c);
  const auto& b = t.steps.back().biases_after;
  CHECK(b[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b[1] == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(b[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("execute: clock, T2 budget and errors") {
  auto c = io::preset("tce-salted");
  const auto seq = parse_sequence("swap 2 1\nwait 2\nnot 0\nwait 0\n");
  const auto t = execute(seq, c);
  REQUIRE(t.steps.size() == 5);
  CHECK(t.steps[1].time_after == doctest::Approx(0.01));
  CHECK(t.steps[2].time_after == doctest::Approx(2.01));
  CHECK(t.steps[3].coherent_time_used == doctest::Approx(0.02));
  CHECK(t.steps[4].time_after == t.steps[3].time_after);
  CHECK(t.warnings.empty());

  for (auto& q : c.qubits) q.t2 = 0.015;
  const auto budget = execute(seq, c);
  REQUIRE(budget.warnings.size() == 1);
  CHECK(budget.warnings[0].find("T2") != std::string::npos);

  CHECK_THROWS_AS(execute(parse_sequence("wait auto w1"), c), Error);
  CHECK_THROWS_AS(execute(parse_sequence("swap 0 7"), c), Error);
  CHECK_THROWS_AS(execute({}, c, DiagonalState::uniform(2)), Error);
}

TEST_CASE("execute: initial state override and absolute units") {
  SystemConfig c;
  c.qubits = {{"a", 0.5, 1.0, {}}, {"b", 0.5, 1.0, {}}, {"c", 0.5, 1.0, {}}};
  c.reset_qubits = {2};
  c.bias_unit = BiasUnit::absolute;
  c.gate_duration = 0.0;
  const auto t = execute(parse_sequence("comp 0 1 2"), c);
  CHECK(t.steps.back().biases_after[0] == doctest::Approx((1.5 - 0.125) / 2).epsilon(1e-14));

  const auto u = execute(parse_sequence("comp 0 1 2"), c, DiagonalState::uniform(3));
  CHECK(u.steps.back().biases_after[0] == 0.0);
}

TEST_CASE("ideal engine reduces to gate algebra") {
  std::mt19937_64 rng(31);
  auto c = io::preset("tce-salted");
  c.gate_duration = 0.0;
  for (auto& q : c.qubits) q.t1 = 1e300;
  const auto seq = parse_sequence("swap 2 0\ncomp 0 1 2\nnot 1\nperm 1:6 3:5\nswap 1 2\nwait 0\n");
  for (int trial = 0; trial < 20; ++trial) {
    const auto s0 = DiagonalState::from_probs(oracle::random_distribution(rng, 3));
    const auto t = execute(seq, c, s0);
    auto s = swap_qubits(s0, 2, 0);
    s = compress_3b(std::move(s), 0, 1, 2);
    s = not_qubit(std::move(s), 1);
    s = apply_permutation(std::move(s), Permutation{{{1, 6}, {3, 5}}});
    s = swap_qubits(std::move(s), 1, 2);
    for (std::size_t b = 0; b < 8; ++b) CHECK(std::abs(t.final_state[b] - s[b]) <= 1e-15);
    for (std::size_t k = 1; k < t.steps.size(); ++k) {
      CHECK(std::abs(t.steps[k].entropy_after - t.steps[0].entropy_after) < 1e-12);
    }
  }
}

TEST_CASE("canonical_ac_schedule") {
  const auto c = io::preset("tce-salted");
  const auto fixed = canonical_ac_schedule(c, 0, FixedWait{3 * 1.88});
  CHECK(format_sequence(fixed) == "swap 2 0\nwait 5.64\nswap 2 1\nwait 5.64\ncomp 0 1 2\n");
  CHECK(validate(fixed, c).size() == 1);  // H-C2 swap is not on the coupling chain
  CHECK_FALSE(has_errors(validate(fixed, c)));

  const auto autos = canonical_ac_schedule(c, 0, AutoWait{});
  CHECK(autos.auto_labels() == std::vector<std::string>{"w1", "w2"});
  CHECK(default_wait(c) == doctest::Approx(5.64));

  SystemConfig four = c;
  four.qubits.push_back({"X", 1, 1, {}});
  CHECK_THROWS_AS(canonical_ac_schedule(four, 0, AutoWait{}), Error);
  CHECK_THROWS_AS(canonical_ac_schedule(c, 2, AutoWait{}), Error);
  SystemConfig two_resets = c;
  two_resets.reset_qubits = {1, 2};
  CHECK_THROWS_AS(canonical_ac_schedule(two_resets, 0, AutoWait{}), Error);

  SUBCASE("ideal limit reaches the 3-bit closed form of the proton bias") {
    auto ic = ideal(c, 1e9);
    ic.gate_duration = 0.0;
    const auto seq = canonical_ac_schedule(ic, 0, FixedWait{1e3});
    const double eps_h = 4.0 * ic.relative_scale;
    const double closed = (3 * eps_h - eps_h * eps_h * eps_h) / 2 / ic.relative_scale;
    CHECK(final_bias(seq, ic, 0) == doctest::Approx(closed).epsilon(1e-5));
  }

  SUBCASE("equal reset and computation bias gives 1.5 eps") {
    auto ic = ideal(c, 1e9);
    ic.gate_duration = 0.0;
    ic.qubits[2].eq_bias = 1.0;
    const auto seq = canonical_ac_schedule(ic, 0, FixedWait{1e3});
    CHECK(final_bias(seq, ic, 0) == doctest::Approx(1.5).epsilon(1e-5));
  }

  SUBCASE("zero waits compress the fresh unequal biases") {
    auto zc = c;
    zc.gate_duration = 0.0;
    const auto seq = canonical_ac_schedule(zc, 0, FixedWait{0.0});
    // Brute force on the 8 outcomes: product (1,1,4) scaled, then swap(2,0),
    // swap(2,1), then exchange (1,0,0) <-> (0,1,1) on qubits (0,1,2).
    const double s = zc.relative_scale;
    auto p = oracle::product({s, s, 4 * s});
    auto swap_bits = [](std::vector<double> v, int i, int j) {
      std::vector<double> out(8);
      for (std::uint64_t b = 0; b < 8; ++b) {
        const int bi = oracle::bit(b, i, 3);
        const int bj = oracle::bit(b, j, 3);
        std::uint64_t e = b & ~((1u << (2 - i)) | (1u << (2 - j)));
        e |= static_cast<std::uint64_t>(bj) << (2 - i);
        e |= static_cast<std::uint64_t>(bi) << (2 - j);
        out[e] = v[b];
      }
      return out;
    };
    p = swap_bits(p, 2, 0);
    p = swap_bits(p, 2, 1);
    std::swap(p[0b100], p[0b011]);
    CHECK(final_bias(seq, zc, 0) == doctest::Approx(oracle::marginal(p, 0) / s).epsilon(1e-9));
  }
}

TEST_CASE("trace_metrics") {
  const auto c = io::preset("tce-salted");
  const auto t = execute(canonical_ac_schedule(c, 0, FixedWait{default_wait(c)}), c);
  const auto m = trace_metrics(t, c, 0);
  CHECK(m.bound_initial == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(m.bypass_margin == doctest::Approx(m.final_bias - m.bound_initial));
  CHECK(m.cooling_factor == doctest::Approx(m.final_bias));
  CHECK_FALSE(m.effective_temperature.has_value());
  CHECK_THROWS_AS(trace_metrics(t, c, 0, true), Error);
  CHECK_THROWS_AS(trace_metrics(t, c, 3), Error);

  SUBCASE("ideal cooling factor tends to 6") {
    auto ic = ideal(c, 1e9);
    const auto seq = canonical_ac_schedule(ic, 0, FixedWait{1e3});
    CHECK(trace_metrics(execute(seq, ic), ic, 0).cooling_factor == doctest::Approx(6.0).epsilon(1e-3));
  }

  SUBCASE("salted beats unsalted on the same schedule") {
    const auto u = io::preset("tce-unsalted");
    const auto seq = parse_sequence("swap 2 0\nwait 5.64\nswap 2 1\nwait 5.64\ncomp 0 1 2\n");
    const auto ms = trace_metrics(execute(seq, c), c, 0);
    const auto mu = trace_metrics(execute(seq, u), u, 0);
    CHECK(ms.cooling_factor > mu.cooling_factor);
  }

  SUBCASE("absolute units report a spin temperature") {
    SystemConfig a;
    const double k = 1.380649e-23;
    const double de = 2 * k * 300.0 * 1e-5;
    a.qubits = {{"C", 1e-5, 10.0, {}}, {"H", 4e-5, 2.0, {}}};
    a.reset_qubits = {1};
    a.bias_unit = BiasUnit::absolute;
    a.physical = PhysicalParams{de, k, 300.0};
    const auto ta = execute({}, a);
    const auto ma = trace_metrics(ta, a, 0, true);
    REQUIRE(ma.effective_temperature.has_value());
    CHECK(*ma.effective_temperature == doctest::Approx(300.0).epsilon(1e-6));
  }
}

TEST_CASE("no wait-free sequence beats the reversible bound") {
  std::mt19937_64 rng(77);
  auto c = io::preset("tce-salted");
  c.gate_duration = 0.0;
  const char* ops[] = {"swap 0 1", "swap 0 2", "swap 1 2", "comp 0 1 2", "comp 0 2 1", "not 0", "perm 1:6"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (int k = 0; k < 6; ++k) text += std::string(ops[rng() % 7]) + "\n";
    const auto t = execute(parse_sequence(text), c);
    CHECK(trace_metrics(t, c, 0).bypass_margin <= 1e-9);
  }
}

TEST_CASE("final bias is non-decreasing in each computation T1") {
  for (const char* name : {"tce-salted", "tce-unsalted"}) {
    const auto c = io::preset(name);
    const auto seq = canonical_ac_schedule(c, 0, FixedWait{default_wait(c)});
    for (int q : {0, 1}) {
      double prev = -INFINITY;
      for (double t1 : {5.46, 16.0, 27.45, 54.9, 109.8}) {
        auto cc = c;
        cc.qubits[static_cast<std::size_t>(q)].t1 = t1;
        const double b = final_bias(seq, cc, 0);
        CHECK(b >= prev);
        prev = b;
      }
    }
  }
}

TEST_CASE("sweep") {
  const auto c = io::preset("tce-salted");
  const auto seq = canonical_ac_schedule(c, 0, FixedWait{default_wait(c)});

  const auto one = sweep(c, {"qubits[C1].t1", {16.0}}, seq, 0);
  REQUIRE(one.rows.size() == 1);
  const auto direct = trace_metrics(execute(seq, c), c, 0);
  CHECK(one.rows[0].metrics.final_bias == direct.final_bias);
  CHECK(one.rows[0].metrics.bypass_margin == direct.bypass_margin);
  CHECK(one.target_name == "C2");

  const std::vector<double> t1s = {5.46, 16, 27.45, 54.9};
  const auto t1 = sweep(c, {"qubits[1].t1", t1s}, seq, 0, 3);
  REQUIRE(t1.rows.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(t1.rows[k].axis_value == t1s[k]);
  for (std::size_t k = 1; k < 4; ++k) CHECK(t1.rows[k].metrics.final_bias >= t1.rows[k - 1].metrics.final_bias);

  // Thread count does not change the table.
  const auto serial = sweep(c, {"qubits[1].t1", t1s}, seq, 0, 1);
  for (std::size_t k = 0; k < 4; ++k) CHECK(serial.rows[k].metrics.final_bias == t1.rows[k].metrics.final_bias);

  SUBCASE("wait axis has an interior maximum") {
    const auto autos = parse_sequence("swap 2 0\nwait 5.64\nswap 2 1\nwait auto w2\ncomp 0 1 2\n");
    std::vector<double> grid;
    for (int k = 0; k <= 40; ++k) grid.push_back(0.5 * k);
    const auto w = sweep(c, {"waits.w2", grid}, autos, 0);
    std::size_t best = 0;
    for (std::size_t k = 0; k < w.rows.size(); ++k) {
      if (w.rows[k].metrics.final_bias > w.rows[best].metrics.final_bias) best = k;
    }
    CHECK(best > 0);
    CHECK(best + 1 < w.rows.size());
  }

  SUBCASE("other paths and errors") {
    CHECK(sweep(c, {"gate_duration_s", {0.0, 0.01}}, seq, 0).rows.size() == 2);
    CHECK(sweep(c, {"qubits[H].eq_bias", {1.0, 4.0}}, seq, 0).rows[1].metrics.final_bias >
          sweep(c, {"qubits[H].eq_bias", {1.0, 4.0}}, seq, 0).rows[0].metrics.final_bias);
    CHECK_THROWS_AS(sweep(c, {"qubits[X].t1", {1.0}}, seq, 0), Error);
    CHECK_THROWS_AS(sweep(c, {"qubits[0].t3", {1.0}}, seq, 0), Error);
    CHECK_THROWS_AS(sweep(c, {"waits.w9", {1.0}}, seq, 0), Error);
    CHECK_THROWS_AS(sweep(c, {"magnet", {1.0}}, seq, 0), Error);
    CHECK_THROWS_AS(sweep(c, {"qubits[0].t1", {-1.0}}, seq, 0, 2), Error);
  }
}
