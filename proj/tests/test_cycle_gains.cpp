#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stabcert/cycle_gains.hpp"
#include "stabcert/stability.hpp"
#include "test_util.hpp"

using namespace stabcert;
using namespace stabcert::testing;

namespace {

constexpr double kTol = 1e-9;

std::vector<double> cycle_gains_of(const SquareMatrix& m) {
  const MetzlerMatrix mm = validate_metzler(m);
  const auto cycles = enumerate_simple_cycles(WeightedDigraph::from_matrix(m), 100000);
  const EdgeGainTable gains = edge_sum_gains(mm, kTol);
  std::vector<double> out;
  for (const auto& c : cycles) out.push_back(cycle_sum_gain(c, gains));
  return out;
}

}  // namespace

TEST_CASE("edge gains of the 3x3 example") {
  const EdgeGainTable t = edge_sum_gains(validate_metzler(example_3x3()), kTol);
  CHECK(t.gamma_at(1, 0) == doctest::Approx(0.5));  // gamma_21
  CHECK(t.gamma_at(0, 1) == doctest::Approx(1.0));  // gamma_12
  CHECK(t.gamma_at(2, 1) == doctest::Approx(1.0));  // gamma_32
  CHECK(t.gamma_at(1, 2) == doctest::Approx(0.5));  // gamma_23
  CHECK(t.gamma_at(0, 2) == 0.0);

  const auto gains = cycle_gains_of(example_3x3());
  REQUIRE(gains.size() == 2);
  CHECK(gains[0] == 0.5);  // exactly representable
  CHECK(gains[1] == 0.5);
}

TEST_CASE("edge gains reject nonnegative diagonals; 1x1 gives an empty table") {
  CHECK_THROWS_AS(edge_sum_gains(validate_metzler(SquareMatrix(2, {0, 1, 1, -1})), kTol), Error);
  const EdgeGainTable t = edge_sum_gains(validate_metzler(SquareMatrix(1, {-2})), kTol);
  for (double g : t.gamma) CHECK(g == 0.0);
}

TEST_CASE("cycle gains of the 4x4 example are 3/5, 1/5, 1/5") {
  const auto gains = cycle_gains_of(example_4x4());
  REQUIRE(gains.size() == 3);
  CHECK(std::abs(gains[0] - 0.6) <= 1e-15);
  CHECK(std::abs(gains[1] - 0.2) <= 1e-15);
  CHECK(std::abs(gains[2] - 0.2) <= 1e-15);
  CHECK(std::abs(gains[0] + gains[1] + gains[2] - 1.0) <= 1e-15);
}

TEST_CASE("flow-system cycle gain is f^2 / ((f-g)(d+f))") {
  const double f = 2.0, g = 0.5, d = 1.5;
  const auto gains = cycle_gains_of(flow_2x2(f, g, d));
  REQUIRE(gains.size() == 1);
  CHECK(gains[0] == doctest::Approx(f * f / ((f - g) * (d + f))).epsilon(1e-12));
}

TEST_CASE("all-ones gains multiply to one") {
  // 2-cycle with both edge gains 1: m_ij = -m_ii.
  const SquareMatrix m(2, {-1, 1, 1, -1});
  const auto gains = cycle_gains_of(m);
  REQUIRE(gains.size() == 1);
  CHECK(gains[0] == doctest::Approx(1.0));
}

TEST_CASE("cycle_sum_gain rejects absent edges") {
  const EdgeGainTable t = edge_sum_gains(validate_metzler(example_3x3()), kTol);
  SimpleCycle bogus{{0, 2}};  // no edge 1 -> 3
  CHECK_THROWS_AS(cycle_sum_gain(bogus, t), Error);
}

TEST_CASE("total cycle gains of the 6x6 example expand by inclusion-exclusion") {
  const SquareMatrix m = example_6x6(0.3);
  const MetzlerMatrix mm = validate_metzler(m);
  const auto cycles = enumerate_simple_cycles(WeightedDigraph::from_matrix(m), 1000);
  const EdgeGainTable gains = edge_sum_gains(mm, kTol);
  const TotalGainVector totals = total_cycle_gains(mm, cycles, gains, 1000000);

  // Gains keyed by cycle node sets.
  const auto gain_of = [&](std::vector<std::size_t> nodes) {
    for (const auto& c : cycles)
      if (c.nodes == nodes) return cycle_sum_gain(c, gains);
    REQUIRE(false);
    return 0.0;
  };
  const double g1 = gain_of({0, 1}), g2 = gain_of({1, 2}), g3 = gain_of({3, 4}),
               g4 = gain_of({0, 5}), g5 = gain_of({0, 1, 2, 3, 4, 5});

  REQUIRE(totals.gamma_prefix.size() == 6);
  CHECK(totals.gamma_prefix[0] == 0.0);
  CHECK(totals.gamma_prefix[1] == doctest::Approx(g1).epsilon(1e-12));
  CHECK(totals.gamma_prefix[2] == doctest::Approx(g1 + g2).epsilon(1e-12));
  CHECK(totals.gamma_prefix[3] == doctest::Approx(g1 + g2).epsilon(1e-12));
  CHECK(totals.gamma_prefix[4] ==
        doctest::Approx(g1 + g2 + g3 - g1 * g3 - g2 * g3).epsilon(1e-12));
  CHECK(totals.gamma_prefix[5] ==
        doctest::Approx(g1 + g2 + g3 + g4 + g5 - g1 * g3 - g2 * g3 - g2 * g4 - g3 * g4 +
                        g2 * g3 * g4)
            .epsilon(1e-12));
}

TEST_CASE("acyclic matrices have all-zero total gains") {
  const SquareMatrix tri(3, {-1, 1, 1, 0, -1, 1, 0, 0, -1});
  const MetzlerMatrix mm = validate_metzler(tri);
  const auto cycles = enumerate_simple_cycles(WeightedDigraph::from_matrix(tri), 1000);
  const EdgeGainTable gains = edge_sum_gains(mm, kTol);
  const TotalGainVector totals = total_cycle_gains(mm, cycles, gains, 1000);
  for (double g : totals.gamma_prefix) CHECK(g == 0.0);
}

TEST_CASE("determinant identity holds on random irreducible samples") {
  Rng rng(43);
  for (int s = 0; s < 200; ++s) {
    const std::size_t n = 2 + rng.index(6);
    const SquareMatrix m = random_irreducible_metzler(rng, n, 0.4, rng.chance(0.5));
    const MetzlerMatrix mm = validate_metzler(m);
    const auto cycles = enumerate_simple_cycles(WeightedDigraph::from_matrix(m), 100000);
    const EdgeGainTable gains = edge_sum_gains(mm, kTol);
    // total_cycle_gains throws if the identity fails at any prefix.
    const TotalGainVector totals = total_cycle_gains(mm, cycles, gains, 1000000);
    for (std::size_t i = 1; i <= n; ++i) {
      const double det = determinant_lu(leading_submatrix(m, i));
      double diag = 1.0;
      for (std::size_t j = 0; j < i; ++j) diag *= m(j, j);
      CHECK(std::abs(det - (1.0 - totals.gamma_prefix[i - 1]) * diag) <=
            1e-9 * (1.0 + std::abs(det)));
    }
  }
}

TEST_CASE("feasibility witness of the 4x4 example") {
  const WitnessOutcome out = feasibility_witness(validate_metzler(example_4x4()), kTol);
  REQUIRE(out.status == WitnessStatus::Feasible);
  const auto& w = *out.witness;
  for (double x : w.xi) CHECK(x > 0.0);
  // M xi = -1 within solver accuracy.
  const SquareMatrix m = example_4x4();
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s += m(i, j) * w.xi[j];
    CHECK(s == doctest::Approx(-1.0).epsilon(1e-10));
  }
  CHECK(w.delta < 1.0);
}

TEST_CASE("witness infeasible on the singular 3x3 example") {
  const WitnessOutcome out = feasibility_witness(validate_metzler(example_3x3()), kTol);
  CHECK(out.status == WitnessStatus::Infeasible);
  CHECK(!out.diagnostic.empty());
}

TEST_CASE("witness on the identity-decay matrix: xi = 1, delta = 0") {
  const std::vector<double> d{-1, -1, -1};
  const WitnessOutcome out =
      feasibility_witness(validate_metzler(SquareMatrix::diagonal(d)), kTol);
  REQUIRE(out.status == WitnessStatus::Feasible);
  for (double x : out.witness->xi) CHECK(x == doctest::Approx(1.0));
  CHECK(out.witness->delta == 0.0);
}

TEST_CASE("max gains from the witness: symmetric 2x2 hand case") {
  const MetzlerMatrix m = validate_metzler(SquareMatrix(2, {-2, 1, 1, -2}));
  const WitnessOutcome out = feasibility_witness(m, kTol);
  REQUIRE(out.status == WitnessStatus::Feasible);
  CHECK(out.witness->xi[0] == doctest::Approx(1.0));
  CHECK(out.witness->xi[1] == doctest::Approx(1.0));
  CHECK(out.witness->delta == doctest::Approx(0.5));

  const EdgeGainTable t = max_gains_from_witness(m, *out.witness, kTol);
  REQUIRE(t.has_psi);
  CHECK(t.psi_at(0, 1) == doctest::Approx(0.5));
  CHECK(t.psi_at(1, 0) == doctest::Approx(0.5));
  const SimpleCycle c{{0, 1}};
  CHECK(cycle_max_gain(c, t) == doctest::Approx(0.25));
}

TEST_CASE("witness soundness: node sums <= 1 and cycle psi-products below 1") {
  Rng rng(47);
  int feasible_seen = 0;
  for (int s = 0; s < 200; ++s) {
    const SquareMatrix m = random_metzler(rng, 2 + rng.index(6), 0.5, rng.chance(0.7));
    const MetzlerMatrix mm = validate_metzler(m);
    const WitnessOutcome out = feasibility_witness(mm, kTol);
    if (out.status != WitnessStatus::Feasible) continue;
    ++feasible_seen;
    const EdgeGainTable t = max_gains_from_witness(mm, *out.witness, kTol);
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
      double node_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (t.psi_at(i, j) != 0.0) node_sum += t.gamma_at(i, j) / t.psi_at(i, j);
      CHECK(node_sum <= 1.0 + 1e-12);
    }
    const auto cycles = enumerate_simple_cycles(WeightedDigraph::from_matrix(m), 100000);
    for (const auto& c : cycles) {
      const double pc = cycle_max_gain(c, t);
      CHECK(pc < 1.0);
      CHECK(pc == doctest::Approx(std::pow(out.witness->delta,
                                           static_cast<double>(c.nodes.size())))
                      .epsilon(1e-9));
    }
  }
  CHECK(feasible_seen > 50);
}

TEST_CASE("sum-cycle gains are invariant under positive diagonal similarity") {
  Rng rng(53);
  for (int s = 0; s < 100; ++s) {
    const std::size_t n = 2 + rng.index(5);
    const SquareMatrix m = random_irreducible_metzler(rng, n, 0.5, true);
    std::vector<double> d(n);
    for (auto& v : d) v = rng.uniform(0.2, 5.0);
    SquareMatrix scaled(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scaled(i, j) = d[i] * m(i, j) / d[j];
    const auto a = cycle_gains_of(m);
    const auto b = cycle_gains_of(scaled);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
      CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9));
  }
}

TEST_CASE("single-cycle graphs: gain below 1 iff the witness exists") {
  Rng rng(59);
  for (int s = 0; s < 200; ++s) {
    const std::size_t n = 2 + rng.index(5);
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = -rng.uniform(0.4, 2.0);
    for (std::size_t v = 0; v < n; ++v) m((v + 1) % n, v) = rng.uniform(0.1, 2.0);
    const MetzlerMatrix mm = validate_metzler(m);
    const auto gains = cycle_gains_of(m);
    REQUIRE(gains.size() == 1);
    if (std::abs(gains[0] - 1.0) < 1e-6) continue;  // keep clear of the margin
    const WitnessOutcome out = feasibility_witness(mm, kTol);
    CHECK((gains[0] < 1.0) == (out.status == WitnessStatus::Feasible));
  }
}
