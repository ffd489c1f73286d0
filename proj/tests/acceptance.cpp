// Acceptance suite: one criterion per entry, one pass/fail line each.
// Run with no arguments for the full battery or with criterion numbers to
// select. Exit code is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stabcert/expansion.hpp"
#include "stabcert/io.hpp"
#include "stabcert/simulate.hpp"
#include "stabcert/stability.hpp"
#include "test_util.hpp"

using namespace stabcert;
using namespace stabcert::testing;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kTol = 1e-9;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// --- criterion 1: 6x6 cycle structure ---------------------------------------

bool criterion_cycles_6x6(Check& c) {
  const auto t0 = Clock::now();
  const SquareMatrix m = example_6x6(0.3);
  const std::string payload = cycle_analysis_to_json(m, AnalysisConfig{});
  const auto j = nlohmann::json::parse(payload);

  c.require(j["cycles"].size() == 5, "expected exactly 5 cycles");

  // Expected cycles by node set; map onto reported 1-based indices.
  const auto index_of = [&j](std::vector<int> nodes) {
    for (std::size_t i = 0; i < j["cycles"].size(); ++i)
      if (j["cycles"][i].get<std::vector<int>>() == nodes) return i + 1;
    return std::size_t{0};
  };
  const std::size_t c1 = index_of({1, 2}), c2 = index_of({2, 3}), c3 = index_of({4, 5}),
                    c4 = index_of({1, 6}), c5 = index_of({1, 2, 3, 4, 5, 6});
  c.require(c1 && c2 && c3 && c4 && c5, "an expected cycle is missing");
  if (!c.ok) return false;

  const auto family_set = [&j](const char* key) {
    std::set<std::set<std::size_t>> out;
    for (const auto& fam : j["disjoint_cycle_sets"][key]) {
      std::set<std::size_t> f;
      for (const auto& idx : fam) f.insert(idx.get<std::size_t>());
      out.insert(f);
    }
    return out;
  };
  c.require(family_set("K1") ==
                std::set<std::set<std::size_t>>{{c1}, {c2}, {c3}, {c4}, {c5}},
            "K1 mismatch");
  c.require(family_set("K2") == std::set<std::set<std::size_t>>{
                                    {c1, c3}, {c2, c3}, {c2, c4}, {c3, c4}},
            "K2 mismatch");
  c.require(family_set("K3") == std::set<std::set<std::size_t>>{{c2, c3, c4}}, "K3 mismatch");
  c.require(family_set("K4").empty(), "K4 should be empty");
  c.require(family_set("K5").empty(), "K5 should be empty");

  const double elapsed = seconds_since(t0);
  c.require(elapsed < 1.0, "runtime " + std::to_string(elapsed) + "s exceeds 1s");
  c.detail << "5 cycles, families exact, " << elapsed << "s";
  return c.ok;
}

// --- criterion 2: 3x3 insufficiency example ---------------------------------

bool criterion_3x3(Check& c) {
  const StabilityReport rep = full_report(example_3x3(), AnalysisConfig{});
  c.require(rep.sum_conditions.cycle_gains.size() == 2, "expected two cycles");
  for (double g : rep.sum_conditions.cycle_gains)
    c.require(g == 0.5, "cycle gain " + std::to_string(g) + " != 1/2 exactly");
  c.require(rep.sum_conditions.necessary == Tristate::Pass, "necessary condition should pass");
  c.require(rep.oracle.has_value() && std::abs(rep.oracle->abscissa) <= 1e-9,
            "oracle abscissa not 0 within 1e-9");
  c.require(rep.verdict == Verdict::Marginal || rep.verdict == Verdict::NotHurwitz,
            "verdict should be Marginal or NotHurwitz");
  c.detail << "gains 1/2 exactly, abscissa " << rep.oracle->abscissa << ", verdict "
           << to_string(rep.verdict);
  return c.ok;
}

// --- criterion 3: 4x4 non-necessity example ---------------------------------

bool criterion_4x4(Check& c) {
  const StabilityReport rep = full_report(example_4x4(), AnalysisConfig{});
  const auto& g = rep.sum_conditions.cycle_gains;
  c.require(g.size() == 3, "expected three cycles");
  c.require(std::abs(g[0] - 0.6) <= 1e-15, "gamma_c1 != 3/5");
  c.require(std::abs(g[1] - 0.2) <= 1e-15, "gamma_c2 != 1/5");
  c.require(std::abs(g[2] - 0.2) <= 1e-15, "gamma_c3 != 1/5");
  c.require(std::abs(rep.sum_conditions.cycle_gain_sum - 1.0) <= 1e-15, "gain sum != 1");
  c.require(rep.sum_conditions.sufficient != Tristate::Pass, "sufficient test must not pass");
  c.require(rep.verdict == Verdict::Hurwitz, "verdict");
  c.require(rep.minors.verdict == Verdict::Hurwitz, "minors");
  c.require(rep.schur.verdict == Verdict::Hurwitz, "schur");
  c.require(rep.condensation.verdict == Verdict::Hurwitz, "condensation");
  c.require(rep.max_conditions.verdict == Verdict::Hurwitz, "max-gain");
  c.require(rep.sum_conditions.exact == Verdict::Hurwitz, "sum-exact");
  c.require(rep.oracle.has_value() && rep.oracle->abscissa < -1e-6, "oracle abscissa");
  c.detail << "sum of gains 1, all tests Hurwitz, abscissa " << rep.oracle->abscissa;
  return c.ok;
}

// --- criterion 4: flow-system sweep -----------------------------------------

bool criterion_flow_sweep(Check& c) {
  const auto t0 = Clock::now();
  AnalysisConfig cfg;
  cfg.with_oracle = false;  // the verdict never depends on the oracle
  std::size_t tested = 0, skipped = 0, disagreements = 0;
  for (int fi = 1; fi <= 50; ++fi) {
    for (int gi = 1; gi <= 50; ++gi) {
      for (int di = 1; di <= 50; ++di) {
        const double f = fi * 0.1, g = gi * 0.1, d = di * 0.1;
        // Stay clear of the decision boundaries.
        if (std::abs(g - f) <= 1e-6 || std::abs(d - g) <= 1e-6 ||
            std::abs(f * (d - g) - d * g) <= 1e-6) {
          ++skipped;
          continue;
        }
        const StabilityReport rep = full_report(flow_2x2(f, g, d), cfg);
        if (rep.verdict == Verdict::Marginal) {
          ++skipped;
          continue;
        }
        ++tested;
        const bool expected = d > g && f > d * g / (d - g);
        if ((rep.verdict == Verdict::Hurwitz) != expected) ++disagreements;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  c.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
  c.require(tested >= 100000, "too few grid points tested");
  c.require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s exceeds 10s");
  c.detail << tested << " points, " << skipped << " near-boundary skipped, 0 disagreements, "
           << elapsed << "s";
  return c.ok;
}

// --- criterion 5: determinant identity --------------------------------------

bool criterion_determinant_identity(Check& c) {
  Rng rng(20240501);
  std::size_t prefix_checks = 0;
  for (int s = 0; s < 1000 && c.ok; ++s) {
    const std::size_t n = 2 + rng.index(6);
    const SquareMatrix m = random_irreducible_metzler(rng, n, 0.4, rng.chance(0.5));
    const MetzlerMatrix mm = validate_metzler(m);
    const WeightedDigraph g = WeightedDigraph::from_matrix(m);
    const auto cycles = enumerate_simple_cycles(g, 100000);
    const EdgeGainTable gains = edge_sum_gains(mm, kTol);
    const TotalGainVector totals = total_cycle_gains(mm, cycles, gains, 1000000);
    for (std::size_t i = 1; i <= n; ++i) {
      const double det = determinant_lu(leading_submatrix(m, i));
      double diag = 1.0;
      for (std::size_t jj = 0; jj < i; ++jj) diag *= m(jj, jj);
      const double rhs = (1.0 - totals.gamma_prefix[i - 1]) * diag;
      c.require(std::abs(det - rhs) <= 1e-9 * (1.0 + std::abs(det)),
                "identity violated at sample " + std::to_string(s));
      ++prefix_checks;
    }
    const double by_factors = determinant_by_factors(m, g, 100000);
    const double by_lu = determinant_lu(m);
    c.require(std::abs(by_factors - by_lu) <= 1e-9 * (1.0 + std::abs(by_lu)),
              "determinant routes disagree at sample " + std::to_string(s));
  }
  c.detail << "1000 samples, " << prefix_checks << " prefix identities";
  return c.ok;
}

// --- criterion 6: verdict agreement -----------------------------------------

bool criterion_agreement(Check& c) {
  const auto t0 = Clock::now();
  Rng rng(20240502);
  AnalysisConfig cfg;
  std::size_t decisive = 0, marginal = 0;
  for (int s = 0; s < 1000; ++s) {
    const std::size_t n = 2 + rng.index(7);
    const SquareMatrix m = random_metzler(rng, n, 0.5, rng.chance(0.5));
    const StabilityReport rep = full_report(m, cfg);
    if (!rep.oracle->converged || std::abs(rep.oracle->abscissa) < 1e-7 ||
        rep.verdict == Verdict::Marginal) {
      ++marginal;
      continue;
    }
    ++decisive;
    const Verdict expect =
        rep.oracle->abscissa < 0.0 ? Verdict::Hurwitz : Verdict::NotHurwitz;
    const std::string tag = " at sample " + std::to_string(s);
    c.require(rep.verdict == expect, "overall verdict" + tag);
    c.require(rep.minors.verdict == expect, "minors" + tag);
    c.require(rep.schur.verdict == expect, "schur" + tag);
    c.require(rep.condensation.verdict == expect, "condensation" + tag);
    c.require(rep.max_conditions.verdict == expect, "max-gain" + tag);
    if (rep.sum_conditions.applicable) {
      c.require(rep.sum_conditions.exact == expect, "sum-exact" + tag);
      if (expect == Verdict::Hurwitz)
        c.require(rep.sum_conditions.necessary == Tristate::Pass, "necessity" + tag);
      if (rep.sum_conditions.sufficient == Tristate::Pass)
        c.require(expect == Verdict::Hurwitz, "sufficiency" + tag);
    }
    if (!c.ok) break;
  }
  const double elapsed = seconds_since(t0);
  c.require(decisive >= 800, "too many marginal samples: " + std::to_string(marginal));
  c.require(elapsed < 60.0, "runtime " + std::to_string(elapsed) + "s exceeds 60s");
  c.detail << decisive << " decisive samples agree, " << marginal << " near-marginal skipped, "
           << elapsed << "s";
  return c.ok;
}

// --- criterion 7: expansion suite -------------------------------------------

bool criterion_expansion(Check& c) {
  Rng rng(20240503);
  AnalysisConfig cfg;
  cfg.with_oracle = false;
  std::size_t accepted = 0;
  std::size_t attempts = 0;
  while (accepted < 200 && c.ok) {
    if (++attempts > 2000) {
      c.require(false, "sampler failed to produce 200 decisive cases");
      break;
    }
    const std::size_t n = 2 + rng.index(4);
    const SquareMatrix m = random_metzler(rng, n, 0.5, rng.chance(0.5));
    const MetzlerMatrix mm = validate_metzler(m);
    const StabilityReport before = full_report(m, cfg);
    if (before.verdict == Verdict::Marginal) continue;

    const ExpandedMatrix e = expand(mm);
    const std::string tag = " at sample " + std::to_string(accepted);
    c.require(contract_check(e), "contract check" + tag);
    const StabilityReport after = full_report(e.expanded, cfg);
    c.require(after.verdict == before.verdict, "verdict changed" + tag);

    bool diag_ok = true;
    for (std::size_t i = 0; i < n; ++i)
      if (!(m(i, i) < -kTol)) diag_ok = false;
    if (diag_ok) {
      const auto gains_of = [](const SquareMatrix& q) {
        const MetzlerMatrix qq = validate_metzler(q);
        const auto cycles = enumerate_simple_cycles(WeightedDigraph::from_matrix(q), 100000);
        const EdgeGainTable t = edge_sum_gains(qq, kTol);
        std::vector<double> out;
        for (const auto& cy : cycles) out.push_back(cycle_sum_gain(cy, t));
        std::sort(out.begin(), out.end());
        return out;
      };
      const auto ga = gains_of(m), gb = gains_of(e.expanded);
      c.require(ga.size() == gb.size(), "cycle count changed" + tag);
      for (std::size_t k = 0; k < std::min(ga.size(), gb.size()); ++k)
        c.require(std::abs(ga[k] - gb[k]) <= 1e-12, "gain multiset" + tag);
    }
    ++accepted;
  }
  c.detail << accepted << " samples, verdicts preserved, gains within 1e-12";
  return c.ok;
}

// --- criterion 8: cactus suite ----------------------------------------------

bool criterion_cactus(Check& c) {
  Rng rng(20240504);
  for (int s = 0; s < 200 && c.ok; ++s) {
    const CactusSample sample = random_cactus_metzler(rng, true);
    const MetzlerMatrix mm = validate_metzler(sample.matrix);
    const auto cycles =
        enumerate_simple_cycles(WeightedDigraph::from_matrix(sample.matrix), 100000);
    const CactusResult r = cactus_certificate(mm, cycles, feasibility_witness(mm, kTol), kTol);
    const std::string tag = " at Hurwitz sample " + std::to_string(s);
    c.require(r.status == CactusStatus::Certificate, "certificate refused" + tag);
    if (r.status != CactusStatus::Certificate) continue;

    const EdgeGainTable gains = edge_sum_gains(mm, kTol);
    std::vector<double> node_sum(sample.matrix.size(), 0.0);
    std::vector<bool> on_cycle(sample.matrix.size(), false);
    for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
      double prod = 1.0;
      for (std::size_t t = 0; t < cycles[ci].nodes.size(); ++t) {
        prod *= r.certificate->theta[ci][t];
        node_sum[cycles[ci].nodes[t]] += r.certificate->theta[ci][t];
        on_cycle[cycles[ci].nodes[t]] = true;
      }
      const double gamma_c = cycle_sum_gain(cycles[ci], gains);
      c.require(prod > gamma_c * (1.0 + kTol), "theta product margin" + tag);
    }
    for (std::size_t v = 0; v < sample.matrix.size(); ++v)
      if (on_cycle[v])
        c.require(std::abs(node_sum[v] - 1.0) <= 1e-12, "theta sum at node" + tag);
  }
  for (int s = 0; s < 200 && c.ok; ++s) {
    const CactusSample sample = random_cactus_metzler(rng, false);
    const MetzlerMatrix mm = validate_metzler(sample.matrix);
    const auto cycles =
        enumerate_simple_cycles(WeightedDigraph::from_matrix(sample.matrix), 100000);
    const CactusResult r = cactus_certificate(mm, cycles, feasibility_witness(mm, kTol), kTol);
    c.require(r.status == CactusStatus::Infeasible,
              "expected Infeasible at non-Hurwitz sample " + std::to_string(s));
  }
  c.detail << "200 Hurwitz certificates validated, 200 non-Hurwitz refused";
  return c.ok;
}

// --- criterion 9: nonlinear certification + simulation -----------------------

bool criterion_nonlinear(Check& c) {
  Rng rng(20240505);
  AnalysisConfig cfg;
  std::size_t runs = 0;
  for (int s = 0; s < 100 && c.ok; ++s) {
    MonotoneNetworkSpec spec = random_network_spec(rng, 2 + rng.index(5), 0.5);
    for (int tries = 0;; ++tries) {
      if (tries >= 80) break;
      const GasCertificate cert = certify_sum(spec, ratio_bounds(spec), cfg);
      double worst = 0.0;
      for (double g : cert.total_gains) worst = std::max(worst, g);
      if (cert.certified && worst <= 0.9) break;
      for (double& b : spec.coupling) b *= 0.7;
    }
    const JacobianRatioBounds bounds = ratio_bounds(spec);
    const GasCertificate sum_cert = certify_sum(spec, bounds, cfg);
    const std::string tag = " at spec " + std::to_string(s);
    c.require(sum_cert.certified, "sum certification failed" + tag);
    c.require(certify_max(spec, bounds, cfg).certified, "max certification failed" + tag);
    if (!c.ok) break;

    // Dominating linear system: row-scale the comparison matrix by the decay
    // rates; its abscissa fixes the horizon.
    SquareMatrix dominating(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i)
      for (std::size_t j = 0; j < spec.n; ++j)
        dominating(i, j) = spec.decay[i] * sum_cert.comparison(i, j);
    const double alpha =
        spectral_abscissa_oracle(validate_metzler(dominating), kTol).abscissa;
    c.require(alpha < 0.0, "dominating abscissa not negative" + tag);
    if (!c.ok) break;

    for (int run = 0; run < 10; ++run) {
      std::vector<double> x0(spec.n);
      for (auto& v : x0) v = rng.uniform(0.0, 2.0);
      const double x0n = std::max(1.0, inf_norm(x0));
      const double horizon =
          std::min(2000.0, (std::log(x0n * 1000.0 * spec.n) - std::log(1e-5 * x0n)) / -alpha);
      const double step = std::max(1e-3, horizon / 10000.0);
      const Trajectory traj = integrate(spec, x0, horizon, step);
      const double final_norm = inf_norm(traj.states.back());
      c.require(final_norm <= 1e-5 * x0n,
                "final norm " + std::to_string(final_norm) + tag + " run " +
                    std::to_string(run));
      ++runs;
      if (!c.ok) break;
    }
  }
  c.detail << "100 certified specs, " << runs << " trajectories converged";
  return c.ok;
}

// --- criterion 10: ISS trajectory bound --------------------------------------

bool criterion_iss_bound(Check& c) {
  Rng rng(20240506);
  for (int s = 0; s < 100 && c.ok; ++s) {
    const std::size_t n = 2 + rng.index(5);
    const MetzlerMatrix m = validate_metzler(random_metzler(rng, n, 0.5, true));
    std::vector<double> x0(n), u0(n), u1(n);
    for (auto& v : x0) v = rng.uniform(0.0, 2.0);
    for (auto& v : u0) v = rng.uniform(0.0, 1.0);
    for (auto& v : u1) v = rng.uniform(0.0, 1.0);
    const Trajectory traj = integrate(
        m, x0, InputSignal::piecewise({rng.uniform(1.0, 4.0)}, {u0, u1}), 8.0, 0.01);
    const IssBoundCheck check = check_sum_iss_bound(traj, m);
    c.require(check.all_pass, "bound violated at sample " + std::to_string(s));
  }
  c.detail << "100 systems, bound held at every grid point";
  return c.ok;
}

struct Criterion {
  int id;
  const char* label;
  std::function<bool(Check&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "6x6 cycle structure and disjoint cycle sets", criterion_cycles_6x6},
      {2, "3x3 insufficiency example", criterion_3x3},
      {3, "4x4 non-necessity example", criterion_4x4},
      {4, "2x2 flow-system parameter sweep", criterion_flow_sweep},
      {5, "determinant / total-cycle-gain identity", criterion_determinant_identity},
      {6, "verdict agreement across all tests", criterion_agreement},
      {7, "graph expansion preserves verdicts and gains", criterion_expansion},
      {8, "cactus certificates", criterion_cactus},
      {9, "nonlinear certification and convergence", criterion_nonlinear},
      {10, "ISS trajectory bound", criterion_iss_bound},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!selected.empty() && !selected.count(criterion.id)) continue;
    Check check;
    bool ok = false;
    try {
      ok = criterion.fn(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.label, check.detail.str().c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
