#include <json.hpp>

#include "stabcert/io.hpp"

namespace stabcert {

namespace {

using Json = nlohmann::ordered_json;

Json one_based(const std::vector<std::size_t>& v) {
  Json arr = Json::array();
  for (std::size_t x : v) arr.push_back(x + 1);
  return arr;
}

Json cycle_list(const std::vector<SimpleCycle>& cycles) {
  Json arr = Json::array();
  for (const auto& c : cycles) arr.push_back(one_based(c.nodes));
  return arr;
}

Json dump_or_null(const std::optional<std::vector<double>>& v) {
  if (!v) return nullptr;
  return Json(*v);
}

Json matrix_rows(const SquareMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json gain_entries(const EdgeGainTable& t, const std::vector<double>& table) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = 0; j < t.n; ++j)
      if (table[i * t.n + j] != 0.0)
        arr.push_back(Json{{"i", i + 1}, {"j", j + 1}, {"value", table[i * t.n + j]}});
  return arr;
}

std::string finish(const Json& j, bool pretty) { return j.dump(pretty ? 2 : -1) + "\n"; }

}  // namespace

std::string report_to_json(const StabilityReport& rep, bool pretty) {
  Json j;
  j["n"] = rep.n;
  j["tolerance"] = rep.tolerance;
  j["verdict"] = to_string(rep.verdict);
  j["consistent"] = rep.consistent;
  j["cycles"] = cycle_list(rep.cycles);

  j["minors"] = Json{{"values", rep.minors.minors}, {"verdict", to_string(rep.minors.verdict)}};

  Json steps = Json::array();
  for (const auto& s : rep.schur.steps)
    steps.push_back(Json{{"dim", s.dim}, {"diagonal", s.diagonal}});
  j["schur"] = Json{{"steps", std::move(steps)},
                    {"zero_pivot_dim", rep.schur.zero_pivot ? Json(rep.schur.zero_pivot_dim)
                                                            : Json(nullptr)},
                    {"verdict", to_string(rep.schur.verdict)}};

  Json comps = Json::array();
  for (const auto& c : rep.condensation.components)
    comps.push_back(Json{{"nodes", one_based(c)}, {"singleton", c.size() == 1}});
  j["condensation"] =
      Json{{"components", std::move(comps)},
           {"acyclic_fast_path", rep.condensation.acyclic_fast_path},
           {"culprit_component",
            rep.condensation.culprit ? Json(*rep.condensation.culprit + 1) : Json(nullptr)},
           {"verdict", to_string(rep.condensation.verdict)}};

  {
    Json sc;
    sc["applicable"] = rep.sum_conditions.applicable;
    if (rep.sum_conditions.applicable) {
      sc["cycle_gains"] = rep.sum_conditions.cycle_gains;
      sc["cycle_gain_sum"] = rep.sum_conditions.cycle_gain_sum;
      sc["total_gains"] = rep.sum_conditions.total_gains;
      sc["necessary"] = to_string(rep.sum_conditions.necessary);
      sc["sufficient"] = to_string(rep.sum_conditions.sufficient);
      sc["exact"] = to_string(rep.sum_conditions.exact);
    }
    j["sum_conditions"] = std::move(sc);
  }

  {
    Json w;
    switch (rep.witness.outcome.status) {
      case WitnessStatus::Feasible: w["status"] = "feasible"; break;
      case WitnessStatus::Marginal: w["status"] = "marginal"; break;
      default: w["status"] = "infeasible"; break;
    }
    if (rep.witness.outcome.witness) {
      w["xi"] = rep.witness.outcome.witness->xi;
      w["delta"] = rep.witness.outcome.witness->delta;
    }
    w["eta"] = dump_or_null(rep.witness.eta);
    w["lyapunov_negative_definite"] = rep.witness.lyapunov_negative_definite
                                          ? Json(*rep.witness.lyapunov_negative_definite)
                                          : Json(nullptr);
    w["diagnostic"] = rep.witness.outcome.diagnostic;
    j["witness"] = std::move(w);
  }

  {
    Json mx;
    mx["verdict"] = to_string(rep.max_conditions.verdict);
    if (rep.max_conditions.table)
      mx["psi"] = gain_entries(*rep.max_conditions.table, rep.max_conditions.table->psi);
    mx["node_sums"] = rep.max_conditions.node_sums;
    mx["cycle_products"] = rep.max_conditions.cycle_products;
    mx["diagnostic"] = rep.max_conditions.diagnostic;
    j["max_conditions"] = std::move(mx);
  }

  {
    Json c;
    switch (rep.cactus.status) {
      case CactusStatus::Certificate: c["status"] = "certificate"; break;
      case CactusStatus::NotApplicable: c["status"] = "not_applicable"; break;
      default: c["status"] = "infeasible"; break;
    }
    if (rep.cactus.overlapping_pair)
      c["overlapping_pair"] = Json::array({rep.cactus.overlapping_pair->first + 1,
                                           rep.cactus.overlapping_pair->second + 1});
    else
      c["overlapping_pair"] = nullptr;
    if (rep.cactus.certificate) {
      Json theta = Json::array();
      for (std::size_t ci = 0; ci < rep.cactus.certificate->theta.size(); ++ci)
        theta.push_back(Json{{"cycle", one_based(rep.cycles[ci].nodes)},
                             {"theta", rep.cactus.certificate->theta[ci]}});
      c["theta"] = std::move(theta);
    }
    c["diagnostic"] = rep.cactus.diagnostic;
    j["cactus"] = std::move(c);
  }

  if (rep.oracle) {
    j["oracle"] = Json{{"abscissa", rep.oracle->abscissa},
                       {"converged", rep.oracle->converged},
                       {"iterations", rep.oracle->iterations},
                       {"verdict", to_string(rep.oracle->verdict)}};
  } else {
    j["oracle"] = nullptr;
  }
  return finish(j, pretty);
}

std::string cycle_analysis_to_json(const SquareMatrix& m, const AnalysisConfig& cfg, bool pretty) {
  cfg.validate();
  const MetzlerMatrix mm = validate_metzler(m);
  const WeightedDigraph g = WeightedDigraph::from_matrix(m);
  const auto cycles = enumerate_simple_cycles(g, cfg.cycle_cap);
  const auto [cycle_graph, complement] = build_cycle_graphs(cycles, m.size());
  const DisjointCycleSets sets = disjoint_cycle_sets(cycles, m.size(), cfg.family_cap);

  Json j;
  j["n"] = m.size();
  j["cycles"] = cycle_list(cycles);

  bool diagonals_negative = true;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!(m(i, i) < -cfg.tolerance)) diagonals_negative = false;

  if (diagonals_negative) {
    const EdgeGainTable gains = edge_sum_gains(mm, cfg.tolerance);
    Json cg = Json::array();
    for (const auto& c : cycles) cg.push_back(cycle_sum_gain(c, gains));
    j["edge_gains"] = gain_entries(gains, gains.gamma);
    j["cycle_gains"] = std::move(cg);
    j["total_gains"] = total_cycle_gains(mm, cycles, gains, cfg.family_cap).gamma_prefix;
  } else {
    j["edge_gains"] = nullptr;
    j["cycle_gains"] = nullptr;
    j["total_gains"] = nullptr;
    j["note"] = "gains undefined: some diagonal entry is not negative";
  }

  {
    Json k;
    for (std::size_t l = 0; l < sets.families.size(); ++l) {
      Json level = Json::array();
      for (const auto& family : sets.families[l]) level.push_back(one_based(family));
      k["K" + std::to_string(l + 1)] = std::move(level);
    }
    j["disjoint_cycle_sets"] = std::move(k);
  }

  const auto graph_edges = [](const CycleGraph& gph) {
    Json arr = Json::array();
    for (const auto& [a, b] : gph.edges) arr.push_back(Json::array({a + 1, b + 1}));
    return arr;
  };
  j["cycle_graph"] = Json{{"vertices", cycles.size()}, {"edges", graph_edges(cycle_graph)}};
  j["complementary_cycle_graph"] =
      Json{{"vertices", cycles.size()}, {"edges", graph_edges(complement)}};
  j["cactus"] = is_cactus(cycles, m.size());
  return finish(j, pretty);
}

std::string certificate_to_json(const GasCertificate& cert, bool pretty) {
  Json j;
  j["method"] = cert.method == GasMethod::Sum ? "sum" : "max";
  j["certified"] = cert.certified;
  j["verdict"] = to_string(cert.verdict);
  j["n"] = cert.comparison.size();
  j["comparison_matrix"] = matrix_rows(cert.comparison);
  Json cycles = Json::array();
  for (const auto& c : cert.cycle_nodes) cycles.push_back(one_based(c));
  j["cycles"] = std::move(cycles);
  if (cert.method == GasMethod::Sum) {
    j["total_gains"] = cert.total_gains;
  } else {
    j["delta"] = cert.delta;
    j["psi_scale"] = cert.psi_scale;
    j["node_sums"] = cert.node_sums;
    j["cycle_products"] = cert.cycle_products;
  }
  j["diagnostic"] = cert.diagnostic;
  return finish(j, pretty);
}

std::string expansion_origin_to_json(const ExpandedMatrix& e, bool pretty) {
  Json added = Json::array();
  for (std::size_t k = 0; k < e.node_origin.size(); ++k)
    added.push_back(Json{{"node", e.original.size() + k + 1},
                         {"edge", Json{{"from", e.node_origin[k].first + 1},
                                       {"to", e.node_origin[k].second + 1}}}});
  Json j;
  j["original_n"] = e.original.size();
  j["expanded_n"] = e.expanded.size();
  j["added_nodes"] = std::move(added);
  return finish(j, pretty);
}

std::string iss_check_to_json(const IssBoundCheck& check, bool pretty) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < check.node_pass.size(); ++i)
    nodes.push_back(Json{{"i", i + 1},
                         {"pass", static_cast<bool>(check.node_pass[i])},
                         {"worst_margin", check.worst_margin[i]}});
  Json j;
  j["all_pass"] = check.all_pass;
  j["slack"] = check.slack;
  j["nodes"] = std::move(nodes);
  return finish(j, pretty);
}

}  // namespace stabcert
