// Command-line front end. Everything goes through the C API of the shared
// library; this file only handles arguments, formats and exit codes.
//
// Exit codes: analyze 0 = Hurwitz, 1 = NotHurwitz, 2 = Marginal, 3 = error.
// certify 0 = certified, 1 = not certified, 3 = error. Other subcommands
// return 0 on success and 3 on any input or analysis error.

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stabcert.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitError = 3;

struct ConfigFlags {
  double tol = 1e-9;
  std::size_t cycle_cap = 100000;
  std::size_t family_cap = 1000000;
  std::string format = "json";
  unsigned long long seed = 0;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--tol", f.tol, "strictness margin for all decisions")
      ->envname("STABCERT_TOL")
      ->capture_default_str();
  cmd->add_option("--cycle-cap", f.cycle_cap, "abort when the simple-cycle count exceeds this")
      ->envname("STABCERT_CYCLE_CAP")
      ->capture_default_str();
  cmd->add_option("--family-cap", f.family_cap,
                  "abort when the disjoint-cycle-family count exceeds this")
      ->envname("STABCERT_FAMILY_CAP")
      ->capture_default_str();
  cmd->add_option("--format", f.format, "output format: json or text")
      ->envname("STABCERT_FORMAT")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "seed recorded in the analysis configuration")
      ->envname("STABCERT_SEED")
      ->capture_default_str();
}

using ConfigPtr = std::unique_ptr<stabcert_config, decltype(&stabcert_config_free)>;

ConfigPtr make_config(const ConfigFlags& f) {
  ConfigPtr cfg(stabcert_config_new(), stabcert_config_free);
  if (stabcert_config_set_tolerance(cfg.get(), f.tol) ||
      stabcert_config_set_cycle_cap(cfg.get(), f.cycle_cap) ||
      stabcert_config_set_family_cap(cfg.get(), f.family_cap) ||
      stabcert_config_set_seed(cfg.get(), f.seed))
    throw std::runtime_error(stabcert_last_error());
  return cfg;
}

[[noreturn]] void fail(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(kExitError);
}

stabcert_matrix* load_matrix_or_fail(const std::string& path) {
  stabcert_matrix* m = nullptr;
  if (stabcert_matrix_load(path.c_str(), &m)) fail(stabcert_last_error());
  return m;
}

std::vector<double> parse_csv_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail("cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) fail("empty vector argument");
  return out;
}

// ---- text renderings of the canonical JSON payloads ----------------------

void print_verdict_line(std::ostream& os, const Json& j, const char* label) {
  os << label << ": " << j.value("verdict", std::string("?")) << "\n";
}

void render_report_text(const Json& j, std::ostream& os) {
  os << "matrix: " << j["n"].get<std::size_t>() << "x" << j["n"].get<std::size_t>() << "\n";
  os << "verdict: " << j["verdict"].get<std::string>() << "\n";
  os << "consistent: " << (j["consistent"].get<bool>() ? "yes" : "no") << "\n";
  os << "cycles: " << j["cycles"].size() << "\n";
  os << "minors of -M:";
  for (const auto& v : j["minors"]["values"]) os << " " << v.dump();
  os << "\n";
  print_verdict_line(os, j["minors"], "  minors test");
  print_verdict_line(os, j["schur"], "  Schur test");
  print_verdict_line(os, j["condensation"], "  condensation test");
  if (j["sum_conditions"]["applicable"].get<bool>()) {
    os << "  sum gains: necessary " << j["sum_conditions"]["necessary"].get<std::string>()
       << ", sufficient " << j["sum_conditions"]["sufficient"].get<std::string>() << ", exact "
       << j["sum_conditions"]["exact"].get<std::string>() << "\n";
  } else {
    os << "  sum gains: not applicable (diagonal not negative)\n";
  }
  os << "  witness: " << j["witness"]["status"].get<std::string>() << "\n";
  print_verdict_line(os, j["max_conditions"], "  max-gain test");
  os << "  cactus: " << j["cactus"]["status"].get<std::string>() << "\n";
  if (!j["oracle"].is_null())
    os << "  oracle abscissa: " << j["oracle"]["abscissa"].dump() << " ("
       << j["oracle"]["verdict"].get<std::string>() << ")\n";
}

void render_cycles_text(const Json& j, std::ostream& os) {
  os << "n: " << j["n"].get<std::size_t>() << "\n";
  os << "cycles (" << j["cycles"].size() << "):\n";
  for (std::size_t i = 0; i < j["cycles"].size(); ++i) {
    os << "  c" << i + 1 << " = " << j["cycles"][i].dump();
    if (j["cycle_gains"].is_array()) os << "  gamma = " << j["cycle_gains"][i].dump();
    os << "\n";
  }
  os << "disjoint cycle sets:\n";
  for (const auto& [key, level] : j["disjoint_cycle_sets"].items())
    os << "  " << key << " = " << level.dump() << "\n";
  if (j["total_gains"].is_array()) os << "prefix total gains: " << j["total_gains"].dump() << "\n";
  os << "cactus: " << (j["cactus"].get<bool>() ? "yes" : "no") << "\n";
}

void render_certificate_text(const Json& j, std::ostream& os) {
  os << "method: " << j["method"].get<std::string>() << "\n";
  os << "certified: " << (j["certified"].get<bool>() ? "yes" : "no") << " ("
     << j["verdict"].get<std::string>() << ")\n";
  if (j.contains("total_gains") && j["total_gains"].is_array())
    os << "prefix total gains: " << j["total_gains"].dump() << "\n";
  if (j.contains("node_sums")) {
    os << "delta: " << j["delta"].dump() << ", psi scale: " << j["psi_scale"].dump() << "\n";
    os << "node sums: " << j["node_sums"].dump() << "\n";
    os << "cycle products: " << j["cycle_products"].dump() << "\n";
  }
  const std::string diag = j.value("diagnostic", std::string());
  if (!diag.empty()) os << "note: " << diag << "\n";
}

// ---- subcommands ----------------------------------------------------------

int run_analyze(const std::string& path, const ConfigFlags& flags) {
  ConfigPtr cfg = make_config(flags);
  stabcert_matrix* m = load_matrix_or_fail(path);
  stabcert_report* rep = nullptr;
  if (stabcert_analyze(m, cfg.get(), &rep)) {
    std::string msg = stabcert_last_error();
    stabcert_matrix_free(m);
    fail(msg);
  }
  const std::string json = stabcert_report_json(rep);
  if (flags.format == "json")
    std::cout << json;
  else
    render_report_text(Json::parse(json), std::cout);
  const stabcert_verdict v = stabcert_report_verdict(rep);
  stabcert_report_free(rep);
  stabcert_matrix_free(m);
  switch (v) {
    case STABCERT_HURWITZ: return 0;
    case STABCERT_NOT_HURWITZ: return 1;
    default: return 2;
  }
}

int run_cycles(const std::string& path, const ConfigFlags& flags) {
  ConfigPtr cfg = make_config(flags);
  stabcert_matrix* m = load_matrix_or_fail(path);
  stabcert_cycle_report* rep = nullptr;
  if (stabcert_cycles(m, cfg.get(), &rep)) {
    std::string msg = stabcert_last_error();
    stabcert_matrix_free(m);
    fail(msg);
  }
  const std::string json = stabcert_cycle_report_json(rep);
  if (flags.format == "json")
    std::cout << json;
  else
    render_cycles_text(Json::parse(json), std::cout);
  stabcert_cycle_report_free(rep);
  stabcert_matrix_free(m);
  return 0;
}

int run_expand(const std::string& path, const std::string& out_path,
               const std::string& map_path, const ConfigFlags& flags) {
  stabcert_matrix* m = load_matrix_or_fail(path);
  stabcert_expansion* e = nullptr;
  if (stabcert_expand(m, &e)) {
    std::string msg = stabcert_last_error();
    stabcert_matrix_free(m);
    fail(msg);
  }
  const std::string matrix_text = stabcert_matrix_text(stabcert_expansion_matrix(e));
  const std::string origin_json = stabcert_expansion_origin_json(e);

  const auto write_or_fail = [](const std::string& p, const std::string& content) {
    std::FILE* f = std::fopen(p.c_str(), "wb");
    if (!f) fail("cannot open " + p + " for writing");
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
  };

  if (flags.format == "json" && out_path.empty() && map_path.empty()) {
    Json j;
    j["matrix_text"] = matrix_text;
    j["origin_map"] = Json::parse(origin_json);
    std::cout << j.dump(2) << "\n";
  } else {
    if (out_path.empty())
      std::cout << matrix_text;
    else
      write_or_fail(out_path, matrix_text);
    if (map_path.empty())
      std::cout << origin_json;
    else
      write_or_fail(map_path, origin_json);
  }
  stabcert_expansion_free(e);
  stabcert_matrix_free(m);
  return 0;
}

int run_certify(const std::string& path, const std::string& method, const ConfigFlags& flags) {
  ConfigPtr cfg = make_config(flags);
  stabcert_netspec* spec = nullptr;
  if (stabcert_netspec_load(path.c_str(), &spec)) fail(stabcert_last_error());
  stabcert_certificate* cert = nullptr;
  const int m = method == "sum" ? STABCERT_METHOD_SUM : STABCERT_METHOD_MAX;
  if (stabcert_certify(spec, m, cfg.get(), &cert)) {
    std::string msg = stabcert_last_error();
    stabcert_netspec_free(spec);
    fail(msg);
  }
  const std::string json = stabcert_certificate_json(cert);
  if (flags.format == "json")
    std::cout << json;
  else
    render_certificate_text(Json::parse(json), std::cout);
  const bool ok = stabcert_certificate_valid(cert) == 1;
  stabcert_certificate_free(cert);
  stabcert_netspec_free(spec);
  return ok ? 0 : 1;
}

int run_simulate(const std::string& path, std::string x0_text, std::string input_text,
                 double horizon, double step, const std::string& out_path,
                 const ConfigFlags& flags) {
  // A JSON file with a "decay" field is a network spec, anything else a matrix.
  bool is_network = false;
  {
    std::ifstream probe(path);
    if (!probe) fail("cannot open " + path);
    std::stringstream ss;
    ss << probe.rdbuf();
    const std::string content = ss.str();
    is_network = content.find("\"decay\"") != std::string::npos;
  }

  stabcert_trajectory* traj = nullptr;
  stabcert_matrix* m = nullptr;
  stabcert_netspec* spec = nullptr;
  std::size_t n = 0;
  if (is_network) {
    if (stabcert_netspec_load(path.c_str(), &spec)) fail(stabcert_last_error());
    n = stabcert_netspec_dim(spec);
  } else {
    m = load_matrix_or_fail(path);
    n = stabcert_matrix_dim(m);
  }

  std::vector<double> x0(n, 1.0);
  if (!x0_text.empty()) {
    x0 = parse_csv_vector(x0_text);
    if (x0.size() != n) fail("--x0 needs " + std::to_string(n) + " components");
  }
  std::vector<double> input;
  if (!input_text.empty()) {
    if (is_network) fail("--input applies to linear systems only");
    input = parse_csv_vector(input_text);
    if (input.size() != n) fail("--input needs " + std::to_string(n) + " components");
  }

  stabcert_status status;
  if (is_network)
    status = stabcert_simulate_network(spec, x0.data(), n, horizon, step, &traj);
  else
    status = stabcert_simulate_linear(m, x0.data(), n, input.empty() ? nullptr : input.data(),
                                      horizon, step, &traj);
  if (status) {
    std::string msg = stabcert_last_error();
    stabcert_matrix_free(m);
    stabcert_netspec_free(spec);
    fail(msg);
  }

  const std::string csv = stabcert_trajectory_csv(traj);
  std::string summary;
  if (!is_network) {
    const char* iss = stabcert_trajectory_iss_summary(traj, m);
    if (!iss) fail(stabcert_last_error());
    summary = iss;
  }

  if (!out_path.empty()) {
    std::FILE* f = std::fopen(out_path.c_str(), "wb");
    if (!f) fail("cannot open " + out_path + " for writing");
    std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);
    if (!summary.empty()) {
      if (flags.format == "json") {
        std::cout << summary;
      } else {
        const Json j = Json::parse(summary);
        std::cout << "ISS bound check: " << (j["all_pass"].get<bool>() ? "pass" : "FAIL")
                  << " (slack " << j["slack"].dump() << ")\n";
      }
    }
  } else {
    std::cout << csv;
    if (!summary.empty()) std::cerr << summary;  // keep stdout pure CSV
  }

  stabcert_trajectory_free(traj);
  stabcert_matrix_free(m);
  stabcert_netspec_free(spec);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hurwitz certificates for Metzler matrices and global-stability "
               "certificates for monotone networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(stabcert_version()); });

  ConfigFlags flags;

  std::string matrix_path, spec_path, method = "sum";
  std::string out_path, map_path, x0_text, input_text;
  double horizon = 50.0, step = 1e-3;

  CLI::App* analyze = app.add_subcommand("analyze", "full stability report for a Metzler matrix");
  analyze->add_option("matrix", matrix_path, "matrix file (text or JSON)")->required();
  add_config_flags(analyze, flags);

  CLI::App* cycles = app.add_subcommand("cycles",
                                        "simple cycles, gains, disjoint cycle sets, total gains");
  cycles->add_option("matrix", matrix_path, "matrix file (text or JSON)")->required();
  add_config_flags(cycles, flags);

  CLI::App* expand = app.add_subcommand("expand", "insert a relay node on every non-loop edge");
  expand->add_option("matrix", matrix_path, "matrix file (text or JSON)")->required();
  expand->add_option("--out", out_path, "write the expanded matrix here instead of stdout");
  expand->add_option("--origin-map", map_path, "write the added-node origin map (JSON) here");
  add_config_flags(expand, flags);

  CLI::App* certify = app.add_subcommand("certify",
                                         "global-asymptotic-stability certificate for a "
                                         "monotone network spec");
  certify->add_option("spec", spec_path, "network spec (JSON)")->required();
  certify->add_option("--method", method, "certification route")
      ->check(CLI::IsMember({"sum", "max"}))
      ->capture_default_str();
  add_config_flags(certify, flags);

  CLI::App* simulate = app.add_subcommand("simulate", "fixed-step RK4 integration; CSV output");
  simulate->add_option("system", matrix_path, "matrix file or network spec")->required();
  simulate->add_option("--x0", x0_text, "initial state, comma-separated (default: all ones)");
  simulate->add_option("--input", input_text,
                       "constant nonnegative input, comma-separated (linear systems)");
  simulate->add_option("--horizon", horizon, "integration horizon T")->capture_default_str();
  simulate->add_option("--step", step, "step size h")->capture_default_str();
  simulate->add_option("--out", out_path, "write the CSV here; summary then goes to stdout");
  add_config_flags(simulate, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return run_analyze(matrix_path, flags);
    if (cycles->parsed()) return run_cycles(matrix_path, flags);
    if (expand->parsed()) return run_expand(matrix_path, out_path, map_path, flags);
    if (certify->parsed()) return run_certify(spec_path, method, flags);
    if (simulate->parsed())
      return run_simulate(matrix_path, x0_text, input_text, horizon, step, out_path, flags);
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return kExitError;
}
