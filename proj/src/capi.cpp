#include "stabcert.h"

#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "stabcert/io.hpp"
#include "stabcert/stability.hpp"

using namespace stabcert;

struct stabcert_config {
  AnalysisConfig cfg;
};

struct stabcert_matrix {
  SquareMatrix m;
  std::string text_cache;
};

struct stabcert_report {
  StabilityReport rep;
  std::string json;
};

struct stabcert_cycle_report {
  std::string json;
};

struct stabcert_expansion {
  ExpandedMatrix exp;
  std::unique_ptr<stabcert_matrix> matrix_handle;
  std::string origin_json;
  bool contract_ok = false;
};

struct stabcert_netspec {
  MonotoneNetworkSpec spec;
};

struct stabcert_certificate {
  GasCertificate cert;
  std::string json;
};

struct stabcert_trajectory {
  Trajectory traj;
  std::string csv_cache;
  std::string iss_cache;
};

namespace {

thread_local std::string g_last_error;

stabcert_status status_from(const Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidMatrix:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::MissingEdge:
    case ErrorCode::NonNegativeDiagonal:
    case ErrorCode::InvalidWitness: return STABCERT_ERR_INVALID_ARGUMENT;
    case ErrorCode::NotMetzler: return STABCERT_ERR_NOT_METZLER;
    case ErrorCode::ZeroPivot:
    case ErrorCode::SingularMatrix: return STABCERT_ERR_SINGULAR;
    case ErrorCode::TooManyCycles: return STABCERT_ERR_TOO_MANY_CYCLES;
    case ErrorCode::CombinatorialBlowup: return STABCERT_ERR_COMBINATORIAL_BLOWUP;
    case ErrorCode::NoConvergence: return STABCERT_ERR_NO_CONVERGENCE;
    case ErrorCode::StepRejected: return STABCERT_ERR_STEP_REJECTED;
    case ErrorCode::ParseError: return STABCERT_ERR_PARSE;
    case ErrorCode::IoError: return STABCERT_ERR_IO;
    default: return STABCERT_ERR_INTERNAL;
  }
}

template <typename F>
stabcert_status guarded(F&& f) {
  try {
    f();
    return STABCERT_OK;
  } catch (const Error& e) {
    return status_from(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STABCERT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return STABCERT_ERR_INTERNAL;
  }
}

stabcert_status require(bool ok, const char* message) {
  if (ok) return STABCERT_OK;
  g_last_error = message;
  return STABCERT_ERR_INVALID_ARGUMENT;
}

AnalysisConfig config_or_default(const stabcert_config* cfg) {
  return cfg ? cfg->cfg : AnalysisConfig{};
}

}  // namespace

extern "C" {

const char* stabcert_version(void) { return "0.1.0"; }

const char* stabcert_last_error(void) { return g_last_error.c_str(); }

stabcert_config* stabcert_config_new(void) { return new stabcert_config{}; }

void stabcert_config_free(stabcert_config* cfg) { delete cfg; }

stabcert_status stabcert_config_set_tolerance(stabcert_config* cfg, double tolerance) {
  if (auto s = require(cfg != nullptr, "null config")) return s;
  if (!(tolerance > 0.0) || tolerance >= 1e-3)
    return require(false, "tolerance must lie in (0, 1e-3)");
  cfg->cfg.tolerance = tolerance;
  return STABCERT_OK;
}

stabcert_status stabcert_config_set_cycle_cap(stabcert_config* cfg, size_t cap) {
  if (auto s = require(cfg != nullptr, "null config")) return s;
  if (cap < 1) return require(false, "cycle cap must be >= 1");
  cfg->cfg.cycle_cap = cap;
  return STABCERT_OK;
}

stabcert_status stabcert_config_set_family_cap(stabcert_config* cfg, size_t cap) {
  if (auto s = require(cfg != nullptr, "null config")) return s;
  if (cap < 1) return require(false, "family cap must be >= 1");
  cfg->cfg.family_cap = cap;
  return STABCERT_OK;
}

stabcert_status stabcert_config_set_seed(stabcert_config* cfg, unsigned long long seed) {
  if (auto s = require(cfg != nullptr, "null config")) return s;
  cfg->cfg.seed = seed;
  return STABCERT_OK;
}

stabcert_status stabcert_matrix_from_data(size_t n, const double* rowmajor,
                                          stabcert_matrix** out) {
  if (auto s = require(rowmajor && out, "null argument")) return s;
  return guarded([&] {
    std::vector<double> entries(rowmajor, rowmajor + n * n);
    *out = new stabcert_matrix{SquareMatrix(n, std::move(entries)), {}};
  });
}

stabcert_status stabcert_matrix_parse(const char* text, stabcert_matrix** out) {
  if (auto s = require(text && out, "null argument")) return s;
  return guarded([&] { *out = new stabcert_matrix{parse_matrix(text), {}}; });
}

stabcert_status stabcert_matrix_load(const char* path, stabcert_matrix** out) {
  if (auto s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new stabcert_matrix{load_matrix_file(path), {}}; });
}

void stabcert_matrix_free(stabcert_matrix* m) { delete m; }

size_t stabcert_matrix_dim(const stabcert_matrix* m) { return m ? m->m.size() : 0; }

stabcert_status stabcert_matrix_get(const stabcert_matrix* m, size_t i, size_t j, double* out) {
  if (auto s = require(m && out, "null argument")) return s;
  if (i >= m->m.size() || j >= m->m.size()) return require(false, "index out of range");
  *out = m->m(i, j);
  return STABCERT_OK;
}

const char* stabcert_matrix_text(stabcert_matrix* m) {
  if (!m) return nullptr;
  if (m->text_cache.empty()) m->text_cache = format_matrix_text(m->m);
  return m->text_cache.c_str();
}

stabcert_status stabcert_analyze(const stabcert_matrix* m, const stabcert_config* cfg,
                                 stabcert_report** out) {
  if (auto s = require(m && out, "null argument")) return s;
  return guarded([&] {
    auto rep = std::make_unique<stabcert_report>();
    rep->rep = full_report(m->m, config_or_default(cfg));
    rep->json = report_to_json(rep->rep);
    *out = rep.release();
  });
}

stabcert_verdict stabcert_report_verdict(const stabcert_report* rep) {
  if (!rep) return STABCERT_MARGINAL;
  switch (rep->rep.verdict) {
    case Verdict::Hurwitz: return STABCERT_HURWITZ;
    case Verdict::NotHurwitz: return STABCERT_NOT_HURWITZ;
    default: return STABCERT_MARGINAL;
  }
}

int stabcert_report_consistent(const stabcert_report* rep) {
  return rep && rep->rep.consistent ? 1 : 0;
}

const char* stabcert_report_json(const stabcert_report* rep) {
  return rep ? rep->json.c_str() : nullptr;
}

void stabcert_report_free(stabcert_report* rep) { delete rep; }

stabcert_status stabcert_cycles(const stabcert_matrix* m, const stabcert_config* cfg,
                                stabcert_cycle_report** out) {
  if (auto s = require(m && out, "null argument")) return s;
  return guarded([&] {
    *out = new stabcert_cycle_report{cycle_analysis_to_json(m->m, config_or_default(cfg))};
  });
}

const char* stabcert_cycle_report_json(const stabcert_cycle_report* rep) {
  return rep ? rep->json.c_str() : nullptr;
}

void stabcert_cycle_report_free(stabcert_cycle_report* rep) { delete rep; }

stabcert_status stabcert_expand(const stabcert_matrix* m, stabcert_expansion** out) {
  if (auto s = require(m && out, "null argument")) return s;
  return guarded([&] {
    ExpandedMatrix exp = expand(validate_metzler(m->m));
    auto e = std::make_unique<stabcert_expansion>(
        stabcert_expansion{std::move(exp), nullptr, {}, false});
    e->matrix_handle = std::make_unique<stabcert_matrix>(stabcert_matrix{e->exp.expanded, {}});
    e->origin_json = expansion_origin_to_json(e->exp);
    e->contract_ok = contract_check(e->exp);
    *out = e.release();
  });
}

stabcert_matrix* stabcert_expansion_matrix(const stabcert_expansion* e) {
  return e ? e->matrix_handle.get() : nullptr;
}

const char* stabcert_expansion_origin_json(const stabcert_expansion* e) {
  return e ? e->origin_json.c_str() : nullptr;
}

int stabcert_expansion_contract_check(const stabcert_expansion* e) {
  return e && e->contract_ok ? 1 : 0;
}

void stabcert_expansion_free(stabcert_expansion* e) { delete e; }

stabcert_status stabcert_netspec_parse(const char* json_text, stabcert_netspec** out) {
  if (auto s = require(json_text && out, "null argument")) return s;
  return guarded([&] { *out = new stabcert_netspec{parse_network_spec(json_text)}; });
}

stabcert_status stabcert_netspec_load(const char* path, stabcert_netspec** out) {
  if (auto s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new stabcert_netspec{load_network_spec_file(path)}; });
}

size_t stabcert_netspec_dim(const stabcert_netspec* spec) { return spec ? spec->spec.n : 0; }

void stabcert_netspec_free(stabcert_netspec* spec) { delete spec; }

stabcert_status stabcert_certify(const stabcert_netspec* spec, int method,
                                 const stabcert_config* cfg, stabcert_certificate** out) {
  if (auto s = require(spec && out, "null argument")) return s;
  if (method != STABCERT_METHOD_SUM && method != STABCERT_METHOD_MAX)
    return require(false, "method must be STABCERT_METHOD_SUM or STABCERT_METHOD_MAX");
  return guarded([&] {
    const JacobianRatioBounds bounds = ratio_bounds(spec->spec);
    const AnalysisConfig acfg = config_or_default(cfg);
    GasCertificate cert = method == STABCERT_METHOD_SUM ? certify_sum(spec->spec, bounds, acfg)
                                                        : certify_max(spec->spec, bounds, acfg);
    std::string json = certificate_to_json(cert);
    *out = new stabcert_certificate{std::move(cert), std::move(json)};
  });
}

int stabcert_certificate_valid(const stabcert_certificate* cert) {
  return cert && cert->cert.certified ? 1 : 0;
}

const char* stabcert_certificate_json(const stabcert_certificate* cert) {
  return cert ? cert->json.c_str() : nullptr;
}

void stabcert_certificate_free(stabcert_certificate* cert) { delete cert; }

stabcert_status stabcert_simulate_linear(const stabcert_matrix* m, const double* x0, size_t n,
                                         const double* u_const, double horizon, double step,
                                         stabcert_trajectory** out) {
  if (auto s = require(m && x0 && out, "null argument")) return s;
  if (n != m->m.size()) return require(false, "state dimension mismatch");
  return guarded([&] {
    const MetzlerMatrix mm = validate_metzler(m->m);
    const InputSignal u = u_const
                              ? InputSignal::constant(std::vector<double>(u_const, u_const + n))
                              : InputSignal::zero(n);
    Trajectory traj = integrate(mm, std::span<const double>(x0, n), u, horizon, step);
    *out = new stabcert_trajectory{std::move(traj), {}, {}};
  });
}

stabcert_status stabcert_simulate_network(const stabcert_netspec* spec, const double* x0,
                                          size_t n, double horizon, double step,
                                          stabcert_trajectory** out) {
  if (auto s = require(spec && x0 && out, "null argument")) return s;
  if (n != spec->spec.n) return require(false, "state dimension mismatch");
  return guarded([&] {
    Trajectory traj = integrate(spec->spec, std::span<const double>(x0, n), horizon, step);
    *out = new stabcert_trajectory{std::move(traj), {}, {}};
  });
}

const char* stabcert_trajectory_csv(stabcert_trajectory* traj) {
  if (!traj) return nullptr;
  if (traj->csv_cache.empty()) traj->csv_cache = trajectory_csv(traj->traj);
  return traj->csv_cache.c_str();
}

const char* stabcert_trajectory_iss_summary(stabcert_trajectory* traj,
                                            const stabcert_matrix* m) {
  if (!traj || !m) {
    g_last_error = "null argument";
    return nullptr;
  }
  const stabcert_status s = guarded([&] {
    const IssBoundCheck check = check_sum_iss_bound(traj->traj, validate_metzler(m->m));
    traj->iss_cache = iss_check_to_json(check);
  });
  return s == STABCERT_OK ? traj->iss_cache.c_str() : nullptr;
}

void stabcert_trajectory_free(stabcert_trajectory* traj) { delete traj; }

}  // extern "C"
