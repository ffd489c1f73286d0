#ifndef STABCERT_IO_HPP
#define STABCERT_IO_HPP

#include <string>
#include <string_view>

#include "stabcert/expansion.hpp"
#include "stabcert/matrix.hpp"
#include "stabcert/nonlinear.hpp"
#include "stabcert/simulate.hpp"
#include "stabcert/stability.hpp"

namespace stabcert {

/// Text matrix format: first line n, then n lines of n whitespace-separated
/// numbers. Rejects missing/extra tokens with 1-based line/column positions.
SquareMatrix parse_matrix_text(std::string_view text);

/// JSON matrix format: {"n": int, "rows": [[...], ...]}; rows must be square.
SquareMatrix parse_matrix_json(std::string_view text);

/// Sniffs the format: content starting with '{' parses as JSON.
SquareMatrix parse_matrix(std::string_view text);

SquareMatrix load_matrix_file(const std::string& path);

std::string format_matrix_text(const SquareMatrix& m);

/// Network spec: {"n": int, "decay": [...], "coupling": [[...]],
/// "sigma": "tanh" | "rational"}.
MonotoneNetworkSpec parse_network_spec(std::string_view text);
MonotoneNetworkSpec load_network_spec_file(const std::string& path);

std::string trajectory_csv(const Trajectory& traj);

// Canonical JSON renderings; all indices 1-based, field order fixed.
std::string report_to_json(const StabilityReport& rep, bool pretty = true);
std::string cycle_analysis_to_json(const SquareMatrix& m, const AnalysisConfig& cfg,
                                   bool pretty = true);
std::string certificate_to_json(const GasCertificate& cert, bool pretty = true);
std::string expansion_origin_to_json(const ExpandedMatrix& e, bool pretty = true);
std::string iss_check_to_json(const IssBoundCheck& check, bool pretty = true);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace stabcert

#endif
