#include "stabcert/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stabcert {

namespace {

struct TokenCursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t col = 1;

  void skip_space() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' ||
                                 text[pos] == '\n')) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  bool at_end() {
    skip_space();
    return pos >= text.size();
  }

  double next_number(const char* what) {
    skip_space();
    if (pos >= text.size()) throw FileParseError(std::string("expected ") + what, line, col);
    const std::size_t tok_line = line, tok_col = col;
    double value = 0.0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{})
      throw FileParseError(std::string("expected ") + what, tok_line, tok_col);
    const auto consumed = static_cast<std::size_t>(ptr - begin);
    pos += consumed;
    col += consumed;
    return value;
  }
};

nlohmann::json parse_json_or_throw(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw FileParseError("malformed JSON", 0, 0);
  return j;
}

}  // namespace

SquareMatrix parse_matrix_text(std::string_view text) {
  TokenCursor cur{text};
  const double nval = cur.next_number("matrix dimension");
  if (nval < 1.0 || nval != std::floor(nval) || nval > 1e6)
    throw FileParseError("matrix dimension must be a positive integer", 1, 1);
  const auto n = static_cast<std::size_t>(nval);
  std::vector<double> entries;
  entries.reserve(n * n);
  for (std::size_t k = 0; k < n * n; ++k) entries.push_back(cur.next_number("matrix entry"));
  if (!cur.at_end())
    throw FileParseError("trailing data after matrix entries", cur.line, cur.col);
  return SquareMatrix(n, std::move(entries));
}

SquareMatrix parse_matrix_json(std::string_view text) {
  const nlohmann::json j = parse_json_or_throw(text);
  if (!j.is_object() || !j.contains("n") || !j.contains("rows"))
    throw FileParseError("matrix JSON needs fields \"n\" and \"rows\"", 0, 0);
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    throw FileParseError("field \"n\" must be a positive integer", 0, 0);
  const auto n = j["n"].get<std::size_t>();
  const auto& rows = j["rows"];
  if (!rows.is_array() || rows.size() != n)
    throw FileParseError("field \"rows\" must hold exactly n rows", 0, 0);
  std::vector<double> entries;
  entries.reserve(n * n);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n)
      throw FileParseError("every row must hold exactly n numbers", 0, 0);
    for (const auto& v : row) {
      if (!v.is_number()) throw FileParseError("matrix entries must be numbers", 0, 0);
      entries.push_back(v.get<double>());
    }
  }
  return SquareMatrix(n, std::move(entries));
}

SquareMatrix parse_matrix(std::string_view text) {
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') continue;
    if (ch == '{') return parse_matrix_json(text);
    break;
  }
  return parse_matrix_text(text);
}

SquareMatrix load_matrix_file(const std::string& path) { return parse_matrix(read_file(path)); }

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_matrix_text(const SquareMatrix& m) {
  std::ostringstream os;
  os << m.size() << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) os << ' ';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
  return os.str();
}

MonotoneNetworkSpec parse_network_spec(std::string_view text) {
  const nlohmann::json j = parse_json_or_throw(text);
  if (!j.is_object() || !j.contains("n") || !j.contains("decay") || !j.contains("coupling"))
    throw FileParseError("network spec needs \"n\", \"decay\" and \"coupling\"", 0, 0);
  MonotoneNetworkSpec spec;
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    throw FileParseError("field \"n\" must be a positive integer", 0, 0);
  spec.n = j["n"].get<std::size_t>();
  const auto& decay = j["decay"];
  if (!decay.is_array() || decay.size() != spec.n)
    throw FileParseError("field \"decay\" must hold n numbers", 0, 0);
  for (const auto& v : decay) spec.decay.push_back(v.get<double>());
  const auto& coupling = j["coupling"];
  if (!coupling.is_array() || coupling.size() != spec.n)
    throw FileParseError("field \"coupling\" must hold n rows", 0, 0);
  for (const auto& row : coupling) {
    if (!row.is_array() || row.size() != spec.n)
      throw FileParseError("every coupling row must hold n numbers", 0, 0);
    for (const auto& v : row) spec.coupling.push_back(v.get<double>());
  }
  if (j.contains("sigma")) {
    const std::string s = j["sigma"].get<std::string>();
    if (s == "tanh")
      spec.sigma = Sigma::Tanh;
    else if (s == "rational")
      spec.sigma = Sigma::Rational;
    else
      throw FileParseError("field \"sigma\" must be \"tanh\" or \"rational\"", 0, 0);
  }
  spec.validate();
  return spec;
}

MonotoneNetworkSpec load_network_spec_file(const std::string& path) {
  return parse_network_spec(read_file(path));
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  os << 't';
  for (std::size_t i = 1; i <= n; ++i) os << ",x" << i;
  os << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", traj.times[k]);
    os << buf;
    for (double v : traj.states[k]) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

}  // namespace stabcert
