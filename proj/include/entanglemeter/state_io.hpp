#pragma once

// JSON state files:
//   {"dims": [2, 2, 2], "kind": "pure",  "data": [[re, im], ...]}          D amplitudes
//   {"dims": [2, 2],    "kind": "mixed", "data": [[[re, im], ...], ...]}   D rows of D entries
// An entry may also be a bare real number.

#include "qstate.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

namespace entanglemeter {

class StateParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using LoadedState = std::variant<PureState, DensityMatrix>;

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline cplx parse_entry(const nlohmann::json& j, const std::string& field, const std::string& source) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw StateParseError(source + ": field '" + field + "': expected a number or an [re, im] pair");
}

}  // namespace detail

/// Parses a state document; `source` names it in diagnostics.
inline LoadedState parse_state(const std::string& text, const std::string& source = "<input>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw StateParseError(source + ": " + detail::line_column(text, e.byte) + ": " + what);
  }
  if (!doc.is_object()) throw StateParseError(source + ": top level must be an object");
  for (const char* key : {"dims", "kind", "data"})
    if (!doc.contains(key)) throw StateParseError(source + ": field '" + key + "' is missing");

  const auto& jd = doc["dims"];
  if (!jd.is_array() || jd.empty()) throw StateParseError(source + ": field 'dims': expected a nonempty array");
  std::vector<int> dims_v;
  for (std::size_t i = 0; i < jd.size(); ++i) {
    if (!jd[i].is_number_integer()) {
      throw StateParseError(source + ": field 'dims[" + std::to_string(i) + "]': expected an integer");
    }
    dims_v.push_back(jd[i].get<int>());
  }
  std::optional<SiteDims> dims;
  try {
    dims.emplace(dims_v);
  } catch (const std::invalid_argument& e) {
    throw StateParseError(source + ": field 'dims': " + e.what());
  }
  const Index total = dims->total();

  const auto& kind = doc["kind"];
  if (!kind.is_string() || (kind != "pure" && kind != "mixed")) {
    throw StateParseError(source + ": field 'kind': expected \"pure\" or \"mixed\"");
  }
  const auto& data = doc["data"];
  if (!data.is_array() || static_cast<Index>(data.size()) != total) {
    throw StateParseError(source + ": field 'data': expected an array of " + std::to_string(total) +
                          (kind == "pure" ? " amplitudes" : " rows"));
  }

  if (kind == "pure") {
    Vector v(total);
    for (Index i = 0; i < total; ++i) {
      v(i) = detail::parse_entry(data[static_cast<std::size_t>(i)], "data[" + std::to_string(i) + "]", source);
    }
    return PureState(std::move(*dims), std::move(v));
  }
  Matrix m(total, total);
  for (Index r = 0; r < total; ++r) {
    const auto& row = data[static_cast<std::size_t>(r)];
    const std::string field = "data[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != total) {
      throw StateParseError(source + ": field '" + field + "': expected a row of " + std::to_string(total) + " entries");
    }
    for (Index c = 0; c < total; ++c) {
      m(r, c) = detail::parse_entry(row[static_cast<std::size_t>(c)], field + "[" + std::to_string(c) + "]", source);
    }
  }
  return DensityMatrix(std::move(*dims), std::move(m));
}

inline LoadedState load_state(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw StateParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_state(ss.str(), path);
}

inline nlohmann::json state_to_json(const PureState& psi) {
  nlohmann::json data = nlohmann::json::array();
  for (Index i = 0; i < psi.amplitudes().size(); ++i) data.push_back({psi.amplitudes()(i).real(), psi.amplitudes()(i).imag()});
  return {{"dims", psi.dims().values()}, {"kind", "pure"}, {"data", data}};
}

inline nlohmann::json state_to_json(const DensityMatrix& rho) {
  nlohmann::json data = nlohmann::json::array();
  for (Index r = 0; r < rho.matrix().rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < rho.matrix().cols(); ++c) row.push_back({rho.matrix()(r, c).real(), rho.matrix()(r, c).imag()});
    data.push_back(std::move(row));
  }
  return {{"dims", rho.dims().values()}, {"kind", "mixed"}, {"data", data}};
}

}  // namespace entanglemeter
