// Copyright 2026 The qoverlap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// @file state_io.hpp
/// JSON state files. See docs/state-format.md.

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qoverlap/core.hpp"

namespace qoverlap {

struct StateFile {
  std::string label;
  DensityMatrix state;
};

namespace detail {

inline Eigen::MatrixXd read_real_4x4(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 4) {
    throw ValidationError("field '" + field + "' must be an array of 4 rows");
  }
  Eigen::MatrixXd m(4, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != 4) {
      throw ValidationError("field '" + field + "[" + std::to_string(r) +
                            "]' must be an array of 4 numbers");
    }
    for (std::size_t c = 0; c < 4; ++c) {
      if (!row[c].is_number()) {
        throw ValidationError("field '" + field + "[" + std::to_string(r) + "][" +
                              std::to_string(c) + "]' is not a number");
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

inline std::string line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Parses a state document; `source` names it in diagnostics.
inline StateFile parse_state(const std::string& text, const std::string& source = "<input>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(source + ": " + detail::line_of(text, e.byte) + ": malformed JSON");
  }
  if (!j.is_object()) throw ValidationError(source + ": top level must be an object");
  const bool has_dm = j.contains("density_matrix");
  const bool has_r = j.contains("correlation_matrix");
  if (has_dm == has_r) {
    throw ValidationError(source +
                          ": exactly one of 'density_matrix' or 'correlation_matrix' is required");
  }
  if (j.contains("label") && !j["label"].is_string()) {
    throw ValidationError(source + ": field 'label' must be a string");
  }
  StateFile sf{j.value("label", std::string{}), maximally_mixed(4)};
  try {
    if (has_dm) {
      const auto& dm = j["density_matrix"];
      if (!dm.is_object() || !dm.contains("re")) {
        throw ValidationError("field 'density_matrix' needs 're' (and optionally 'im')");
      }
      const Eigen::MatrixXd re = detail::read_real_4x4(dm["re"], "density_matrix.re");
      Eigen::MatrixXd im = Eigen::MatrixXd::Zero(4, 4);
      if (dm.contains("im")) im = detail::read_real_4x4(dm["im"], "density_matrix.im");
      ComplexMatrix m(4, 4);
      m.real() = re;
      m.imag() = im;
      sf.state = DensityMatrix::from_matrix(m);
    } else {
      const Eigen::Matrix4d r = detail::read_real_4x4(j["correlation_matrix"],
                                                      "correlation_matrix");
      sf.state = from_correlation(CorrelationMatrix::from_entries(r));
    }
  } catch (const PhysicsError& e) {
    throw PhysicsError(source + ": " + e.what(), e.min_eigenvalue());
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return sf;
}

inline StateFile load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state(ss.str(), path);
}

inline std::string dump_state(const StateFile& sf) {
  nlohmann::json j;
  j["label"] = sf.label;
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  const auto& m = sf.state.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  j["density_matrix"] = {{"re", re}, {"im", im}};
  return j.dump(2);
}

}  // namespace qoverlap
