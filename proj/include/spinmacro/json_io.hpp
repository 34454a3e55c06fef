// Copyright 2026 The spinmacro Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON export of measure results with a fixed key order and 17-digit numbers.

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "spinmacro/macromeasure.hpp"
#include "spinmacro/numfmt.hpp"

namespace spinmacro {

inline std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

/// Keys: measure, convention, value, alpha (N x 3), restarts, grad_norm,
/// spread, seed, converged_restarts.
inline void write_result_json(std::ostream& out, const MeasureResult& r, const std::string& indent = "") {
  const std::string in = indent + "  ";
  out << "{\n";
  out << in << "\"measure\": \"" << r.measure << "\",\n";
  out << in << "\"convention\": \"" << to_string(r.convention) << "\",\n";
  out << in << "\"value\": " << json_number(r.value) << ",\n";
  out << in << "\"alpha\": [";
  for (int i = 0; i < r.optimal_field.size(); ++i) {
    const Eigen::Vector3d& a = r.optimal_field[i];
    out << (i ? ", " : "") << '[' << json_number(a.x()) << ", " << json_number(a.y()) << ", "
        << json_number(a.z()) << ']';
  }
  out << "],\n";
  out << in << "\"restarts\": " << r.restarts_used << ",\n";
  out << in << "\"grad_norm\": " << json_number(r.gradient_norm) << ",\n";
  out << in << "\"spread\": " << json_number(r.spread) << ",\n";
  out << in << "\"seed\": " << r.seed << ",\n";
  out << in << "\"converged_restarts\": " << r.converged_restarts << "\n";
  out << indent << '}';
}

/// A single result is written as an object, several as an array.
inline void write_results_json(std::ostream& out, const std::vector<MeasureResult>& results) {
  if (results.size() == 1) {
    write_result_json(out, results.front());
  } else {
    out << "[\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      out << "  ";
      write_result_json(out, results[i], "  ");
      out << (i + 1 < results.size() ? ",\n" : "\n");
    }
    out << ']';
  }
  out << '\n';
}

}  // namespace spinmacro
