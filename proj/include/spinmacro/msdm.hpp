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

// "MSDM v1" density-matrix text format.
//
//   MSDM v1
//   N <num_sites> S2 <twice_spin>
//   <D rows of D whitespace-separated entries "re,im">

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "spinmacro/numfmt.hpp"
#include "spinmacro/spincore.hpp"

namespace spinmacro {

inline void write_msdm(std::ostream& out, const DensityMatrix& rho) {
  const SystemDescriptor& desc = rho.descriptor();
  out << "MSDM v1\n";
  out << "N " << desc.num_sites() << " S2 " << desc.twice_spin() << "\n";
  const CMatrix& m = rho.matrix();
  std::string line;
  for (Index i = 0; i < m.rows(); ++i) {
    line.clear();
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line += ' ';
      line += format_double(m(i, j).real());
      line += ',';
      line += format_double(m(i, j).imag());
    }
    line += '\n';
    out << line;
  }
}

inline std::string to_msdm(const DensityMatrix& rho) {
  std::ostringstream os;
  write_msdm(os, rho);
  return os.str();
}

/// Parses and validates; every failure (syntax, shape, or a violated
/// density-matrix invariant) is reported as FormatError.
inline DensityMatrix read_msdm(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("MSDM: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "MSDM v1") throw FormatError("MSDM: bad magic line '" + line + "'");
  if (!std::getline(in, line)) throw FormatError("MSDM: missing descriptor line");
  std::istringstream header(line);
  std::string tag_n, tag_s;
  long long n = 0, s2 = 0;
  if (!(header >> tag_n >> n >> tag_s >> s2) || tag_n != "N" || tag_s != "S2") {
    throw FormatError("MSDM: descriptor line must read 'N <n> S2 <twice_spin>'");
  }
  std::string rest;
  if (header >> rest) throw FormatError("MSDM: trailing text on descriptor line");
  if (n < 1 || n > 64 || s2 < 1 || s2 > 1 << 20) throw FormatError("MSDM: descriptor out of range");
  SystemDescriptor desc = [&] {
    try {
      return SystemDescriptor(static_cast<int>(n), static_cast<int>(s2));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("MSDM: ") + e.what());
    }
  }();
  const Index dim = desc.dim();
  CMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    if (!std::getline(in, line)) {
      throw FormatError("MSDM: expected " + std::to_string(dim) + " rows, found " +
                        std::to_string(i));
    }
    std::istringstream row(line);
    std::string tok;
    Index j = 0;
    while (row >> tok) {
      if (j >= dim) throw FormatError("MSDM: row " + std::to_string(i) + " has too many entries");
      const auto comma = tok.find(',');
      if (comma == std::string::npos) {
        throw FormatError("MSDM: entry '" + tok + "' is not of the form re,im");
      }
      const double re = parse_double(std::string_view(tok).substr(0, comma));
      const double im = parse_double(std::string_view(tok).substr(comma + 1));
      m(i, j++) = Complex(re, im);
    }
    if (j != dim) {
      throw FormatError("MSDM: row " + std::to_string(i) + " has " + std::to_string(j) +
                        " entries, expected " + std::to_string(dim));
    }
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw FormatError("MSDM: unexpected trailing content");
    }
  }
  try {
    return DensityMatrix(desc, std::move(m));
  } catch (const InvalidState& e) {
    throw FormatError(std::string("MSDM: ") + e.what());
  }
}

inline DensityMatrix read_msdm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("MSDM: cannot open '" + path + "'");
  return read_msdm(in);
}

inline void write_msdm_file(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  write_msdm(out, rho);
}

}  // namespace spinmacro
