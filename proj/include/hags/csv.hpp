// Copyright 2026 The HAGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "hags/errors.hpp"

namespace hags {

/// One CSV field: integer, real (9 significant digits), or string.
using CsvCell = std::variant<long long, double, std::string>;
using CsvRow = std::vector<CsvCell>;

inline std::string csv_format(const CsvCell& cell) {
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", *d);
    return buf;
  }
  return std::get<std::string>(cell);
}

/// Header plus one line per record, comma separators, LF endings.
/// Byte-stable for fixed inputs.
inline void write_csv(const std::string& path,
                      const std::vector<std::string>& header,
                      const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const CsvRow& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_format(row[i]);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace hags
