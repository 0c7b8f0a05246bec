// Copyright 2026 The Polagenda Authors
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

#ifndef POLAGENDA_CSV_H_
#define POLAGENDA_CSV_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace polagenda::csv {

using Row = std::vector<std::string>;

// RFC 4180 subset: comma separator, double-quote quoting, "" escapes.
// Embedded newlines inside quotes are not supported.
Row ParseLine(std::string_view line, std::size_t line_no);

std::string Quote(std::string_view field);
void WriteRow(std::ostream& out, const Row& row);

struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> line_numbers;  // 1-based, parallel to rows

  // Index of a header column; throws SchemaError(1, ...) when absent.
  std::size_t Column(std::string_view name) const;
};

// Reads a whole file. Checks that the header contains every name in
// `required` and that every row has the header's arity.
Table ReadFile(const std::string& path,
               const std::vector<std::string>& required);

// Fixed-precision decimal rendering ("%.{digits}f").
std::string FormatFixed(double value, int digits);
// Shortest round-tripping rendering (%.17g).
std::string FormatExact(double value);

}  // namespace polagenda::csv

#endif  // POLAGENDA_CSV_H_
