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

#include "polagenda/codebook.h"

#include <fstream>
#include <utility>

#include "polagenda/csv.h"
#include "polagenda/errors.h"

namespace polagenda {

namespace {

struct DefaultEntry {
  int code;
  const char* label;
};

constexpr DefaultEntry kDefaultEntries[] = {
    {0, "uninterpretable"},
    {1, "macroeconomics"},
    {2, "civil rights"},
    {3, "health"},
    {4, "agriculture"},
    {5, "labor"},
    {6, "education"},
    {7, "environment"},
    {8, "energy"},
    {9, "immigration"},
    {10, "transportation"},
    {12, "law and crime"},
    {13, "social welfare"},
    {14, "housing"},
    {15, "domestic commerce"},
    {16, "defense"},
    {17, "technology"},
    {18, "foreign trade"},
    {19, "international affairs"},
    {20, "government operations"},
    {21, "public lands"},
    {23, "cultural affairs"},
    {24, "veterans"},
    {25, "sports"},
    {26, "district affairs"},
    {27, "holidays"},
    {28, "awards"},
    {29, "politicking"},
    {30, "self promotion"},
    {31, "sympathy"},
    {32, "emergency response"},
    {33, "legislative process"},
    {34, "constituent relations"},
    {35, "power relations"},
};

}  // namespace

CapCodebook CapCodebook::Default() {
  CapCodebook book;
  for (const auto& e : kDefaultEntries) {
    CapCode code(e.code);
    book.Add(code, e.label, code.is_extended());
  }
  return book;
}

CapCodebook CapCodebook::Load(const std::string& path) {
  csv::Table table = csv::ReadFile(path, {"code", "label", "extended"});
  const std::size_t c = table.Column("code"), l = table.Column("label"),
                    x = table.Column("extended");
  CapCodebook book;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line_no = table.line_numbers[i];
    int code = 0;
    try {
      std::size_t used = 0;
      code = std::stoi(row[c], &used);
      if (used != row[c].size()) throw std::invalid_argument(row[c]);
    } catch (const std::exception&) {
      throw SchemaError(line_no, "bad code '" + row[c] + "'");
    }
    if (row[x] != "0" && row[x] != "1") {
      throw SchemaError(line_no, "extended must be 0 or 1");
    }
    try {
      book.Add(CapCode(code), row[l], row[x] == "1");
    } catch (const InvalidArgumentError& e) {
      throw SchemaError(line_no, e.what());
    }
  }
  return book;
}

void CapCodebook::Write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"code", "label", "extended"});
  for (const auto& [code, entry] : entries_) {
    csv::WriteRow(out, {std::to_string(code.value()), entry.label,
                        entry.extended ? "1" : "0"});
  }
}

void CapCodebook::Add(CapCode code, std::string label, bool extended) {
  if (!code.is_known()) {
    throw InvalidArgumentError("code " + std::to_string(code.value()) +
                               " is outside 0, CAP 1-23 and 24-35");
  }
  if (extended != code.is_extended()) {
    throw InvalidArgumentError("extended flag disagrees with code " +
                               std::to_string(code.value()));
  }
  if (label.empty()) throw InvalidArgumentError("empty codebook label");
  if (entries_.contains(code)) {
    throw InvalidArgumentError("duplicate code " +
                               std::to_string(code.value()));
  }
  if (by_label_.contains(label)) {
    throw InvalidArgumentError("duplicate label '" + label + "'");
  }
  by_label_.emplace(label, code);
  entries_.emplace(code, CodebookEntry{std::move(label), extended});
}

std::string CapCodebook::Label(CapCode code) const {
  const CodebookEntry* e = Find(code);
  return e ? e->label : "code " + std::to_string(code.value());
}

const CodebookEntry* CapCodebook::Find(CapCode code) const {
  auto it = entries_.find(code);
  return it == entries_.end() ? nullptr : &it->second;
}

}  // namespace polagenda
