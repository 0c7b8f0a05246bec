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

#ifndef POLAGENDA_CODEBOOK_H_
#define POLAGENDA_CODEBOOK_H_

#include <map>
#include <string>
#include <string_view>

#include "polagenda/corpus.h"

namespace polagenda {

struct CodebookEntry {
  std::string label;
  bool extended = false;  // true for the non-CAP codes 24-35
};

// Code <-> label table. Labels are unique; the extended flag must agree
// with the code range.
class CapCodebook {
 public:
  CapCodebook() = default;

  // The 20 CAP macro codes, the 12 extended codes and 0.
  static CapCodebook Default();

  // codebook.csv: code,label,extended  (extended in {0,1})
  static CapCodebook Load(const std::string& path);
  void Write(const std::string& path) const;

  // Throws InvalidArgumentError on a duplicate code/label or a flag that
  // contradicts the code range.
  void Add(CapCode code, std::string label, bool extended);

  bool Contains(CapCode code) const { return entries_.contains(code); }
  // Label for a code; "code <n>" when the code is not in the book.
  std::string Label(CapCode code) const;
  const CodebookEntry* Find(CapCode code) const;
  const std::map<CapCode, CodebookEntry>& entries() const { return entries_; }

 private:
  std::map<CapCode, CodebookEntry> entries_;
  std::map<std::string, CapCode, std::less<>> by_label_;
};

}  // namespace polagenda

#endif  // POLAGENDA_CODEBOOK_H_
