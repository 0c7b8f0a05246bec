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

#include "polagenda/preprocess.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "polagenda/errors.h"

namespace polagenda {

namespace {

using CodePoints = std::vector<UChar32>;

CodePoints Decode(std::string_view text) {
  CodePoints out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? 0xFFFD : c);
  }
  return out;
}

std::string Encode(std::span<const UChar32> cps) {
  std::string out;
  out.reserve(cps.size());
  for (UChar32 c : cps) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(reinterpret_cast<const char*>(buf), static_cast<size_t>(n));
  }
  return out;
}

bool IsLetter(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_L_MASK) != 0; }
bool IsNumber(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_N_MASK) != 0; }
bool IsSpace(UChar32 c) { return u_isUWhiteSpace(c); }

bool IsHandleChar(UChar32 c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool MatchesAt(const CodePoints& cps, std::size_t pos, std::string_view lit) {
  if (pos + lit.size() > cps.size()) return false;
  for (std::size_t k = 0; k < lit.size(); ++k) {
    if (cps[pos + k] != static_cast<UChar32>(lit[k])) return false;
  }
  return true;
}

CodePoints StripHandles(const CodePoints& in) {
  CodePoints out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    if (in[i] == '@' && i + 1 < in.size() && IsHandleChar(in[i + 1])) {
      ++i;
      while (i < in.size() && IsHandleChar(in[i])) ++i;
      continue;
    }
    out.push_back(in[i++]);
  }
  return out;
}

CodePoints StripUrls(const CodePoints& in) {
  static constexpr std::string_view kPrefixes[] = {"https://", "http://",
                                                   "www.", "t.co/"};
  CodePoints out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    const bool boundary =
        i == 0 || !(IsLetter(in[i - 1]) || IsNumber(in[i - 1]));
    bool url = false;
    if (boundary) {
      for (auto prefix : kPrefixes) {
        if (MatchesAt(in, i, prefix)) {
          url = true;
          break;
        }
      }
    }
    if (url) {
      while (i < in.size() && !IsSpace(in[i])) ++i;
      continue;
    }
    out.push_back(in[i++]);
  }
  return out;
}

void CollapseRepeats(CodePoints& cps, int max_repeat) {
  std::size_t write = 0;
  int run = 0;
  for (std::size_t read = 0; read < cps.size(); ++read) {
    run = (write > 0 && cps[write - 1] == cps[read]) ? run + 1 : 1;
    if (run <= max_repeat) cps[write++] = cps[read];
  }
  cps.resize(write);
}

bool IsLowercaseToken(std::string_view s) {
  CodePoints cps = Decode(s);
  for (UChar32 c : cps) {
    if (u_tolower(c) != c) return false;
  }
  return true;
}

}  // namespace

std::string ToLowerUtf8(std::string_view text) {
  CodePoints cps = Decode(text);
  for (UChar32& c : cps) c = u_tolower(c);
  return Encode(cps);
}

std::size_t CodePointLength(std::string_view text) {
  return Decode(text).size();
}

TokenPipeline::TokenPipeline(std::set<std::string, std::less<>> stoplist,
                             int max_repeat, int min_token_len)
    : stoplist_(std::move(stoplist)),
      max_repeat_(max_repeat),
      min_token_len_(min_token_len) {
  if (max_repeat_ < 1) throw InvalidArgumentError("max_repeat must be >= 1");
  if (min_token_len_ < 1) {
    throw InvalidArgumentError("min_token_len must be >= 1");
  }
  for (const std::string& word : stoplist_) {
    if (word.empty()) throw InvalidArgumentError("empty stoplist entry");
    for (UChar32 c : Decode(word)) {
      if (IsSpace(c)) {
        throw InvalidArgumentError("stoplist entry contains white space: '" +
                                   word + "'");
      }
    }
    if (!IsLowercaseToken(word)) {
      throw InvalidArgumentError("stoplist entry is not lowercase: '" + word +
                                 "'");
    }
  }
}

std::vector<std::string> TokenPipeline::Tokenize(std::string_view text) const {
  CodePoints cps = Decode(text);
  for (UChar32& c : cps) c = u_tolower(c);
  cps = StripHandles(cps);
  cps = StripUrls(cps);
  CollapseRepeats(cps, max_repeat_);

  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && IsSpace(cps[i])) ++i;
    const std::size_t start = i;
    while (i < cps.size() && !IsSpace(cps[i])) ++i;
    if (start == i) break;

    std::span<const UChar32> raw(cps.data() + start, i - start);
    if (std::any_of(raw.begin(), raw.end(), IsNumber)) continue;
    if (stoplist_.contains(Encode(raw))) continue;

    CodePoints letters;
    letters.reserve(raw.size());
    for (UChar32 c : raw) {
      if (IsLetter(c)) letters.push_back(c);
    }
    CollapseRepeats(letters, max_repeat_);
    if (letters.size() < static_cast<std::size_t>(min_token_len_)) continue;
    std::string token = Encode(letters);
    if (stoplist_.contains(token)) continue;
    tokens.push_back(std::move(token));
  }
  return tokens;
}

PreprocessResult PreprocessCorpus(const TokenPipeline& pipeline,
                                  std::span<const Tweet> corpus) {
  PreprocessResult result;
  result.docs.resize(corpus.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      result.docs[i].tweet_id = corpus[i].id;
      result.docs[i].tokens = pipeline.Tokenize(corpus[i].text);
    }
  };
  const std::size_t n = corpus.size();
  const std::size_t threads = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, 16);
  if (n < 4096 || threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      pool.emplace_back(work, begin, std::min(n, begin + chunk));
    }
  }

  for (const TokenizedDoc& doc : result.docs) {
    if (doc.tokens.empty()) result.dropped.push_back(doc.tweet_id);
  }
  return result;
}

std::set<std::string, std::less<>> LoadStoplist(
    std::span<const std::string> paths) {
  std::set<std::string, std::less<>> words;
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) throw IoError(path);
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      words.insert(ToLowerUtf8(line.substr(first, last - first + 1)));
    }
  }
  return words;
}

void WriteTokenized(const std::string& path,
                    std::span<const TokenizedDoc> docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  for (const TokenizedDoc& doc : docs) {
    nlohmann::json obj{{"tweet_id", doc.tweet_id}, {"tokens", doc.tokens}};
    out << obj.dump() << '\n';
  }
}

std::vector<TokenizedDoc> LoadTokenized(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path);
  std::vector<TokenizedDoc> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto obj = nlohmann::json::parse(line);
      TokenizedDoc doc;
      doc.tweet_id = obj.at("tweet_id").get<std::string>();
      doc.tokens = obj.at("tokens").get<std::vector<std::string>>();
      docs.push_back(std::move(doc));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(line_no, e.what());
    }
  }
  return docs;
}

}  // namespace polagenda
