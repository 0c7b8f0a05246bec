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

#include "polagenda/evaluate.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <unordered_map>

#include "polagenda/csv.h"
#include "polagenda/errors.h"

namespace polagenda {

namespace {

std::string JoinTopics(const std::vector<int>& topics) {
  std::string s;
  for (int t : topics) {
    if (!s.empty()) s += ", ";
    s += std::to_string(t);
  }
  return s;
}

int ParseInt(const std::string& field, std::size_t line, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(field, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw SchemaError(line, std::string("bad ") + what + ": '" + field + "'");
  }
  return v;
}

// Window and co-occurrence counts over a word set of size m.
struct WindowCounts {
  std::size_t windows = 0;
  std::vector<std::size_t> single;
  std::vector<std::size_t> pair;  // m x m, upper triangle used

  explicit WindowCounts(std::size_t m) : single(m, 0), pair(m * m, 0) {}

  void Merge(const WindowCounts& o) {
    windows += o.windows;
    for (std::size_t i = 0; i < single.size(); ++i) single[i] += o.single[i];
    for (std::size_t i = 0; i < pair.size(); ++i) pair[i] += o.pair[i];
  }
};

void CountWindows(std::span<const TokenizedDoc> docs,
                  const std::unordered_map<std::string, std::size_t>& index,
                  std::size_t window, WindowCounts& counts) {
  const std::size_t m = counts.single.size();
  std::vector<std::ptrdiff_t> ids;
  std::vector<std::size_t> present;
  std::vector<char> seen(m, 0);
  for (const TokenizedDoc& doc : docs) {
    if (doc.tokens.empty()) continue;
    ids.clear();
    for (const std::string& tok : doc.tokens) {
      auto it = index.find(tok);
      ids.push_back(it == index.end() ? -1
                                      : static_cast<std::ptrdiff_t>(it->second));
    }
    const std::size_t n = ids.size();
    const std::size_t num_windows = n <= window ? 1 : n - window + 1;
    const std::size_t width = std::min(n, window);
    for (std::size_t start = 0; start < num_windows; ++start) {
      present.clear();
      for (std::size_t i = start; i < start + width; ++i) {
        if (ids[i] < 0) continue;
        const auto id = static_cast<std::size_t>(ids[i]);
        if (!seen[id]) {
          seen[id] = 1;
          present.push_back(id);
        }
      }
      ++counts.windows;
      for (std::size_t a = 0; a < present.size(); ++a) {
        ++counts.single[present[a]];
        for (std::size_t b = a + 1; b < present.size(); ++b) {
          const std::size_t lo = std::min(present[a], present[b]);
          const std::size_t hi = std::max(present[a], present[b]);
          ++counts.pair[lo * m + hi];
        }
      }
      for (std::size_t id : present) seen[id] = 0;
    }
  }
}

}  // namespace

UnmappedTopicError::UnmappedTopicError(std::vector<int> topics)
    : Error(ErrorCategory::kData, "unmapped topic ids: " + JoinTopics(topics)),
      topics_(std::move(topics)) {}

void LabelMap::Add(int topic, std::string label, CapCode code) {
  if (topic < 0) throw InvalidArgumentError("negative topic id in label map");
  if (!code.is_known()) {
    throw InvalidArgumentError("label map code " +
                               std::to_string(code.value()) +
                               " is not 0, a CAP code or an extended code");
  }
  if (entries_.count(topic)) {
    throw DuplicateIdError("topic " + std::to_string(topic));
  }
  entries_.emplace(topic, Entry{std::move(label), code});
}

const LabelMap::Entry* LabelMap::Find(int topic) const {
  auto it = entries_.find(topic);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<int> LabelMap::Missing(int num_topics) const {
  if (!entries_.empty() && entries_.rbegin()->first >= num_topics) {
    throw InvalidArgumentError(
        "label map names topic " + std::to_string(entries_.rbegin()->first) +
        " but the model has " + std::to_string(num_topics) + " topics");
  }
  std::vector<int> missing;
  for (int k = 0; k < num_topics; ++k) {
    if (!entries_.count(k)) missing.push_back(k);
  }
  return missing;
}

LabelMap LoadLabelMap(const std::string& path) {
  csv::Table table = csv::ReadFile(path, {"topic_id", "label", "code"});
  const std::size_t c_topic = table.Column("topic_id");
  const std::size_t c_label = table.Column("label");
  const std::size_t c_code = table.Column("code");
  LabelMap map;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::Row& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    const int topic = ParseInt(row[c_topic], line, "topic_id");
    const int code = ParseInt(row[c_code], line, "code");
    try {
      map.Add(topic, row[c_label], CapCode(code));
    } catch (const InvalidArgumentError& e) {
      throw SchemaError(line, e.what());
    } catch (const DuplicateIdError& e) {
      throw SchemaError(line, e.what());
    }
  }
  return map;
}

double Npmi(double p_i, double p_j, double p_ij, double eps) {
  if (p_i <= 0 || p_j <= 0) return -1.0;
  if (p_ij >= 1.0) return 1.0;
  const double joint = p_ij + eps;
  const double v = std::log(joint / (p_i * p_j)) / -std::log(joint);
  return std::clamp(v, -1.0, 1.0);
}

CoherenceResult NpmiCoherence(std::span<const TopicSummary> topics,
                              std::span<const TokenizedDoc> reference,
                              std::size_t window, double epsilon,
                              std::string reference_name) {
  if (window < 1) throw InvalidArgumentError("NPMI window must be >= 1");
  bool any_token = false;
  for (const TokenizedDoc& d : reference) {
    if (!d.tokens.empty()) {
      any_token = true;
      break;
    }
  }
  if (!any_token) throw EmptyReferenceError();

  std::unordered_map<std::string, std::size_t> index;
  for (const TopicSummary& t : topics) {
    for (const auto& [tok, w] : t.words) index.emplace(tok, index.size());
  }
  const std::size_t m = index.size();

  constexpr std::size_t kChunk = 20000;
  WindowCounts counts(m);
  if (reference.size() <= kChunk) {
    CountWindows(reference, index, window, counts);
  } else {
    std::vector<std::future<WindowCounts>> parts;
    for (std::size_t begin = 0; begin < reference.size(); begin += kChunk) {
      auto chunk = reference.subspan(
          begin, std::min(kChunk, reference.size() - begin));
      parts.push_back(std::async(std::launch::async, [&, chunk] {
        WindowCounts c(m);
        CountWindows(chunk, index, window, c);
        return c;
      }));
    }
    for (auto& p : parts) counts.Merge(p.get());
  }

  CoherenceResult result;
  result.windows = counts.windows;
  result.reference = std::move(reference_name);
  const double nw = static_cast<double>(counts.windows);
  double total = 0;
  for (const TopicSummary& t : topics) {
    double sum = 0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < t.words.size(); ++a) {
      const std::size_t ia = index.at(t.words[a].first);
      for (std::size_t b = a + 1; b < t.words.size(); ++b) {
        const std::size_t ib = index.at(t.words[b].first);
        if (ia == ib) continue;
        const std::size_t lo = std::min(ia, ib);
        const std::size_t hi = std::max(ia, ib);
        sum += Npmi(static_cast<double>(counts.single[ia]) / nw,
                    static_cast<double>(counts.single[ib]) / nw,
                    static_cast<double>(counts.pair[lo * m + hi]) / nw,
                    epsilon);
        ++pairs;
      }
    }
    const double score = pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
    result.topics.push_back(t.topic);
    result.topic_npmi.push_back(score);
    total += score;
  }
  result.mean =
      topics.empty() ? 0.0 : total / static_cast<double>(topics.size());
  return result;
}

void WriteCoherenceCsv(const std::string& path, const CoherenceResult& result,
                       std::span<const TopicSummary> topics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"topic_id", "npmi_mean", "top_words"});
  for (std::size_t i = 0; i < result.topics.size(); ++i) {
    std::string words;
    if (i < topics.size()) {
      for (const auto& [tok, w] : topics[i].words) {
        if (!words.empty()) words += ' ';
        words += tok;
      }
    }
    csv::WriteRow(out, {std::to_string(result.topics[i]),
                        csv::FormatExact(result.topic_npmi[i]), words});
  }
}

AgreementResult CohensKappa(std::span<const CapCode> a,
                            std::span<const CapCode> b) {
  if (a.size() != b.size()) throw LengthMismatchError(a.size(), b.size());
  if (a.empty()) throw EmptyClassError("kappa needs at least one pair");

  std::set<CapCode> codes(a.begin(), a.end());
  codes.insert(b.begin(), b.end());
  AgreementResult r;
  r.codes.assign(codes.begin(), codes.end());
  r.n = a.size();
  const std::size_t c = r.codes.size();
  std::unordered_map<CapCode, std::size_t> pos;
  for (std::size_t i = 0; i < c; ++i) pos[r.codes[i]] = i;
  r.confusion.assign(c, std::vector<std::size_t>(c, 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++r.confusion[pos[a[i]]][pos[b[i]]];
  }

  const double n = static_cast<double>(r.n);
  std::size_t agree = 0;
  double expected = 0;
  for (std::size_t i = 0; i < c; ++i) {
    agree += r.confusion[i][i];
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < c; ++j) {
      row += r.confusion[i][j];
      col += r.confusion[j][i];
    }
    expected += (static_cast<double>(row) / n) * (static_cast<double>(col) / n);
  }
  r.observed = static_cast<double>(agree) / n;
  r.expected = expected;
  if (expected >= 1.0) {
    r.kappa = agree == r.n ? 1.0 : 0.0;
  } else {
    r.kappa = (r.observed - expected) / (1.0 - expected);
  }
  return r;
}

void WritePredictionsCsv(const std::string& path,
                         std::span<const CodedTweet> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"tweet_id", "su_code", "su_score"});
  for (const CodedTweet& t : rows) {
    csv::WriteRow(out, {t.tweet_id, std::to_string(t.code.value()),
                        csv::FormatExact(t.score)});
  }
}

std::vector<CodedTweet> ReadPredictionsCsv(const std::string& path) {
  csv::Table table = csv::ReadFile(path, {"tweet_id", "su_code", "su_score"});
  const std::size_t c_id = table.Column("tweet_id");
  const std::size_t c_code = table.Column("su_code");
  const std::size_t c_score = table.Column("su_score");
  std::vector<CodedTweet> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::Row& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    CodedTweet t{row[c_id], CapCode(ParseInt(row[c_code], line, "su_code")),
                 0.0};
    if (!IsLabelCode(t.code)) throw SchemaError(line, "su_code not a label");
    try {
      t.score = std::stod(row[c_score]);
    } catch (const std::logic_error&) {
      throw SchemaError(line, "bad su_score");
    }
    out.push_back(std::move(t));
  }
  return out;
}

AlignedCodes AlignForComparison(std::span<const CodedTweet> su,
                                std::span<const TopicAssignment> un,
                                const LabelMap& map) {
  std::unordered_map<std::string, int> topic_of;
  for (const TopicAssignment& a : un) topic_of.emplace(a.tweet_id, a.topic1);

  AlignedCodes out;
  std::unordered_map<std::string, char> in_su;
  for (const CodedTweet& t : su) {
    in_su.emplace(t.tweet_id, 1);
    auto it = topic_of.find(t.tweet_id);
    if (it == topic_of.end()) {
      ++out.missing_pair;
      continue;
    }
    if (!t.code.is_cap()) {
      ++out.su_not_policy;
      continue;
    }
    CapCode mapped = kNotPolicy;
    if (it->second >= 0) {
      const LabelMap::Entry* e = map.Find(it->second);
      if (e == nullptr) {
        ++out.unmapped_topic;
        continue;
      }
      mapped = e->code;
    }
    if (!mapped.is_cap()) {
      ++out.un_not_cap;
      continue;
    }
    out.tweet_ids.push_back(t.tweet_id);
    out.su.push_back(t.code);
    out.un.push_back(mapped);
  }
  for (const TopicAssignment& a : un) {
    if (!in_su.count(a.tweet_id)) ++out.missing_pair;
  }
  return out;
}

std::vector<MappedAssignment> ApplyLabelMap(
    std::span<const TopicAssignment> assignments, const LabelMap& map) {
  std::set<int> missing;
  auto code_of = [&](int topic) {
    if (topic < 0) return kNotPolicy;
    const LabelMap::Entry* e = map.Find(topic);
    if (e == nullptr) {
      missing.insert(topic);
      return kNotPolicy;
    }
    return e->code;
  };
  std::vector<MappedAssignment> out;
  out.reserve(assignments.size());
  for (const TopicAssignment& a : assignments) {
    out.push_back({a.tweet_id, code_of(a.topic1), code_of(a.topic2)});
  }
  if (!missing.empty()) {
    throw UnmappedTopicError(std::vector<int>(missing.begin(), missing.end()));
  }
  return out;
}

}  // namespace polagenda
