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

#include "polagenda/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "polagenda/csv.h"
#include "polagenda/errors.h"

namespace polagenda {

namespace {

std::map<CapCode, std::size_t> Tally(std::span<const CapCode> codes) {
  std::map<CapCode, std::size_t> counts;
  for (CapCode c : codes) ++counts[c];
  return counts;
}

std::optional<double> Share(const std::map<CapCode, std::size_t>& counts,
                            std::size_t total, CapCode code) {
  auto it = counts.find(code);
  if (it == counts.end() || total == 0) return std::nullopt;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

std::string Cell(const std::optional<double>& v, bool rounded) {
  if (!v) return "-";
  return rounded ? csv::FormatFixed(*v, 3) : csv::FormatExact(*v);
}

double Fraction(std::span<const CapCode> codes, bool (*pred)(CapCode)) {
  if (codes.empty()) return 0.0;
  std::size_t n = 0;
  for (CapCode c : codes) n += pred(c) ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(codes.size());
}

std::string GroupName(const Account& a, GroupBy g) {
  switch (g) {
    case GroupBy::kParty:
      return std::string(ToString(a.party));
    case GroupBy::kChamber:
      return std::string(ToString(a.chamber));
    case GroupBy::kGender:
      return std::string(ToString(a.gender));
  }
  return {};
}

std::vector<std::string> GroupNames(GroupBy g) {
  switch (g) {
    case GroupBy::kParty:
      return {std::string(ToString(Party::kDem)),
              std::string(ToString(Party::kGop))};
    case GroupBy::kChamber:
      return {std::string(ToString(Chamber::kHouse)),
              std::string(ToString(Chamber::kSenate))};
    case GroupBy::kGender:
      return {std::string(ToString(Gender::kMan)),
              std::string(ToString(Gender::kWoman))};
  }
  return {};
}

// Indices of the n largest scores, ties to the smaller token.
std::vector<std::string> TopTokens(std::span<const double> scores,
                                   const Vocabulary& vocab, std::size_t n) {
  std::vector<std::uint32_t> ids(vocab.size());
  std::iota(ids.begin(), ids.end(), 0u);
  n = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n),
                    ids.end(), [&](std::uint32_t a, std::uint32_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return vocab.token(a) < vocab.token(b);
                    });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(vocab.token(ids[i]));
  return out;
}

}  // namespace

double DistributionTable::ColumnSum(int column) const {
  double sum = 0;
  for (const DistributionRow& r : rows) {
    const std::optional<double>& v =
        column == 0 ? r.su : (column == 1 ? r.un1 : r.un2);
    if (v) sum += *v;
  }
  return sum;
}

DistributionTable MakeDistributionTable(std::span<const CapCode> su,
                                        std::span<const CapCode> un1,
                                        std::span<const CapCode> un2,
                                        const CapCodebook& codebook) {
  const auto c_su = Tally(su);
  const auto c_un1 = Tally(un1);
  const auto c_un2 = Tally(un2);
  std::set<CapCode> codes;
  for (const auto& [code, entry] : codebook.entries()) codes.insert(code);
  for (const auto* m : {&c_su, &c_un1, &c_un2}) {
    for (const auto& [code, n] : *m) codes.insert(code);
  }
  DistributionTable table;
  auto add = [&](CapCode code) {
    table.rows.push_back({code, codebook.Label(code),
                          Share(c_su, su.size(), code),
                          Share(c_un1, un1.size(), code),
                          Share(c_un2, un2.size(), code)});
  };
  for (CapCode code : codes) {
    if (!code.is_not_policy()) add(code);
  }
  if (codes.contains(kNotPolicy)) add(kNotPolicy);
  return table;
}

void WriteDistributionCsv(const std::string& path,
                          const DistributionTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"code", "label", "su", "un1", "un2"});
  for (const DistributionRow& r : table.rows) {
    csv::WriteRow(out, {std::to_string(r.code.value()), r.label,
                        Cell(r.su, false), Cell(r.un1, false),
                        Cell(r.un2, false)});
  }
}

std::string RenderDistribution(const DistributionTable& table) {
  std::size_t label_width = 5;
  for (const DistributionRow& r : table.rows) {
    label_width = std::max(label_width, r.label.size());
  }
  std::ostringstream out;
  auto line = [&](const std::string& label, const std::string& code,
                  const std::string& a, const std::string& b,
                  const std::string& c) {
    out << label << std::string(label_width - label.size() + 2, ' ');
    char buf[64];
    std::snprintf(buf, sizeof buf, "%4s  %5s  %5s  %5s", code.c_str(),
                  a.c_str(), b.c_str(), c.c_str());
    out << buf << '\n';
  };
  line("topic", "code", "SU", "UN1", "UN2");
  for (const DistributionRow& r : table.rows) {
    line(r.label, r.code.is_not_policy() ? "-" : std::to_string(r.code.value()),
         Cell(r.su, true), Cell(r.un1, true), Cell(r.un2, true));
  }
  return out.str();
}

nlohmann::json DistributionToJson(const DistributionTable& table) {
  auto value = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const DistributionRow& r : table.rows) {
    rows.push_back({{"code", r.code.value()},
                    {"label", r.label},
                    {"su", value(r.su)},
                    {"un1", value(r.un1)},
                    {"un2", value(r.un2)}});
  }
  return {{"rows", rows}};
}

std::string_view ToString(GroupBy g) {
  switch (g) {
    case GroupBy::kParty:
      return "party";
    case GroupBy::kChamber:
      return "chamber";
    case GroupBy::kGender:
      return "gender";
  }
  return "";
}

std::optional<GroupBy> ParseGroupBy(std::string_view s) {
  for (GroupBy g : {GroupBy::kParty, GroupBy::kChamber, GroupBy::kGender}) {
    if (ToString(g) == s) return g;
  }
  return std::nullopt;
}

GroupBreakdown MakeGroupBreakdown(std::span<const CodedTweet> codes,
                                  std::span<const Tweet> corpus,
                                  const AccountSet& accounts, GroupBy group_by,
                                  const CapCodebook& codebook) {
  std::unordered_map<std::string_view, std::string_view> handle_of;
  for (const Tweet& t : corpus) handle_of.emplace(t.id, t.account_handle);

  std::set<std::string> unknown;
  std::map<CapCode, std::map<std::string, std::size_t>> counts;
  for (const CodedTweet& ct : codes) {
    auto h = handle_of.find(ct.tweet_id);
    if (h == handle_of.end()) {
      unknown.insert("tweet:" + ct.tweet_id);
      continue;
    }
    const Account* a = accounts.Find(h->second);
    if (a == nullptr) {
      unknown.insert(std::string(h->second));
      continue;
    }
    ++counts[ct.code][GroupName(*a, group_by)];
  }
  if (!unknown.empty()) {
    throw UnknownAccountError(
        std::vector<std::string>(unknown.begin(), unknown.end()));
  }

  GroupBreakdown out;
  out.group_by = group_by;
  const std::vector<std::string> groups = GroupNames(group_by);
  std::set<CapCode> all;
  for (const auto& [code, e] : codebook.entries()) all.insert(code);
  for (const auto& [code, m] : counts) all.insert(code);
  auto emit = [&](CapCode code) {
    auto it = counts.find(code);
    if (it == counts.end()) {
      out.omitted.push_back(code);
      return;
    }
    std::size_t total = 0;
    for (const auto& [g, n] : it->second) total += n;
    for (const std::string& g : groups) {
      auto gi = it->second.find(g);
      const std::size_t n = gi == it->second.end() ? 0 : gi->second;
      out.rows.push_back({code, codebook.Label(code), g,
                          static_cast<double>(n) / static_cast<double>(total),
                          n});
    }
  };
  for (CapCode code : all) {
    if (!code.is_not_policy()) emit(code);
  }
  if (all.contains(kNotPolicy)) emit(kNotPolicy);
  return out;
}

void WriteBreakdownCsv(const std::string& path, const GroupBreakdown& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"code", "label", "group", "share"});
  for (const BreakdownRow& r : b.rows) {
    csv::WriteRow(out, {std::to_string(r.code.value()), r.label, r.group,
                        csv::FormatExact(r.share)});
  }
}

std::vector<FeatureListRow> ClassifierFeatureTable(
    const TrainedClassifier& clf, const Vocabulary& vocab, std::size_t top_n,
    const CapCodebook& codebook) {
  const std::size_t n_classes = clf.classes.size();
  const std::size_t v = std::min(vocab.size(), clf.dim);
  std::vector<FeatureListRow> rows;
  for (std::size_t c = 0; c < n_classes; ++c) {
    FeatureListRow row{clf.classes[c], codebook.Label(clf.classes[c]), {}};
    std::vector<double> scores(vocab.size(),
                               -std::numeric_limits<double>::infinity());
    switch (clf.algorithm) {
      case Algorithm::kDummy:
        rows.push_back(std::move(row));
        continue;
      case Algorithm::kLogisticRegression:
      case Algorithm::kLinearSvm:
        for (std::size_t j = 0; j < v; ++j) {
          scores[j] = clf.weights[c * clf.dim + j];
        }
        break;
      case Algorithm::kNaiveBayes:
        for (std::size_t j = 0; j < v; ++j) {
          const double own = clf.log_likelihood[c * clf.dim + j];
          if (n_classes == 1) {
            scores[j] = own;
            continue;
          }
          double mx = -std::numeric_limits<double>::infinity();
          for (std::size_t o = 0; o < n_classes; ++o) {
            if (o != c) mx = std::max(mx, clf.log_likelihood[o * clf.dim + j]);
          }
          double sum = 0;
          for (std::size_t o = 0; o < n_classes; ++o) {
            if (o != c) sum += std::exp(clf.log_likelihood[o * clf.dim + j] - mx);
          }
          const double others =
              mx + std::log(sum / static_cast<double>(n_classes - 1));
          scores[j] = own - others;
        }
        break;
    }
    row.groups.push_back(TopTokens(scores, vocab, std::min(top_n, v)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FeatureListRow> TopicFeatureTable(const LdaState& state,
                                              const LabelMap& map,
                                              std::size_t top_n,
                                              const CapCodebook& codebook) {
  std::map<CapCode, std::vector<int>> topics_of;
  for (const auto& [topic, entry] : map.entries()) {
    if (topic < state.num_topics()) topics_of[entry.code].push_back(topic);
  }
  std::vector<FeatureListRow> rows;
  for (const auto& [code, topics] : topics_of) {
    FeatureListRow row{code, codebook.Label(code), {}};
    for (int t : topics) {
      std::vector<std::string> words;
      for (const auto& [tok, w] : TopWords(state, t, top_n).words) {
        words.push_back(tok);
      }
      row.groups.push_back(std::move(words));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteFeatureCsv(const std::string& path,
                     std::span<const FeatureListRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"code", "label", "features"});
  for (const FeatureListRow& r : rows) {
    std::string features;
    for (std::size_t g = 0; g < r.groups.size(); ++g) {
      if (g > 0) features += "; ";
      for (std::size_t i = 0; i < r.groups[g].size(); ++i) {
        if (i > 0) features += ' ';
        features += r.groups[g][i];
      }
    }
    csv::WriteRow(out, {std::to_string(r.code.value()), r.label, features});
  }
}

double UninterpretableShare(std::span<const CapCode> codes) {
  return Fraction(codes, [](CapCode c) { return c.is_not_policy(); });
}

double NonCapShare(std::span<const CapCode> codes) {
  return Fraction(codes, [](CapCode c) { return !c.is_cap(); });
}

double CapShare(std::span<const CapCode> codes) {
  return Fraction(codes, [](CapCode c) { return c.is_cap(); });
}

}  // namespace polagenda
