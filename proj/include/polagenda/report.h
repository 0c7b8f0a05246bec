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

#ifndef POLAGENDA_REPORT_H_
#define POLAGENDA_REPORT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polagenda/codebook.h"
#include "polagenda/corpus.h"
#include "polagenda/evaluate.h"
#include "polagenda/features.h"
#include "polagenda/supervised.h"
#include "polagenda/topicmodel.h"

namespace polagenda {

// Topic distribution with one column per model output. A column value is
// absent when that model never emitted the code.
struct DistributionRow {
  CapCode code;
  std::string label;
  std::optional<double> su;
  std::optional<double> un1;
  std::optional<double> un2;
};

struct DistributionTable {
  std::vector<DistributionRow> rows;  // code order, 0 last

  // Sum of the present values of a column: 0 = su, 1 = un1, 2 = un2.
  double ColumnSum(int column) const;
};

// Rows cover every codebook code plus any other emitted code. An empty
// column input leaves that column absent everywhere.
DistributionTable MakeDistributionTable(std::span<const CapCode> su,
                                        std::span<const CapCode> un1,
                                        std::span<const CapCode> un2,
                                        const CapCodebook& codebook);

// Machine CSV: code,label,su,un1,un2 at full precision, "-" when absent.
void WriteDistributionCsv(const std::string& path,
                          const DistributionTable& table);
// Aligned text table, 3 decimals, "-" when absent.
std::string RenderDistribution(const DistributionTable& table);
// {"rows": [{"code", "label", "su", "un1", "un2"}]} with null when absent.
nlohmann::json DistributionToJson(const DistributionTable& table);

enum class GroupBy { kParty, kChamber, kGender };
std::string_view ToString(GroupBy g);
std::optional<GroupBy> ParseGroupBy(std::string_view s);

struct BreakdownRow {
  CapCode code;
  std::string label;
  std::string group;
  double share = 0;
  std::size_t count = 0;
};

struct GroupBreakdown {
  GroupBy group_by = GroupBy::kParty;
  std::vector<BreakdownRow> rows;  // per code with tweets, both groups
  std::vector<CapCode> omitted;    // codebook codes with no tweets
};

// Tweets are resolved to accounts through `corpus`. Throws
// UnknownAccountError listing unresolved handles (or tweet ids missing from
// the corpus, prefixed "tweet:").
GroupBreakdown MakeGroupBreakdown(std::span<const CodedTweet> codes,
                                  std::span<const Tweet> corpus,
                                  const AccountSet& accounts, GroupBy group_by,
                                  const CapCodebook& codebook);

// code,label,group,share
void WriteBreakdownCsv(const std::string& path, const GroupBreakdown& b);

// Ranked features per code. Each group is one topic's word list (a single
// group for classifiers).
struct FeatureListRow {
  CapCode code;
  std::string label;
  std::vector<std::vector<std::string>> groups;
};

// LR/SVM: highest weights. NB: highest log-likelihood ratio of the class
// against the mean of the other classes. Dummy: empty lists. Only the
// unigram block is ranked; ties go to the lexicographically smaller token.
std::vector<FeatureListRow> ClassifierFeatureTable(
    const TrainedClassifier& clf, const Vocabulary& vocab, std::size_t top_n,
    const CapCodebook& codebook);

// One row per mapped code; topics sharing a code contribute one group each
// in topic-id order.
std::vector<FeatureListRow> TopicFeatureTable(const LdaState& state,
                                              const LabelMap& map,
                                              std::size_t top_n,
                                              const CapCodebook& codebook);

// code,label,features with groups joined by "; " and words by " ".
void WriteFeatureCsv(const std::string& path,
                     std::span<const FeatureListRow> rows);

// Fraction of code 0; 0 for an empty list.
double UninterpretableShare(std::span<const CapCode> codes);
// Fraction of code 0 or extended codes; 0 for an empty list.
double NonCapShare(std::span<const CapCode> codes);
// Fraction of CAP codes; 0 for an empty list.
double CapShare(std::span<const CapCode> codes);

}  // namespace polagenda

#endif  // POLAGENDA_REPORT_H_
