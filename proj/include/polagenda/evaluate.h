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

#ifndef POLAGENDA_EVALUATE_H_
#define POLAGENDA_EVALUATE_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "polagenda/corpus.h"
#include "polagenda/preprocess.h"
#include "polagenda/topicmodel.h"

namespace polagenda {

// Human-authored topic -> label/code mapping. Several topics may share a
// code; that merges them downstream.
class LabelMap {
 public:
  struct Entry {
    std::string label;
    CapCode code;
  };

  // Throws DuplicateIdError for a repeated topic id, InvalidArgumentError
  // for a negative topic id or a code that is neither 0, CAP nor extended.
  void Add(int topic, std::string label, CapCode code);

  const Entry* Find(int topic) const;
  const std::map<int, Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Topic ids in [0, num_topics) missing from the map. Throws
  // InvalidArgumentError when the map names a topic >= num_topics.
  std::vector<int> Missing(int num_topics) const;

 private:
  std::map<int, Entry> entries_;
};

// labelmap.csv: topic_id,label,code
LabelMap LoadLabelMap(const std::string& path);

// NPMI of one word pair from window probabilities:
//   log((p_ij + eps) / (p_i p_j)) / -log(p_ij + eps)
// A pair that shares every window (p_ij = 1) scores 1, a word that never
// occurs scores -1, and the result is clamped to [-1, 1].
double Npmi(double p_i, double p_j, double p_ij, double eps);

struct CoherenceResult {
  std::vector<int> topics;
  std::vector<double> topic_npmi;  // mean over word pairs, parallel to topics
  double mean = 0;
  std::size_t windows = 0;
  std::string reference;
};

// Window probabilities come from sliding windows of `window` tokens over
// each reference document; a document shorter than the window is a single
// window. A topic with fewer than two words scores 0. Throws
// EmptyReferenceError, InvalidArgumentError for window < 1.
CoherenceResult NpmiCoherence(std::span<const TopicSummary> topics,
                              std::span<const TokenizedDoc> reference,
                              std::size_t window = 10, double epsilon = 1e-12,
                              std::string reference_name = "reference");

// topic_id,npmi_mean,top_words
void WriteCoherenceCsv(const std::string& path, const CoherenceResult& result,
                       std::span<const TopicSummary> topics);

struct AgreementResult {
  double kappa = 0;
  double observed = 0;  // p_o
  double expected = 0;  // p_e
  std::vector<CapCode> codes;                       // sorted union
  std::vector<std::vector<std::size_t>> confusion;  // [a][b] over codes
  std::size_t n = 0;
};

// Throws LengthMismatchError, EmptyClassError for empty input.
// When p_e = 1 the kappa is 1 if p_o = 1 and 0 otherwise.
AgreementResult CohensKappa(std::span<const CapCode> a,
                            std::span<const CapCode> b);

// Supervised label of one tweet.
struct CodedTweet {
  std::string tweet_id;
  CapCode code;
  double score = 0;
};

// tweet_id,su_code,su_score
void WritePredictionsCsv(const std::string& path,
                         std::span<const CodedTweet> rows);
std::vector<CodedTweet> ReadPredictionsCsv(const std::string& path);

struct AlignedCodes {
  std::vector<std::string> tweet_ids;
  std::vector<CapCode> su;
  std::vector<CapCode> un;
  std::size_t missing_pair = 0;     // tweet absent from the other list
  std::size_t su_not_policy = 0;    // supervised code outside 1-23
  std::size_t un_not_cap = 0;       // mapped topic code outside 1-23
  std::size_t unmapped_topic = 0;   // topic without a label map entry
};

// Joins on tweet id in the order of `su`. Keeps a pair only when both codes
// are CAP codes.
AlignedCodes AlignForComparison(std::span<const CodedTweet> su,
                                std::span<const TopicAssignment> un,
                                const LabelMap& map);

struct MappedAssignment {
  std::string tweet_id;
  CapCode code1;
  CapCode code2;
};

// Topic -1 (document not modeled) maps to code 0. Throws UnmappedTopicError
// listing every topic id without an entry.
std::vector<MappedAssignment> ApplyLabelMap(
    std::span<const TopicAssignment> assignments, const LabelMap& map);

}  // namespace polagenda

#endif  // POLAGENDA_EVALUATE_H_
