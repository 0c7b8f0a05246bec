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

#ifndef POLAGENDA_TOPICMODEL_H_
#define POLAGENDA_TOPICMODEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "polagenda/features.h"
#include "polagenda/preprocess.h"

namespace polagenda {

struct LdaConfig {
  int num_topics = 50;
  // Symmetric doc-topic prior; unset means 50 / num_topics.
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 200;
  std::uint64_t seed = 1;

  double Alpha() const { return alpha.value_or(50.0 / num_topics); }
  // Throws InvalidArgumentError.
  void Validate() const;
};

// Documents as vocabulary ids. Documents with no in-vocabulary token are
// listed in `excluded` instead of `docs`.
struct LdaCorpus {
  Vocabulary vocab;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::uint32_t>> docs;
  std::vector<std::string> excluded;

  std::size_t TotalTokens() const;
};

LdaCorpus MakeLdaCorpus(std::span<const TokenizedDoc> docs,
                        std::size_t min_df);
LdaCorpus MakeLdaCorpus(std::span<const TokenizedDoc> docs, Vocabulary vocab);

// Sufficient statistics of a collapsed Gibbs chain.
class LdaState {
 public:
  static constexpr int kFormatVersion = 1;

  LdaState() = default;
  // All counts zero, no documents: phi is uniform over the vocabulary.
  LdaState(const LdaConfig& config, Vocabulary vocab);
  // State with the given topic assignments; counts are derived from them.
  // Throws DimensionMismatchError, IndexError.
  static LdaState FromAssignments(const LdaConfig& config, Vocabulary vocab,
                                  std::vector<std::string> doc_ids,
                                  std::vector<std::vector<std::uint32_t>> docs,
                                  std::vector<std::vector<std::int32_t>> z);

  const LdaConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  int num_topics() const { return config_.num_topics; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t num_docs() const { return words_.size(); }
  const std::string& doc_id(std::size_t d) const { return doc_ids_.at(d); }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  const std::vector<std::uint32_t>& words(std::size_t d) const {
    return words_[d];
  }
  const std::vector<std::int32_t>& assignments(std::size_t d) const {
    return z_[d];
  }
  std::int64_t doc_topic(std::size_t d, int k) const {
    return doc_topic_[d * K() + static_cast<std::size_t>(k)];
  }
  std::int64_t topic_word(int k, std::uint32_t w) const {
    return topic_word_[w * K() + static_cast<std::size_t>(k)];
  }
  std::int64_t topic_total(int k) const {
    return topic_total_[static_cast<std::size_t>(k)];
  }

  // phi_kw = (N_kw + beta) / (N_k + V beta)
  double Phi(int k, std::uint32_t w) const;

  // Empty string when every invariant holds, else a description of the
  // first violation: per-doc totals, per-topic totals, corpus total,
  // non-negativity and z range.
  std::string CheckInvariants() const;

  nlohmann::json ToJson() const;
  static LdaState FromJson(const nlohmann::json& j);
  void Save(const std::string& path) const;
  static LdaState Load(const std::string& path);

  bool operator==(const LdaState& other) const;

 private:
  friend class GibbsSampler;
  std::size_t K() const { return static_cast<std::size_t>(config_.num_topics); }
  void ResetCounts();

  LdaConfig config_;
  Vocabulary vocab_;
  std::vector<std::string> doc_ids_;
  std::vector<std::vector<std::uint32_t>> words_;
  std::vector<std::vector<std::int32_t>> z_;
  std::vector<std::int64_t> doc_topic_;    // docs x K
  std::vector<std::int64_t> topic_word_;   // V x K
  std::vector<std::int64_t> topic_total_;  // K
};

// Called after every sweep with the 1-based sweep number.
using SweepObserver = std::function<void(int sweep, const LdaState& state)>;

// Collapsed Gibbs sampling: z initialized uniformly at random, then
// `iterations` full sweeps, each token resampled from
//   p(z = k) ∝ (N_dk + alpha) (N_kw + beta) / (N_k + V beta)
// with its own assignment removed. The returned state is the last sample.
// Throws EmptyDocumentError for an empty document.
LdaState FitLda(const LdaConfig& config, const LdaCorpus& corpus,
                const SweepObserver& observer = nullptr);

struct DocTopics {
  std::string tweet_id;
  std::vector<double> theta;
};

// theta_dk = (N_dk + alpha) / (len_d + K alpha). Throws IndexError.
DocTopics DocTopicDistribution(const LdaState& state, std::size_t doc);

// Largest and second-largest components, ties to the lower topic id.
// Throws KTooSmallError when K < 2.
std::pair<int, int> Top2Assign(std::span<const double> theta);

struct TopicSummary {
  int topic = 0;
  std::vector<std::pair<std::string, double>> words;  // (token, phi)
};

// Tokens by descending phi, ties lexicographic. Throws IndexError.
TopicSummary TopWords(const LdaState& state, int topic, std::size_t top_n);
std::vector<TopicSummary> AllTopWords(const LdaState& state,
                                      std::size_t top_n);

struct PerplexityOptions {
  int fold_in_sweeps = 50;
  std::uint64_t seed = 1;
};

// exp(-sum log p(w|d) / N) over in-vocabulary held-out tokens, where
// p(w|d) = sum_k theta_dk phi_kw and theta comes from fold-in Gibbs with
// the model counts frozen. Throws EmptyHeldoutError.
double HeldoutPerplexity(const LdaState& state,
                         std::span<const TokenizedDoc> heldout,
                         const PerplexityOptions& options = {});

// Per-document top-1/top-2 topic assignment.
struct TopicAssignment {
  std::string tweet_id;
  int topic1 = -1;  // -1: document was not modeled (uninterpretable)
  double prob1 = 0;
  int topic2 = -1;
  double prob2 = 0;
};

// One row per state document, plus sentinel rows for `excluded` ids.
std::vector<TopicAssignment> AssignTopics(
    const LdaState& state, std::span<const std::string> excluded = {});

// tweet_id,un1_topic,un1_prob,un2_topic,un2_prob
void WriteAssignmentsCsv(const std::string& path,
                         std::span<const TopicAssignment> rows);
std::vector<TopicAssignment> ReadAssignmentsCsv(const std::string& path);

// topic_id,top_words
void WriteTopicsCsv(const std::string& path,
                    std::span<const TopicSummary> topics);

}  // namespace polagenda

#endif  // POLAGENDA_TOPICMODEL_H_
