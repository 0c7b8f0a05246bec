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

#ifndef POLAGENDA_FEATURES_H_
#define POLAGENDA_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "polagenda/preprocess.h"

namespace polagenda {

// Dense token index. Index order is descending document frequency with ties
// broken lexicographically, so the same documents always give the same
// indices regardless of their order.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Throws InvalidArgumentError if min_df < 1, EmptyVocabularyError if no
  // token reaches min_df.
  static Vocabulary Build(std::span<const TokenizedDoc> docs,
                          std::size_t min_df);

  std::optional<std::uint32_t> Find(std::string_view token) const;
  const std::string& token(std::uint32_t index) const {
    return tokens_[index];
  }
  std::size_t df(std::uint32_t index) const { return df_[index]; }
  std::size_t size() const { return tokens_.size(); }
  std::size_t num_docs() const { return num_docs_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  nlohmann::json ToJson() const;
  static Vocabulary FromJson(const nlohmann::json& j);

 private:
  void Reindex();

  std::vector<std::string> tokens_;
  std::vector<std::size_t> df_;
  std::size_t num_docs_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// (index, count) pairs, indices strictly increasing, counts >= 1.
struct BowVector {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;

  std::size_t TotalCount() const;
};

BowVector VectorizeBow(const Vocabulary& vocab, const TokenizedDoc& doc);

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 0) : dim_(dimension) {}

  // Throws DimensionMismatchError on a wrong arity, InvalidArgumentError on
  // a non-finite component or duplicate token.
  void Add(std::string token, std::span<const double> vector);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  // nullptr for tokens not in the table.
  const double* Find(std::string_view token) const;
  std::span<const double> Row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }

 private:
  std::size_t dim_;
  std::vector<std::string> tokens_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Text format: "token v1 ... vD" per line, one consistent D.
EmbeddingTable LoadEmbeddings(const std::string& path);
void WriteEmbeddings(const std::string& path, const EmbeddingTable& table);

struct DocEmbedding {
  std::vector<double> vector;
  bool degenerate = false;  // no token was in the table
};

// Unweighted mean of in-table token vectors.
DocEmbedding EmbedDocument(const EmbeddingTable& table,
                           const TokenizedDoc& doc);

// Skip-gram with negative sampling.
struct SgnsConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to ~0 over training
  std::size_t min_count = 1;
  std::uint64_t seed = 1;
};

struct SgnsResult {
  EmbeddingTable table;
  std::vector<double> epoch_loss;  // mean loss per (center, context) pair
};

// Single-threaded and deterministic given the seed. Throws
// EmptyCorpusError when there are no tokens, InvalidArgumentError when
// dim < 2.
SgnsResult TrainSgns(std::span<const TokenizedDoc> docs,
                     const SgnsConfig& config);

// Word categories. A pattern ending in '*' matches any token with that
// prefix; other patterns match exactly.
class Lexicon {
 public:
  // Throws InvalidArgumentError for a non-lowercase or empty pattern.
  void Add(std::string_view category, std::string_view pattern);

  std::size_t size() const { return categories_.size(); }
  const std::string& category(std::size_t i) const {
    return categories_[i].name;
  }
  bool Matches(std::size_t category, std::string_view token) const;

  nlohmann::json ToJson() const;
  static Lexicon FromJson(const nlohmann::json& j);

 private:
  struct Category {
    std::string name;
    std::vector<std::string> exact;     // sorted
    std::vector<std::string> prefixes;  // sorted
  };
  std::vector<Category> categories_;
};

// lexicon file: CSV category,pattern
Lexicon LoadLexicon(const std::string& path);

// Per category: matching tokens / total tokens; zeros for an empty doc.
std::vector<double> LexiconFeatures(const Lexicon& lexicon,
                                    const TokenizedDoc& doc);

// Sparse real-valued feature row of a fixed dimension.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;  // sorted indices

  std::vector<double> ToDense() const;
  static SparseVector FromDense(std::span<const double> dense);
};

using FeatureMatrix = std::vector<SparseVector>;

enum class FeatureSet {
  kUnigram,
  kUnigramPlusEmbedding,
  kUnigramPlusLexicon,
  kEmbeddingOnly,
};

enum class CountScaling {
  kRaw,        // counts as-is (Naive Bayes)
  kSublinear,  // 1 + log(count) (linear models)
};

std::string_view ToString(FeatureSet f);
std::optional<FeatureSet> ParseFeatureSet(std::string_view s);

// Concatenates [unigram block | embedding block | lexicon block] according
// to the feature set. Resources not needed by the set may be null.
class FeatureAssembler {
 public:
  FeatureAssembler(FeatureSet set, CountScaling scaling,
                   const Vocabulary* vocab, const EmbeddingTable* embeddings,
                   const Lexicon* lexicon);

  std::size_t dimension() const { return dim_; }
  SparseVector Build(const TokenizedDoc& doc) const;
  FeatureMatrix BuildAll(std::span<const TokenizedDoc> docs) const;

 private:
  FeatureSet set_;
  CountScaling scaling_;
  const Vocabulary* vocab_;
  const EmbeddingTable* embeddings_;
  const Lexicon* lexicon_;
  std::size_t dim_ = 0;
};

}  // namespace polagenda

#endif  // POLAGENDA_FEATURES_H_
