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

#ifndef POLAGENDA_CLASSIFIER_PIPELINE_H_
#define POLAGENDA_CLASSIFIER_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polagenda/corpus.h"
#include "polagenda/features.h"
#include "polagenda/preprocess.h"
#include "polagenda/supervised.h"

namespace polagenda {

struct LabeledDoc {
  TokenizedDoc doc;
  CapCode code;
};

// Shared inputs for building classifier features.
struct FeatureResources {
  const EmbeddingTable* pretrained = nullptr;
  const Lexicon* lexicon = nullptr;
  SgnsConfig sgns;         // for embeddings trained on the training split
  std::size_t min_df = 5;  // unigram vocabulary cut
};

// A classifier together with everything needed to featurize new text.
struct SupervisedModel {
  static constexpr int kFormatVersion = 1;

  TrainConfig config;
  Vocabulary vocab;
  std::optional<EmbeddingTable> embeddings;
  std::optional<Lexicon> lexicon;
  TrainedClassifier classifier;

  FeatureAssembler Assembler() const;

  // Empty documents get code 0 with score 0 and degenerate = true.
  struct Labeled {
    CapCode code;
    double score = 0;
    bool degenerate = false;
  };
  std::vector<Labeled> Label(std::span<const TokenizedDoc> docs) const;

  nlohmann::json ToJson() const;
  static SupervisedModel FromJson(const nlohmann::json& j);
  void Save(const std::string& path) const;
  static SupervisedModel Load(const std::string& path);
};

CountScaling ScalingFor(Algorithm a);

// Builds the vocabulary (and trained embeddings when the feature set calls
// for them) from `train` and fits the classifier.
SupervisedModel TrainModel(const TrainConfig& config,
                           std::span<const LabeledDoc> train,
                           const FeatureResources& resources);

EvalReport EvaluateModel(const SupervisedModel& model,
                         std::span<const LabeledDoc> test);

// The ten rows of the classifier comparison: D, NB, LR, LR + pre-trained
// w2v, LR + original w2v, LR + lexicon, and the same four for SVM.
std::vector<TrainConfig> VariantConfigs(const TrainConfig& base);

struct VariantRow {
  TrainConfig config;
  EvalReport report;
};

// One stratified split (test_fraction and seed of configs.front()) shared by
// every row. All configs must agree on test_fraction and seed.
std::vector<VariantRow> RunVariantMatrix(std::span<const LabeledDoc> labeled,
                                       std::span<const TrainConfig> configs,
                                       const FeatureResources& resources);

// classifier,f1,precision,recall,macro_f1,macro_precision,macro_recall,
// accuracy,n_test
void WriteVariantCsv(const std::string& path, std::span<const VariantRow> rows);

// Per-class scores of one report: code,precision,recall,f1,support
void WriteEvalCsv(const std::string& path, const EvalReport& report);

}  // namespace polagenda

#endif  // POLAGENDA_CLASSIFIER_PIPELINE_H_
