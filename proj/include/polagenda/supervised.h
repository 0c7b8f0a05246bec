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

#ifndef POLAGENDA_SUPERVISED_H_
#define POLAGENDA_SUPERVISED_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "polagenda/corpus.h"
#include "polagenda/features.h"

namespace polagenda {

enum class Algorithm { kDummy, kNaiveBayes, kLogisticRegression, kLinearSvm };

std::string_view ToString(Algorithm a);
std::optional<Algorithm> ParseAlgorithm(std::string_view s);

// Where the embedding block comes from when the feature set uses one.
enum class EmbeddingSource { kPretrained, kTrained };

struct SgdConfig {
  double learning_rate = 0.1;  // step t (1-based epoch) uses lr / sqrt(t)
  std::size_t epochs = 20;
  double l2_penalty = 1e-4;
  std::size_t batch_size = 64;
};

struct TrainConfig {
  Algorithm algorithm = Algorithm::kLogisticRegression;
  FeatureSet feature_set = FeatureSet::kUnigram;
  EmbeddingSource embedding_source = EmbeddingSource::kTrained;
  double test_fraction = 0.1;
  std::uint64_t seed = 1;
  SgdConfig sgd;
  double nb_smoothing = 1.0;

  // Throws InvalidArgumentError on a violated invariant.
  void Validate() const;
  // Row name, e.g. "LR + original w2v features".
  std::string Name() const;
};

// Parameters of a fitted model. Classes are sorted ascending so index
// order is also the argmax tie-break order.
struct TrainedClassifier {
  static constexpr int kFormatVersion = 1;

  Algorithm algorithm = Algorithm::kDummy;
  std::vector<CapCode> classes;
  std::size_t dim = 0;

  // Naive Bayes: log P(class), log P(feature | class) row-major
  // classes x dim.
  std::vector<double> log_prior;
  std::vector<double> log_likelihood;
  double smoothing = 1.0;

  // Logistic regression / one-vs-rest SVM: classes x dim, row-major.
  std::vector<double> weights;
  std::vector<double> bias;

  // Dummy: class frequencies; draws are seeded.
  std::vector<double> prior;
  std::uint64_t seed = 0;

  // Mean training objective after each epoch (LR/SVM); not serialized.
  std::vector<double> loss_history;

  std::size_t ClassIndex(CapCode code) const;  // throws IndexError
  nlohmann::json ToJson() const;
  static TrainedClassifier FromJson(const nlohmann::json& j);
};

// Throws DimensionMismatchError (row dims differ or labels/rows length
// differ), EmptyClassError (no instances), InvalidArgumentError (bad
// config, negative features for Naive Bayes).
TrainedClassifier Train(const TrainConfig& config, const FeatureMatrix& x,
                        std::span<const CapCode> labels);

struct Prediction {
  CapCode code;
  // Probabilities for Dummy/NB/LR, margins for SVM; parallel to classes.
  std::vector<double> scores;
  // The score of the predicted class.
  double score() const;
  std::size_t index = 0;
};

// Argmax with ties to the lowest code. The dummy classifier instead draws
// a class from its prior using (seed, draw) so a batch is reproducible.
// Throws DimensionMismatchError.
Prediction Predict(const TrainedClassifier& clf, const SparseVector& x,
                   std::uint64_t draw = 0);
std::vector<Prediction> PredictBatch(const TrainedClassifier& clf,
                                     const FeatureMatrix& x);

struct ClassScores {
  CapCode code;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;
};

struct EvalReport {
  std::vector<ClassScores> per_class;  // sorted by code
  double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
  double weighted_precision = 0, weighted_recall = 0, weighted_f1 = 0;
  double accuracy = 0;
  // confusion[i][j]: true per_class[i], predicted per_class[j].
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t n = 0;
};

// Metrics over the union of observed true and predicted codes.
EvalReport ScorePredictions(std::span<const CapCode> truth,
                            std::span<const CapCode> predicted);

EvalReport Evaluate(const TrainedClassifier& clf, const FeatureMatrix& x,
                    std::span<const CapCode> labels);

// Dense parameters of a linear multi-class model, for objective and
// gradient evaluation.
struct LinearParams {
  std::size_t classes = 0;
  std::size_t dim = 0;
  std::vector<double> weights;  // classes x dim
  std::vector<double> bias;     // classes
};

// Mean multinomial cross-entropy plus (l2/2)||W||^2 (bias unpenalized).
// Writes the exact gradient into `grad` when non-null.
double SoftmaxObjective(const LinearParams& params, const FeatureMatrix& x,
                        std::span<const std::size_t> label_index, double l2,
                        LinearParams* grad);

// Numerically stable in-place softmax.
void Softmax(std::span<double> z);

}  // namespace polagenda

#endif  // POLAGENDA_SUPERVISED_H_
