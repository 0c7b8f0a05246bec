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

#include "polagenda/supervised.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "polagenda/errors.h"
#include "polagenda/random.h"

namespace polagenda {

namespace {

void CheckRows(const FeatureMatrix& x, std::size_t n_labels) {
  if (x.size() != n_labels) {
    throw DimensionMismatchError(std::to_string(x.size()) + " rows but " +
                                 std::to_string(n_labels) + " labels");
  }
  if (x.empty()) throw EmptyClassError("no training instances");
  for (const SparseVector& row : x) {
    if (row.dim != x.front().dim) {
      throw DimensionMismatchError("feature rows have different dimensions");
    }
    for (const auto& [j, v] : row.entries) {
      if (j >= row.dim) {
        throw DimensionMismatchError("feature index beyond row dimension");
      }
    }
  }
}

double Dot(const double* w, const SparseVector& x) {
  double s = 0;
  for (const auto& [j, v] : x.entries) s += w[j] * v;
  return s;
}

std::size_t ArgMax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double StepSize(const SgdConfig& sgd, std::size_t epoch) {
  return sgd.learning_rate / std::sqrt(static_cast<double>(epoch + 1));
}

// Weights held as scale * raw so the L2 shrink is O(1) per step.
struct ScaledWeights {
  std::vector<double> raw;
  double scale = 1.0;

  void Shrink(double factor) {
    scale *= factor;
    if (scale < 1e-9) {
      for (double& w : raw) w *= scale;
      scale = 1.0;
    }
  }
  std::vector<double> Materialize() const {
    std::vector<double> w(raw);
    for (double& v : w) v *= scale;
    return w;
  }
};

void TrainNaiveBayes(const TrainConfig& config, const FeatureMatrix& x,
                     std::span<const std::size_t> y, TrainedClassifier& clf) {
  if (!(config.nb_smoothing > 0)) {
    throw InvalidArgumentError("Naive Bayes smoothing must be > 0");
  }
  const std::size_t c = clf.classes.size(), d = clf.dim;
  std::vector<double> counts(c * d, 0.0), totals(c, 0.0), docs(c, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    docs[y[i]] += 1;
    for (const auto& [j, v] : x[i].entries) {
      if (v < 0) {
        throw InvalidArgumentError(
            "Naive Bayes needs non-negative feature values");
      }
      counts[y[i] * d + j] += v;
      totals[y[i]] += v;
    }
  }
  clf.smoothing = config.nb_smoothing;
  clf.log_prior.resize(c);
  clf.log_likelihood.resize(c * d);
  const double a = config.nb_smoothing;
  for (std::size_t k = 0; k < c; ++k) {
    clf.log_prior[k] = std::log(docs[k] / static_cast<double>(x.size()));
    const double denom = std::log(totals[k] + a * static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) {
      clf.log_likelihood[k * d + j] = std::log(counts[k * d + j] + a) - denom;
    }
  }
}

void TrainLogistic(const TrainConfig& config, const FeatureMatrix& x,
                   std::span<const std::size_t> y, TrainedClassifier& clf) {
  const std::size_t c = clf.classes.size(), d = clf.dim, n = x.size();
  const SgdConfig& sgd = config.sgd;
  ScaledWeights w;
  w.raw.assign(c * d, 0.0);
  std::vector<double> bias(c, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  std::vector<double> z(c);
  std::vector<double> bias_grad(c);
  // Sparse accumulation of the batch gradient.
  std::vector<double> grad(c * d, 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<char> is_touched(d, 0);

  LinearParams snapshot{c, d, {}, {}};
  std::vector<std::size_t> y_vec(y.begin(), y.end());

  for (std::size_t epoch = 0; epoch < sgd.epochs; ++epoch) {
    const double eta = StepSize(sgd, epoch);
    rng.Shuffle(order);
    for (std::size_t start = 0; start < n; start += sgd.batch_size) {
      const std::size_t end = std::min(n, start + sgd.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - start);
      std::fill(bias_grad.begin(), bias_grad.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const SparseVector& row = x[order[b]];
        for (std::size_t k = 0; k < c; ++k) {
          z[k] = w.scale * Dot(&w.raw[k * d], row) + bias[k];
        }
        Softmax(z);
        z[y[order[b]]] -= 1.0;
        for (std::size_t k = 0; k < c; ++k) bias_grad[k] += z[k] * inv_b;
        for (const auto& [j, v] : row.entries) {
          if (!is_touched[j]) {
            is_touched[j] = 1;
            touched.push_back(j);
          }
          for (std::size_t k = 0; k < c; ++k) {
            grad[k * d + j] += z[k] * v * inv_b;
          }
        }
      }
      w.Shrink(1.0 - eta * sgd.l2_penalty);
      const double step = eta / w.scale;
      for (std::uint32_t j : touched) {
        for (std::size_t k = 0; k < c; ++k) {
          w.raw[k * d + j] -= step * grad[k * d + j];
          grad[k * d + j] = 0.0;
        }
        is_touched[j] = 0;
      }
      touched.clear();
      for (std::size_t k = 0; k < c; ++k) bias[k] -= eta * bias_grad[k];
    }
    snapshot.weights = w.Materialize();
    snapshot.bias = bias;
    clf.loss_history.push_back(
        SoftmaxObjective(snapshot, x, y_vec, sgd.l2_penalty, nullptr));
  }
  clf.weights = w.Materialize();
  clf.bias = std::move(bias);
}

double HingeObjective(const std::vector<double>& weights,
                      const std::vector<double>& bias, const FeatureMatrix& x,
                      std::span<const std::size_t> y, double l2,
                      std::size_t c, std::size_t d) {
  double loss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < c; ++k) {
      const double sign = y[i] == k ? 1.0 : -1.0;
      const double margin = sign * (Dot(&weights[k * d], x[i]) + bias[k]);
      loss += std::max(0.0, 1.0 - margin);
    }
  }
  double norm = 0;
  for (double w : weights) norm += w * w;
  return loss / static_cast<double>(x.size()) + 0.5 * l2 * norm;
}

void TrainSvm(const TrainConfig& config, const FeatureMatrix& x,
              std::span<const std::size_t> y, TrainedClassifier& clf) {
  const std::size_t c = clf.classes.size(), d = clf.dim, n = x.size();
  const SgdConfig& sgd = config.sgd;
  // One scaled weight vector per class so each shrinks independently.
  std::vector<ScaledWeights> w(c);
  for (auto& wk : w) wk.raw.assign(d, 0.0);
  std::vector<double> bias(c, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  std::vector<std::vector<std::pair<std::size_t, double>>> violators(c);

  for (std::size_t epoch = 0; epoch < sgd.epochs; ++epoch) {
    const double eta = StepSize(sgd, epoch);
    rng.Shuffle(order);
    for (std::size_t start = 0; start < n; start += sgd.batch_size) {
      const std::size_t end = std::min(n, start + sgd.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - start);
      for (auto& v : violators) v.clear();
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        for (std::size_t k = 0; k < c; ++k) {
          const double sign = y[i] == k ? 1.0 : -1.0;
          const double f = w[k].scale * Dot(w[k].raw.data(), x[i]) + bias[k];
          if (sign * f < 1.0) violators[k].emplace_back(i, sign);
        }
      }
      for (std::size_t k = 0; k < c; ++k) {
        w[k].Shrink(1.0 - eta * sgd.l2_penalty);
        const double step = eta * inv_b / w[k].scale;
        for (const auto& [i, sign] : violators[k]) {
          for (const auto& [j, v] : x[i].entries) {
            w[k].raw[j] += step * sign * v;
          }
          bias[k] += eta * inv_b * sign;
        }
      }
    }
    std::vector<double> flat;
    flat.reserve(c * d);
    for (const auto& wk : w) {
      auto m = wk.Materialize();
      flat.insert(flat.end(), m.begin(), m.end());
    }
    clf.loss_history.push_back(
        HingeObjective(flat, bias, x, y, sgd.l2_penalty, c, d));
    if (epoch + 1 == sgd.epochs) clf.weights = std::move(flat);
  }
  clf.bias = std::move(bias);
}

}  // namespace

std::string_view ToString(Algorithm a) {
  switch (a) {
    case Algorithm::kDummy: return "dummy";
    case Algorithm::kNaiveBayes: return "nb";
    case Algorithm::kLogisticRegression: return "lr";
    case Algorithm::kLinearSvm: return "svm";
  }
  return "?";
}

std::optional<Algorithm> ParseAlgorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::kDummy, Algorithm::kNaiveBayes,
                      Algorithm::kLogisticRegression, Algorithm::kLinearSvm}) {
    if (ToString(a) == s) return a;
  }
  return std::nullopt;
}

void TrainConfig::Validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidArgumentError("test_fraction must lie in (0, 1)");
  }
  if (!(sgd.learning_rate > 0)) {
    throw InvalidArgumentError("learning_rate must be > 0");
  }
  if (sgd.epochs < 1) throw InvalidArgumentError("epochs must be >= 1");
  if (!(sgd.l2_penalty >= 0)) {
    throw InvalidArgumentError("l2_penalty must be >= 0");
  }
  if (sgd.batch_size < 1) throw InvalidArgumentError("batch_size must be >= 1");
}

std::string TrainConfig::Name() const {
  std::string name;
  switch (algorithm) {
    case Algorithm::kDummy: return "D";
    case Algorithm::kNaiveBayes: name = "NB"; break;
    case Algorithm::kLogisticRegression: name = "LR"; break;
    case Algorithm::kLinearSvm: name = "SVM"; break;
  }
  const char* w2v = embedding_source == EmbeddingSource::kPretrained
                        ? "pre-trained w2v features"
                        : "original w2v features";
  switch (feature_set) {
    case FeatureSet::kUnigram: break;
    case FeatureSet::kUnigramPlusEmbedding: name += std::string(" + ") + w2v; break;
    case FeatureSet::kUnigramPlusLexicon: name += " + lexicon"; break;
    case FeatureSet::kEmbeddingOnly:
      name += std::string(" (") + w2v + " only)";
      break;
  }
  return name;
}

std::size_t TrainedClassifier::ClassIndex(CapCode code) const {
  auto it = std::lower_bound(classes.begin(), classes.end(), code);
  if (it == classes.end() || *it != code) {
    throw IndexError(static_cast<std::size_t>(code.value()), classes.size());
  }
  return static_cast<std::size_t>(it - classes.begin());
}

nlohmann::json TrainedClassifier::ToJson() const {
  std::vector<int> codes;
  for (CapCode c : classes) codes.push_back(c.value());
  nlohmann::json j{{"format_version", kFormatVersion},
                   {"algorithm", ToString(algorithm)},
                   {"classes", codes},
                   {"dim", dim}};
  switch (algorithm) {
    case Algorithm::kDummy:
      j["prior"] = prior;
      j["seed"] = seed;
      break;
    case Algorithm::kNaiveBayes:
      j["log_prior"] = log_prior;
      j["log_likelihood"] = log_likelihood;
      j["smoothing"] = smoothing;
      break;
    case Algorithm::kLogisticRegression:
    case Algorithm::kLinearSvm:
      j["weights"] = weights;
      j["bias"] = bias;
      break;
  }
  return j;
}

TrainedClassifier TrainedClassifier::FromJson(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw SchemaError(0, "unsupported classifier format_version");
  }
  TrainedClassifier clf;
  auto algo = ParseAlgorithm(j.at("algorithm").get<std::string>());
  if (!algo) throw SchemaError(0, "unknown algorithm");
  clf.algorithm = *algo;
  for (int c : j.at("classes").get<std::vector<int>>()) {
    clf.classes.emplace_back(c);
  }
  clf.dim = j.at("dim").get<std::size_t>();
  const std::size_t c = clf.classes.size();
  bool ok = c > 0 && std::is_sorted(clf.classes.begin(), clf.classes.end()) &&
            std::adjacent_find(clf.classes.begin(), clf.classes.end()) ==
                clf.classes.end();
  switch (clf.algorithm) {
    case Algorithm::kDummy:
      clf.prior = j.at("prior").get<std::vector<double>>();
      clf.seed = j.at("seed").get<std::uint64_t>();
      ok = ok && clf.prior.size() == c;
      break;
    case Algorithm::kNaiveBayes:
      clf.log_prior = j.at("log_prior").get<std::vector<double>>();
      clf.log_likelihood = j.at("log_likelihood").get<std::vector<double>>();
      clf.smoothing = j.at("smoothing").get<double>();
      ok = ok && clf.log_prior.size() == c &&
           clf.log_likelihood.size() == c * clf.dim;
      break;
    case Algorithm::kLogisticRegression:
    case Algorithm::kLinearSvm:
      clf.weights = j.at("weights").get<std::vector<double>>();
      clf.bias = j.at("bias").get<std::vector<double>>();
      ok = ok && clf.weights.size() == c * clf.dim && clf.bias.size() == c;
      break;
  }
  if (!ok) throw DimensionMismatchError("classifier parameters are inconsistent");
  return clf;
}

TrainedClassifier Train(const TrainConfig& config, const FeatureMatrix& x,
                        std::span<const CapCode> labels) {
  config.Validate();
  CheckRows(x, labels.size());

  TrainedClassifier clf;
  clf.algorithm = config.algorithm;
  clf.dim = x.front().dim;
  clf.classes.assign(labels.begin(), labels.end());
  std::sort(clf.classes.begin(), clf.classes.end());
  clf.classes.erase(std::unique(clf.classes.begin(), clf.classes.end()),
                    clf.classes.end());
  std::vector<std::size_t> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    y[i] = clf.ClassIndex(labels[i]);
  }

  switch (config.algorithm) {
    case Algorithm::kDummy: {
      clf.prior.assign(clf.classes.size(), 0.0);
      for (std::size_t k : y) clf.prior[k] += 1.0;
      for (double& p : clf.prior) p /= static_cast<double>(y.size());
      clf.seed = config.seed;
      break;
    }
    case Algorithm::kNaiveBayes:
      TrainNaiveBayes(config, x, y, clf);
      break;
    case Algorithm::kLogisticRegression:
      TrainLogistic(config, x, y, clf);
      break;
    case Algorithm::kLinearSvm:
      TrainSvm(config, x, y, clf);
      break;
  }
  return clf;
}

double Prediction::score() const { return scores.at(index); }

void Softmax(std::span<double> z) {
  if (z.empty()) return;
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

Prediction Predict(const TrainedClassifier& clf, const SparseVector& x,
                   std::uint64_t draw) {
  if (x.dim != clf.dim) {
    throw DimensionMismatchError("feature dimension " + std::to_string(x.dim) +
                                 " != trained dimension " +
                                 std::to_string(clf.dim));
  }
  const std::size_t c = clf.classes.size();
  Prediction pred;
  pred.scores.resize(c);
  switch (clf.algorithm) {
    case Algorithm::kDummy: {
      pred.scores = clf.prior;
      Rng rng(clf.seed ^ Rng::Mix(draw));
      const double u = rng.Uniform();
      double acc = 0;
      pred.index = c - 1;
      for (std::size_t k = 0; k < c; ++k) {
        acc += clf.prior[k];
        if (u < acc) {
          pred.index = k;
          break;
        }
      }
      pred.code = clf.classes[pred.index];
      return pred;
    }
    case Algorithm::kNaiveBayes:
      for (std::size_t k = 0; k < c; ++k) {
        pred.scores[k] = clf.log_prior[k] +
                         Dot(&clf.log_likelihood[k * clf.dim], x);
      }
      Softmax(pred.scores);
      break;
    case Algorithm::kLogisticRegression:
      for (std::size_t k = 0; k < c; ++k) {
        pred.scores[k] = Dot(&clf.weights[k * clf.dim], x) + clf.bias[k];
      }
      Softmax(pred.scores);
      break;
    case Algorithm::kLinearSvm:
      for (std::size_t k = 0; k < c; ++k) {
        pred.scores[k] = Dot(&clf.weights[k * clf.dim], x) + clf.bias[k];
      }
      break;
  }
  pred.index = ArgMax(pred.scores);
  pred.code = clf.classes[pred.index];
  return pred;
}

std::vector<Prediction> PredictBatch(const TrainedClassifier& clf,
                                     const FeatureMatrix& x) {
  std::vector<Prediction> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.push_back(Predict(clf, x[i], i));
  }
  return out;
}

EvalReport ScorePredictions(std::span<const CapCode> truth,
                            std::span<const CapCode> predicted) {
  if (truth.size() != predicted.size()) {
    throw LengthMismatchError(truth.size(), predicted.size());
  }
  EvalReport report;
  report.n = truth.size();
  std::vector<CapCode> codes(truth.begin(), truth.end());
  codes.insert(codes.end(), predicted.begin(), predicted.end());
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  const std::size_t c = codes.size();
  auto idx = [&](CapCode code) {
    return static_cast<std::size_t>(
        std::lower_bound(codes.begin(), codes.end(), code) - codes.begin());
  };
  report.confusion.assign(c, std::vector<std::size_t>(c, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++report.confusion[idx(truth[i])][idx(predicted[i])];
    if (truth[i] == predicted[i]) ++correct;
  }
  if (report.n == 0) return report;
  report.accuracy = static_cast<double>(correct) / static_cast<double>(report.n);

  for (std::size_t k = 0; k < c; ++k) {
    std::size_t tp = report.confusion[k][k], col = 0, row = 0;
    for (std::size_t j = 0; j < c; ++j) {
      row += report.confusion[k][j];
      col += report.confusion[j][k];
    }
    ClassScores s;
    s.code = codes[k];
    s.support = row;
    s.precision = col ? static_cast<double>(tp) / static_cast<double>(col) : 0;
    s.recall = row ? static_cast<double>(tp) / static_cast<double>(row) : 0;
    s.f1 = s.precision + s.recall > 0
               ? 2 * s.precision * s.recall / (s.precision + s.recall)
               : 0;
    report.per_class.push_back(s);

    const double w = static_cast<double>(row) / static_cast<double>(report.n);
    report.macro_precision += s.precision / static_cast<double>(c);
    report.macro_recall += s.recall / static_cast<double>(c);
    report.macro_f1 += s.f1 / static_cast<double>(c);
    report.weighted_precision += w * s.precision;
    report.weighted_recall += w * s.recall;
    report.weighted_f1 += w * s.f1;
  }
  return report;
}

EvalReport Evaluate(const TrainedClassifier& clf, const FeatureMatrix& x,
                    std::span<const CapCode> labels) {
  if (x.size() != labels.size()) {
    throw LengthMismatchError(x.size(), labels.size());
  }
  std::vector<CapCode> predicted;
  predicted.reserve(x.size());
  for (const Prediction& p : PredictBatch(clf, x)) predicted.push_back(p.code);
  return ScorePredictions(labels, predicted);
}

double SoftmaxObjective(const LinearParams& params, const FeatureMatrix& x,
                        std::span<const std::size_t> label_index, double l2,
                        LinearParams* grad) {
  const std::size_t c = params.classes, d = params.dim;
  if (params.weights.size() != c * d || params.bias.size() != c) {
    throw DimensionMismatchError("linear parameter shapes are inconsistent");
  }
  if (x.size() != label_index.size()) {
    throw LengthMismatchError(x.size(), label_index.size());
  }
  if (grad != nullptr) {
    grad->classes = c;
    grad->dim = d;
    grad->weights.assign(c * d, 0.0);
    grad->bias.assign(c, 0.0);
  }
  const double inv_n = x.empty() ? 0.0 : 1.0 / static_cast<double>(x.size());
  std::vector<double> z(c);
  double loss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < c; ++k) {
      z[k] = Dot(&params.weights[k * d], x[i]) + params.bias[k];
    }
    const double m = *std::max_element(z.begin(), z.end());
    double sum = 0;
    for (double v : z) sum += std::exp(v - m);
    const double log_norm = m + std::log(sum);
    loss += (log_norm - z[label_index[i]]) * inv_n;
    if (grad != nullptr) {
      for (std::size_t k = 0; k < c; ++k) {
        const double r =
            std::exp(z[k] - log_norm) - (k == label_index[i] ? 1.0 : 0.0);
        grad->bias[k] += r * inv_n;
        for (const auto& [j, v] : x[i].entries) {
          grad->weights[k * d + j] += r * v * inv_n;
        }
      }
    }
  }
  double norm = 0;
  for (std::size_t t = 0; t < params.weights.size(); ++t) {
    norm += params.weights[t] * params.weights[t];
    if (grad != nullptr) grad->weights[t] += l2 * params.weights[t];
  }
  return loss + 0.5 * l2 * norm;
}

}  // namespace polagenda
