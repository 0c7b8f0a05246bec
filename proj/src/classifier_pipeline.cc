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

#include "polagenda/classifier_pipeline.h"

#include <fstream>
#include <map>

#include "polagenda/csv.h"
#include "polagenda/errors.h"

namespace polagenda {

namespace {

bool NeedsEmbeddings(FeatureSet f) {
  return f == FeatureSet::kUnigramPlusEmbedding ||
         f == FeatureSet::kEmbeddingOnly;
}

std::vector<TokenizedDoc> Docs(std::span<const LabeledDoc> labeled) {
  std::vector<TokenizedDoc> docs;
  docs.reserve(labeled.size());
  for (const LabeledDoc& ld : labeled) docs.push_back(ld.doc);
  return docs;
}

std::vector<CapCode> Codes(std::span<const LabeledDoc> labeled) {
  std::vector<CapCode> codes;
  codes.reserve(labeled.size());
  for (const LabeledDoc& ld : labeled) codes.push_back(ld.code);
  return codes;
}

nlohmann::json EmbeddingsToJson(const EmbeddingTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto row = table.Row(i);
    rows.push_back({table.tokens()[i],
                    std::vector<double>(row.begin(), row.end())});
  }
  return {{"dim", table.dimension()}, {"vectors", rows}};
}

EmbeddingTable EmbeddingsFromJson(const nlohmann::json& j) {
  EmbeddingTable table(j.at("dim").get<std::size_t>());
  for (const auto& row : j.at("vectors")) {
    table.Add(row.at(0).get<std::string>(),
              row.at(1).get<std::vector<double>>());
  }
  return table;
}

nlohmann::json TrainConfigToJson(const TrainConfig& c) {
  return {{"algorithm", ToString(c.algorithm)},
          {"feature_set", ToString(c.feature_set)},
          {"embedding_source", c.embedding_source == EmbeddingSource::kPretrained
                                   ? "pretrained"
                                   : "trained"},
          {"test_fraction", c.test_fraction},
          {"seed", c.seed},
          {"learning_rate", c.sgd.learning_rate},
          {"epochs", c.sgd.epochs},
          {"l2_penalty", c.sgd.l2_penalty},
          {"batch_size", c.sgd.batch_size},
          {"nb_smoothing", c.nb_smoothing}};
}

TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  TrainConfig c;
  auto algo = ParseAlgorithm(j.at("algorithm").get<std::string>());
  auto fs = ParseFeatureSet(j.at("feature_set").get<std::string>());
  if (!algo || !fs) throw SchemaError(0, "bad algorithm or feature_set");
  c.algorithm = *algo;
  c.feature_set = *fs;
  c.embedding_source = j.at("embedding_source").get<std::string>() ==
                               "pretrained"
                           ? EmbeddingSource::kPretrained
                           : EmbeddingSource::kTrained;
  c.test_fraction = j.at("test_fraction").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.sgd.learning_rate = j.at("learning_rate").get<double>();
  c.sgd.epochs = j.at("epochs").get<std::size_t>();
  c.sgd.l2_penalty = j.at("l2_penalty").get<double>();
  c.sgd.batch_size = j.at("batch_size").get<std::size_t>();
  c.nb_smoothing = j.at("nb_smoothing").get<double>();
  return c;
}

}  // namespace

CountScaling ScalingFor(Algorithm a) {
  return a == Algorithm::kNaiveBayes ? CountScaling::kRaw
                                     : CountScaling::kSublinear;
}

FeatureAssembler SupervisedModel::Assembler() const {
  return FeatureAssembler(config.feature_set, ScalingFor(config.algorithm),
                          &vocab, embeddings ? &*embeddings : nullptr,
                          lexicon ? &*lexicon : nullptr);
}

std::vector<SupervisedModel::Labeled> SupervisedModel::Label(
    std::span<const TokenizedDoc> docs) const {
  FeatureAssembler assembler = Assembler();
  std::vector<Labeled> out;
  out.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].tokens.empty()) {
      out.push_back({kNotPolicy, 0.0, true});
      continue;
    }
    Prediction p = Predict(classifier, assembler.Build(docs[i]), i);
    out.push_back({p.code, p.score(), false});
  }
  return out;
}

nlohmann::json SupervisedModel::ToJson() const {
  nlohmann::json j{{"format_version", kFormatVersion},
                   {"config", TrainConfigToJson(config)},
                   {"vocab", vocab.ToJson()},
                   {"classifier", classifier.ToJson()}};
  if (embeddings) j["embeddings"] = EmbeddingsToJson(*embeddings);
  if (lexicon) j["lexicon"] = lexicon->ToJson();
  return j;
}

SupervisedModel SupervisedModel::FromJson(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw SchemaError(0, "unsupported model format_version");
  }
  SupervisedModel m;
  m.config = TrainConfigFromJson(j.at("config"));
  m.vocab = Vocabulary::FromJson(j.at("vocab"));
  m.classifier = TrainedClassifier::FromJson(j.at("classifier"));
  if (j.contains("embeddings")) {
    m.embeddings = EmbeddingsFromJson(j.at("embeddings"));
  }
  if (j.contains("lexicon")) m.lexicon = Lexicon::FromJson(j.at("lexicon"));
  return m;
}

void SupervisedModel::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  out << ToJson().dump() << '\n';
}

SupervisedModel SupervisedModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path);
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(0, std::string("model file ") + path + ": " + e.what());
  }
}

SupervisedModel TrainModel(const TrainConfig& config,
                           std::span<const LabeledDoc> train,
                           const FeatureResources& resources) {
  config.Validate();
  if (train.empty()) throw EmptyClassError("empty training set");
  std::vector<TokenizedDoc> docs = Docs(train);

  SupervisedModel model;
  model.config = config;
  model.vocab = Vocabulary::Build(docs, resources.min_df);
  if (NeedsEmbeddings(config.feature_set)) {
    if (config.embedding_source == EmbeddingSource::kPretrained) {
      if (resources.pretrained == nullptr) {
        throw InvalidArgumentError("pre-trained embeddings are required");
      }
      model.embeddings = *resources.pretrained;
    } else {
      SgnsConfig sgns = resources.sgns;
      sgns.seed = config.seed;
      model.embeddings = TrainSgns(docs, sgns).table;
    }
  }
  if (config.feature_set == FeatureSet::kUnigramPlusLexicon) {
    if (resources.lexicon == nullptr) {
      throw InvalidArgumentError("a lexicon is required");
    }
    model.lexicon = *resources.lexicon;
  }

  FeatureMatrix x = model.Assembler().BuildAll(docs);
  model.classifier = Train(config, x, Codes(train));
  return model;
}

EvalReport EvaluateModel(const SupervisedModel& model,
                         std::span<const LabeledDoc> test) {
  std::vector<TokenizedDoc> docs = Docs(test);
  FeatureMatrix x = model.Assembler().BuildAll(docs);
  return Evaluate(model.classifier, x, Codes(test));
}

std::vector<TrainConfig> VariantConfigs(const TrainConfig& base) {
  std::vector<TrainConfig> rows;
  auto with = [&](Algorithm a, FeatureSet f, EmbeddingSource s) {
    TrainConfig c = base;
    c.algorithm = a;
    c.feature_set = f;
    c.embedding_source = s;
    rows.push_back(c);
  };
  const auto pre = EmbeddingSource::kPretrained;
  const auto own = EmbeddingSource::kTrained;
  with(Algorithm::kDummy, FeatureSet::kUnigram, own);
  with(Algorithm::kNaiveBayes, FeatureSet::kUnigram, own);
  for (Algorithm a : {Algorithm::kLogisticRegression, Algorithm::kLinearSvm}) {
    with(a, FeatureSet::kUnigram, own);
    with(a, FeatureSet::kUnigramPlusEmbedding, pre);
    with(a, FeatureSet::kUnigramPlusEmbedding, own);
    with(a, FeatureSet::kUnigramPlusLexicon, own);
  }
  return rows;
}

std::vector<VariantRow> RunVariantMatrix(std::span<const LabeledDoc> labeled,
                                       std::span<const TrainConfig> configs,
                                       const FeatureResources& resources) {
  if (configs.empty()) return {};
  const TrainConfig& first = configs.front();
  for (const TrainConfig& c : configs) {
    if (c.test_fraction != first.test_fraction || c.seed != first.seed) {
      throw InvalidArgumentError(
          "all table rows must share test_fraction and seed");
    }
  }
  SplitIndices split =
      StratifiedSplitIndices(Codes(labeled), first.test_fraction, first.seed);
  std::vector<LabeledDoc> train, test;
  for (std::size_t i : split.train) train.push_back(labeled[i]);
  for (std::size_t i : split.test) test.push_back(labeled[i]);
  if (test.empty()) throw EmptyClassError("test split is empty");

  // Embeddings trained on the training split are shared across rows.
  std::optional<EmbeddingTable> trained;
  FeatureResources shared = resources;

  std::vector<VariantRow> rows;
  for (const TrainConfig& config : configs) {
    if (NeedsEmbeddings(config.feature_set) &&
        config.embedding_source == EmbeddingSource::kTrained) {
      if (!trained) {
        SgnsConfig sgns = resources.sgns;
        sgns.seed = first.seed;
        trained = TrainSgns(Docs(train), sgns).table;
      }
      shared.pretrained = &*trained;
      TrainConfig as_loaded = config;
      as_loaded.embedding_source = EmbeddingSource::kPretrained;
      SupervisedModel model = TrainModel(as_loaded, train, shared);
      model.config.embedding_source = EmbeddingSource::kTrained;
      rows.push_back({config, EvaluateModel(model, test)});
      shared.pretrained = resources.pretrained;
      continue;
    }
    SupervisedModel model = TrainModel(config, train, resources);
    rows.push_back({config, EvaluateModel(model, test)});
  }
  return rows;
}

void WriteVariantCsv(const std::string& path, std::span<const VariantRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"classifier", "f1", "precision", "recall", "macro_f1",
                      "macro_precision", "macro_recall", "accuracy",
                      "n_test"});
  for (const VariantRow& row : rows) {
    const EvalReport& r = row.report;
    csv::WriteRow(out, {row.config.Name(), csv::FormatFixed(r.weighted_f1, 4),
                        csv::FormatFixed(r.weighted_precision, 4),
                        csv::FormatFixed(r.weighted_recall, 4),
                        csv::FormatFixed(r.macro_f1, 4),
                        csv::FormatFixed(r.macro_precision, 4),
                        csv::FormatFixed(r.macro_recall, 4),
                        csv::FormatFixed(r.accuracy, 4), std::to_string(r.n)});
  }
}

void WriteEvalCsv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"code", "precision", "recall", "f1", "support"});
  for (const ClassScores& s : report.per_class) {
    csv::WriteRow(out, {std::to_string(s.code.value()),
                        csv::FormatFixed(s.precision, 4),
                        csv::FormatFixed(s.recall, 4),
                        csv::FormatFixed(s.f1, 4),
                        std::to_string(s.support)});
  }
}

}  // namespace polagenda
