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

#include "polagenda/pipeline.h"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include "polagenda/classifier_pipeline.h"
#include "polagenda/codebook.h"
#include "polagenda/corpus.h"
#include "polagenda/csv.h"
#include "polagenda/errors.h"
#include "polagenda/evaluate.h"
#include "polagenda/preprocess.h"

namespace polagenda {

namespace fs = std::filesystem;

namespace {

const char* const kPathKeys[] = {"tweets",   "accounts",   "codebook",
                                 "labeled",  "labelmap",   "embeddings",
                                 "lexicon",  "reference",  "out_dir"};

std::string OutPath(const RunConfig& c, std::string_view name) {
  return (fs::path(c.out_dir) / name).string();
}

void EnsureOutDir(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw IoError(c.out_dir);
}

// A file produced by an earlier stage or supplied as data.
std::string RequireData(const std::string& path, std::string_view what) {
  if (path.empty()) {
    throw MissingDataError(std::string(what) + " (not configured)");
  }
  if (!fs::exists(path)) throw MissingDataError(path);
  return path;
}

std::string RequireConfigured(const std::string& path, std::string_view key) {
  if (path.empty()) {
    throw InvalidArgumentError("config key '" + std::string(key) +
                               "' is required for this command");
  }
  return path;
}

std::vector<std::string> StoplistPaths(const RunConfig& c) {
  if (!c.stoplists.empty()) return c.stoplists;
  const fs::path dir = fs::path(POLAGENDA_DATA_DIR) / "stoplists";
  return {(dir / "english.txt").string(), (dir / "spanish.txt").string()};
}

CapCodebook Codebook(const RunConfig& c) {
  return c.codebook.empty() ? CapCodebook::Default()
                            : CapCodebook::Load(c.codebook);
}

void WriteLabeledTokens(const std::string& path,
                        std::span<const LabeledDoc> docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  for (const LabeledDoc& d : docs) {
    nlohmann::json obj{{"tweet_id", d.doc.tweet_id},
                       {"tokens", d.doc.tokens},
                       {"code", d.code.value()}};
    out << obj.dump() << '\n';
  }
}

std::vector<LabeledDoc> LoadLabeledTokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path);
  std::vector<LabeledDoc> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      LabeledDoc d;
      d.doc.tweet_id = j.at("tweet_id").get<std::string>();
      d.doc.tokens = j.at("tokens").get<std::vector<std::string>>();
      d.code = CapCode(j.at("code").get<int>());
      if (!IsLabelCode(d.code)) throw SchemaError(line_no, "bad code");
      out.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(line_no, e.what());
    }
  }
  return out;
}

std::vector<LabeledDoc> Rebalance(std::vector<LabeledDoc> docs,
                                  const RunConfig& c, std::ostream& log) {
  if (c.rebalance_code < 0) return docs;
  std::vector<LabeledTweet> shells;
  shells.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    LabeledTweet t;
    t.tweet.id = std::to_string(i);
    t.code = docs[i].code;
    shells.push_back(std::move(t));
  }
  std::vector<LabeledTweet> kept =
      RebalanceSubsample(shells, CapCode(c.rebalance_code),
                         c.rebalance_target, c.seed);
  std::vector<LabeledDoc> out;
  out.reserve(kept.size());
  for (const LabeledTweet& t : kept) {
    out.push_back(std::move(docs[std::stoul(t.tweet.id)]));
  }
  log << "rebalanced code " << c.rebalance_code << " to "
      << c.rebalance_target << ": " << docs.size() << " -> " << out.size()
      << " labeled documents\n";
  return out;
}

nlohmann::json ShareJson(std::span<const CapCode> codes) {
  return {{"uninterpretable", UninterpretableShare(codes)},
          {"non_cap", NonCapShare(codes)},
          {"cap", CapShare(codes)},
          {"n", codes.size()}};
}

void WriteJson(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  out << j.dump(2) << '\n';
}

std::vector<CodedTweet> AsCoded(std::span<const MappedAssignment> mapped,
                                bool second) {
  std::vector<CodedTweet> out;
  out.reserve(mapped.size());
  for (const MappedAssignment& m : mapped) {
    out.push_back({m.tweet_id, second ? m.code2 : m.code1, 0.0});
  }
  return out;
}

template <typename T>
T Get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("config key '") + key +
                               "': " + e.what());
  }
}

}  // namespace

nlohmann::json RunConfig::Defaults() {
  RunConfig c;
  return c.ToJson();
}

nlohmann::json RunConfig::ToJson() const {
  nlohmann::json j;
  j["tweets"] = tweets;
  j["accounts"] = accounts;
  j["codebook"] = codebook;
  j["stoplists"] = stoplists;
  j["labeled"] = labeled;
  j["labelmap"] = labelmap;
  j["embeddings"] = embeddings;
  j["lexicon"] = lexicon;
  j["reference"] = reference;
  j["out_dir"] = out_dir;
  j["max_repeat"] = max_repeat;
  j["min_token_len"] = min_token_len;
  j["originals_only"] = originals_only;
  j["algorithm"] = ToString(train.algorithm);
  j["feature_set"] = ToString(train.feature_set);
  j["embedding_source"] = train.embedding_source == EmbeddingSource::kPretrained
                              ? "pretrained"
                              : "trained";
  j["test_fraction"] = train.test_fraction;
  j["learning_rate"] = train.sgd.learning_rate;
  j["epochs"] = train.sgd.epochs;
  j["l2_penalty"] = train.sgd.l2_penalty;
  j["batch_size"] = train.sgd.batch_size;
  j["nb_smoothing"] = train.nb_smoothing;
  j["min_df"] = min_df;
  j["sgns_dim"] = sgns.dim;
  j["sgns_window"] = sgns.window;
  j["sgns_negatives"] = sgns.negatives;
  j["sgns_epochs"] = sgns.epochs;
  j["sgns_learning_rate"] = sgns.learning_rate;
  j["sgns_min_count"] = sgns.min_count;
  j["rebalance_code"] = rebalance_code;
  j["rebalance_target"] = rebalance_target;
  j["variants"] = variants;
  j["k"] = lda.num_topics;
  j["alpha"] = lda.alpha ? nlohmann::json(*lda.alpha) : nlohmann::json();
  j["beta"] = lda.beta;
  j["iterations"] = lda.iterations;
  j["burn_in"] = lda.burn_in;
  j["lda_min_df"] = lda_min_df;
  j["sweep"] = sweep;
  j["heldout_fraction"] = heldout_fraction;
  j["top_n"] = top_n;
  j["npmi_window"] = npmi_window;
  j["fold_in_sweeps"] = fold_in_sweeps;
  j["group_by"] = ToString(group_by);
  j["feature_top_n"] = feature_top_n;
  j["seed"] = seed;
  return j;
}

RunConfig RunConfig::FromJson(const nlohmann::json& in) {
  if (!in.is_object()) throw InvalidArgumentError("config must be an object");
  nlohmann::json j = Defaults();
  for (const auto& [key, value] : in.items()) {
    if (!j.contains(key)) {
      throw InvalidArgumentError("unknown config key '" + key + "'");
    }
    j[key] = value;
  }
  RunConfig c;
  c.tweets = Get<std::string>(j, "tweets");
  c.accounts = Get<std::string>(j, "accounts");
  c.codebook = Get<std::string>(j, "codebook");
  c.stoplists = Get<std::vector<std::string>>(j, "stoplists");
  c.labeled = Get<std::string>(j, "labeled");
  c.labelmap = Get<std::string>(j, "labelmap");
  c.embeddings = Get<std::string>(j, "embeddings");
  c.lexicon = Get<std::string>(j, "lexicon");
  c.reference = Get<std::string>(j, "reference");
  c.out_dir = Get<std::string>(j, "out_dir");
  c.max_repeat = Get<int>(j, "max_repeat");
  c.min_token_len = Get<int>(j, "min_token_len");
  c.originals_only = Get<bool>(j, "originals_only");

  auto algo = ParseAlgorithm(Get<std::string>(j, "algorithm"));
  if (!algo) throw InvalidArgumentError("unknown algorithm");
  c.train.algorithm = *algo;
  auto fset = ParseFeatureSet(Get<std::string>(j, "feature_set"));
  if (!fset) throw InvalidArgumentError("unknown feature_set");
  c.train.feature_set = *fset;
  const std::string source = Get<std::string>(j, "embedding_source");
  if (source != "pretrained" && source != "trained") {
    throw InvalidArgumentError("embedding_source must be pretrained or trained");
  }
  c.train.embedding_source = source == "pretrained"
                                 ? EmbeddingSource::kPretrained
                                 : EmbeddingSource::kTrained;
  c.train.test_fraction = Get<double>(j, "test_fraction");
  c.train.sgd.learning_rate = Get<double>(j, "learning_rate");
  c.train.sgd.epochs = Get<std::size_t>(j, "epochs");
  c.train.sgd.l2_penalty = Get<double>(j, "l2_penalty");
  c.train.sgd.batch_size = Get<std::size_t>(j, "batch_size");
  c.train.nb_smoothing = Get<double>(j, "nb_smoothing");
  c.min_df = Get<std::size_t>(j, "min_df");
  c.sgns.dim = Get<std::size_t>(j, "sgns_dim");
  c.sgns.window = Get<std::size_t>(j, "sgns_window");
  c.sgns.negatives = Get<std::size_t>(j, "sgns_negatives");
  c.sgns.epochs = Get<std::size_t>(j, "sgns_epochs");
  c.sgns.learning_rate = Get<double>(j, "sgns_learning_rate");
  c.sgns.min_count = Get<std::size_t>(j, "sgns_min_count");
  c.rebalance_code = Get<int>(j, "rebalance_code");
  c.rebalance_target = Get<std::size_t>(j, "rebalance_target");
  c.variants = Get<bool>(j, "variants");

  c.lda.num_topics = Get<int>(j, "k");
  if (!j.at("alpha").is_null()) c.lda.alpha = Get<double>(j, "alpha");
  c.lda.beta = Get<double>(j, "beta");
  c.lda.iterations = Get<int>(j, "iterations");
  c.lda.burn_in = Get<int>(j, "burn_in");
  c.lda_min_df = Get<std::size_t>(j, "lda_min_df");
  c.sweep = Get<std::vector<int>>(j, "sweep");
  c.heldout_fraction = Get<double>(j, "heldout_fraction");
  c.top_n = Get<std::size_t>(j, "top_n");
  c.npmi_window = Get<std::size_t>(j, "npmi_window");
  c.fold_in_sweeps = Get<int>(j, "fold_in_sweeps");
  auto group = ParseGroupBy(Get<std::string>(j, "group_by"));
  if (!group) throw InvalidArgumentError("group_by must be party, chamber or gender");
  c.group_by = *group;
  c.feature_top_n = Get<std::size_t>(j, "feature_top_n");
  c.SetSeed(Get<std::uint64_t>(j, "seed"));

  c.train.Validate();
  c.lda.Validate();
  return c;
}

void RunConfig::SetSeed(std::uint64_t s) {
  seed = s;
  train.seed = s;
  sgns.seed = s;
  lda.seed = s;
}

nlohmann::json LoadConfigJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path);
  nlohmann::json file;
  try {
    file = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError("config " + path + ": " + e.what());
  }
  if (!file.is_object()) {
    throw InvalidArgumentError("config " + path + " must hold an object");
  }
  nlohmann::json j = RunConfig::Defaults();
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (base / p).lexically_normal().string();
  };
  for (const auto& [key, value] : file.items()) {
    if (!j.contains(key)) {
      throw InvalidArgumentError("unknown config key '" + key + "' in " +
                                 path);
    }
    j[key] = value;
  }
  for (const char* key : kPathKeys) {
    if (file.contains(key) && j[key].is_string()) {
      j[key] = resolve(j[key].get<std::string>());
    }
  }
  if (file.contains("stoplists") && j["stoplists"].is_array()) {
    for (auto& p : j["stoplists"]) {
      if (p.is_string()) p = resolve(p.get<std::string>());
    }
  }
  return j;
}

void ApplyOverride(nlohmann::json& config, std::string_view raw_key,
                   const std::string& value) {
  std::string key(raw_key);
  for (char& ch : key) {
    if (ch == '-') ch = '_';
  }
  const nlohmann::json defaults = RunConfig::Defaults();
  if (!defaults.contains(key)) {
    throw InvalidArgumentError("unknown config key '" + key + "'");
  }
  const nlohmann::json& d = defaults.at(key);
  auto fail = [&] {
    return InvalidArgumentError("bad value for '" + key + "': '" + value +
                                "'");
  };
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::logic_error&) {
      throw fail();
    }
    if (used != s.size()) throw fail();
    return v;
  };
  if (d.is_string()) {
    config[key] = value;
  } else if (d.is_boolean()) {
    if (value == "true" || value == "1") {
      config[key] = true;
    } else if (value == "false" || value == "0") {
      config[key] = false;
    } else {
      throw fail();
    }
  } else if (d.is_number_integer()) {
    const long long v = to_int(value);
    if (d.is_number_unsigned() && v < 0) throw fail();
    config[key] = v;
  } else if (d.is_number() || d.is_null()) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::logic_error&) {
      throw fail();
    }
    if (used != value.size()) throw fail();
    config[key] = v;
  } else if (d.is_array()) {
    nlohmann::json list = nlohmann::json::array();
    std::size_t start = 0;
    while (start <= value.size() && !value.empty()) {
      std::size_t end = value.find(',', start);
      if (end == std::string::npos) end = value.size();
      std::string item = value.substr(start, end - start);
      if (key == "sweep") {
        list.push_back(to_int(item));
      } else {
        list.push_back(item);
      }
      start = end + 1;
    }
    config[key] = list;
  }
}

void RunPreprocess(const RunConfig& c, std::ostream& log) {
  RequireConfigured(c.tweets, "tweets");
  TokenPipeline pipeline(LoadStoplist(StoplistPaths(c)), c.max_repeat,
                         c.min_token_len);
  EnsureOutDir(c);

  Corpus tweets = LoadTweets(c.tweets);
  const std::size_t loaded = tweets.size();
  if (c.originals_only) tweets = FilterOriginals(tweets);
  PreprocessResult result = PreprocessCorpus(pipeline, tweets);
  WriteTokenized(OutPath(c, files::kTokens), result.docs);
  {
    std::ofstream out(OutPath(c, files::kDropped), std::ios::binary);
    if (!out) throw IoError(OutPath(c, files::kDropped));
    csv::WriteRow(out, {"tweet_id", "reason"});
    for (const std::string& id : result.dropped) {
      csv::WriteRow(out, {id, "no tokens after preprocessing"});
    }
  }
  log << "preprocess: " << loaded << " tweets, " << tweets.size()
      << " originals, " << result.dropped.size()
      << " empty after preprocessing\n";

  if (!c.labeled.empty()) {
    std::vector<LabeledTweet> labeled = LoadLabeledTweets(c.labeled);
    if (c.originals_only) labeled = FilterOriginals(labeled);
    Corpus plain;
    plain.reserve(labeled.size());
    for (const LabeledTweet& t : labeled) plain.push_back(t.tweet);
    PreprocessResult lr = PreprocessCorpus(pipeline, plain);
    std::vector<LabeledDoc> docs;
    docs.reserve(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      docs.push_back({std::move(lr.docs[i]), labeled[i].code});
    }
    WriteLabeledTokens(OutPath(c, files::kLabeledTokens), docs);
    log << "preprocess: " << docs.size() << " labeled tweets, "
        << lr.dropped.size() << " empty after preprocessing\n";
  }
}

void RunTrainSupervised(const RunConfig& c, std::ostream& log) {
  const std::string labeled_path =
      RequireData(OutPath(c, files::kLabeledTokens), "labeled tokens");
  const std::string tokens_path =
      RequireData(OutPath(c, files::kTokens), "tokenized corpus");

  std::vector<LabeledDoc> labeled;
  for (LabeledDoc& d : LoadLabeledTokens(labeled_path)) {
    if (!d.doc.tokens.empty()) labeled.push_back(std::move(d));
  }
  labeled = Rebalance(std::move(labeled), c, log);

  std::optional<EmbeddingTable> pretrained;
  std::optional<Lexicon> lexicon;
  if (!c.embeddings.empty()) pretrained = LoadEmbeddings(c.embeddings);
  if (!c.lexicon.empty()) lexicon = LoadLexicon(c.lexicon);
  FeatureResources resources;
  resources.pretrained = pretrained ? &*pretrained : nullptr;
  resources.lexicon = lexicon ? &*lexicon : nullptr;
  resources.sgns = c.sgns;
  resources.min_df = c.min_df;

  EnsureOutDir(c);
  if (c.variants) {
    if (!pretrained) RequireConfigured(c.embeddings, "embeddings");
    if (!lexicon) RequireConfigured(c.lexicon, "lexicon");
    std::vector<TrainConfig> rows = VariantConfigs(c.train);
    std::vector<VariantRow> table = RunVariantMatrix(labeled, rows, resources);
    WriteVariantCsv(OutPath(c, files::kVariants), table);
    for (const VariantRow& r : table) {
      log << "variants: " << r.config.Name() << " f1 "
          << csv::FormatFixed(r.report.weighted_f1, 3) << '\n';
    }
  }

  std::vector<CapCode> codes;
  codes.reserve(labeled.size());
  for (const LabeledDoc& d : labeled) codes.push_back(d.code);
  SplitIndices split =
      StratifiedSplitIndices(codes, c.train.test_fraction, c.seed);
  std::vector<LabeledDoc> train, test;
  for (std::size_t i : split.train) train.push_back(labeled[i]);
  for (std::size_t i : split.test) test.push_back(labeled[i]);
  SupervisedModel model = TrainModel(c.train, train, resources);
  model.Save(OutPath(c, files::kModel));
  if (!test.empty()) {
    EvalReport report = EvaluateModel(model, test);
    WriteEvalCsv(OutPath(c, files::kEval), report);
    log << "train-supervised: " << c.train.Name() << " on " << train.size()
        << " documents, weighted f1 "
        << csv::FormatFixed(report.weighted_f1, 3) << " on " << test.size()
        << '\n';
  }

  std::vector<TokenizedDoc> docs = LoadTokenized(tokens_path);
  std::vector<SupervisedModel::Labeled> labels = model.Label(docs);
  std::vector<CodedTweet> predictions;
  predictions.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    predictions.push_back({docs[i].tweet_id, labels[i].code, labels[i].score});
  }
  WritePredictionsCsv(OutPath(c, files::kPredictions), predictions);
  log << "train-supervised: labeled " << predictions.size() << " tweets\n";
}

void RunFitLda(const RunConfig& c, std::ostream& log) {
  const std::string tokens_path =
      RequireData(OutPath(c, files::kTokens), "tokenized corpus");
  std::vector<TokenizedDoc> docs = LoadTokenized(tokens_path);
  LdaCorpus corpus = MakeLdaCorpus(docs, c.lda_min_df);
  LdaState state = FitLda(c.lda, corpus);
  EnsureOutDir(c);
  state.Save(OutPath(c, files::kLdaState));
  WriteAssignmentsCsv(OutPath(c, files::kAssignments),
                      AssignTopics(state, corpus.excluded));
  WriteTopicsCsv(OutPath(c, files::kTopics), AllTopWords(state, c.top_n));
  log << "fit-lda: K=" << c.lda.num_topics << " on " << corpus.docs.size()
      << " documents (" << corpus.excluded.size() << " excluded), vocabulary "
      << corpus.vocab.size() << '\n';
}

void RunSweepK(const RunConfig& c, std::ostream& log) {
  const std::string tokens_path =
      RequireData(OutPath(c, files::kTokens), "tokenized corpus");
  std::vector<TokenizedDoc> docs = LoadTokenized(tokens_path);
  SweepOptions options;
  options.k_values = c.sweep;
  options.heldout_fraction = c.heldout_fraction;
  options.min_df = c.lda_min_df;
  options.top_n = c.top_n;
  options.npmi_window = c.npmi_window;
  options.fold_in_sweeps = c.fold_in_sweeps;
  std::vector<SweepResult> results = SweepK(docs, c.lda, options);
  EnsureOutDir(c);
  const fs::path dir = fs::path(c.out_dir) / "sweep";
  fs::create_directories(dir);
  for (const SweepResult& r : results) {
    r.state.Save(
        (dir / ("lda_state_k" + std::to_string(r.k) + ".json")).string());
    log << "sweep-k: K=" << r.k << " perplexity "
        << csv::FormatFixed(r.perplexity, 3) << " mean NPMI "
        << csv::FormatFixed(r.mean_npmi, 4) << '\n';
  }
  WriteSweepCsv(OutPath(c, files::kSweep), results);
}

void RunCoherence(const RunConfig& c, std::ostream& log) {
  LdaState state =
      LdaState::Load(RequireData(OutPath(c, files::kLdaState), "LDA state"));
  const std::string ref_path =
      c.reference.empty() ? OutPath(c, files::kTokens) : c.reference;
  std::vector<TokenizedDoc> reference =
      LoadTokenized(RequireData(ref_path, "reference corpus"));
  std::vector<TopicSummary> topics = AllTopWords(state, c.top_n);
  CoherenceResult result = NpmiCoherence(topics, reference, c.npmi_window,
                                         1e-12, ref_path);
  EnsureOutDir(c);
  WriteCoherenceCsv(OutPath(c, files::kCoherence), result, topics);
  log << "coherence: mean NPMI " << csv::FormatFixed(result.mean, 4)
      << " over " << result.windows << " windows\n";
}

void RunCompare(const RunConfig& c, std::ostream& log) {
  std::vector<CodedTweet> su = ReadPredictionsCsv(
      RequireData(OutPath(c, files::kPredictions), "predictions"));
  std::vector<TopicAssignment> un = ReadAssignmentsCsv(
      RequireData(OutPath(c, files::kAssignments), "topic assignments"));
  LabelMap map = LoadLabelMap(RequireData(c.labelmap, "labelmap"));
  ApplyLabelMap(un, map);

  AlignedCodes aligned = AlignForComparison(su, un, map);
  nlohmann::json j{{"n", aligned.su.size()},
                   {"excluded",
                    {{"missing_pair", aligned.missing_pair},
                     {"su_not_policy", aligned.su_not_policy},
                     {"un_not_cap", aligned.un_not_cap},
                     {"unmapped_topic", aligned.unmapped_topic}}}};
  EnsureOutDir(c);
  if (aligned.su.empty()) {
    j["kappa"] = nullptr;
    WriteJson(OutPath(c, files::kKappa), j);
    log << "kappa: undefined (no comparable policy pairs)\n";
    return;
  }
  AgreementResult r = CohensKappa(aligned.su, aligned.un);
  std::vector<int> codes;
  for (CapCode code : r.codes) codes.push_back(code.value());
  j["kappa"] = r.kappa;
  j["observed"] = r.observed;
  j["expected"] = r.expected;
  j["codes"] = codes;
  j["confusion"] = r.confusion;
  WriteJson(OutPath(c, files::kKappa), j);
  log << "kappa: " << csv::FormatFixed(r.kappa, 3) << " (n=" << r.n
      << ", p_o=" << csv::FormatFixed(r.observed, 3)
      << ", p_e=" << csv::FormatFixed(r.expected, 3) << ")\n";
}

void RunReport(const RunConfig& c, std::ostream& log) {
  std::vector<CodedTweet> su = ReadPredictionsCsv(
      RequireData(OutPath(c, files::kPredictions), "predictions"));
  std::vector<TopicAssignment> un = ReadAssignmentsCsv(
      RequireData(OutPath(c, files::kAssignments), "topic assignments"));
  LabelMap map = LoadLabelMap(RequireData(c.labelmap, "labelmap"));
  std::vector<MappedAssignment> mapped = ApplyLabelMap(un, map);
  const CapCodebook codebook = Codebook(c);

  std::vector<CapCode> su_codes, un1_codes, un2_codes;
  for (const CodedTweet& t : su) su_codes.push_back(t.code);
  for (const MappedAssignment& m : mapped) {
    un1_codes.push_back(m.code1);
    un2_codes.push_back(m.code2);
  }
  EnsureOutDir(c);
  DistributionTable table =
      MakeDistributionTable(su_codes, un1_codes, un2_codes, codebook);
  WriteDistributionCsv(OutPath(c, files::kDistribution), table);
  {
    std::ofstream out(OutPath(c, files::kDistributionText), std::ios::binary);
    if (!out) throw IoError(OutPath(c, files::kDistributionText));
    out << RenderDistribution(table);
  }
  WriteJson(OutPath(c, files::kDistributionJson), DistributionToJson(table));
  WriteJson(OutPath(c, files::kShares), {{"su", ShareJson(su_codes)},
                                         {"un1", ShareJson(un1_codes)},
                                         {"un2", ShareJson(un2_codes)}});

  Corpus tweets = LoadTweets(RequireConfigured(c.tweets, "tweets"));
  AccountSet accounts = LoadAccounts(RequireConfigured(c.accounts, "accounts"));
  const std::pair<const char*, std::vector<CodedTweet>> columns[] = {
      {"su", su}, {"un1", AsCoded(mapped, false)}, {"un2", AsCoded(mapped, true)}};
  for (const auto& [name, coded] : columns) {
    GroupBreakdown b =
        MakeGroupBreakdown(coded, tweets, accounts, c.group_by, codebook);
    const std::string file = std::string("breakdown_") + name + ".csv";
    WriteBreakdownCsv(OutPath(c, file), b);
    if (!b.omitted.empty()) {
      log << "report: " << file << " omits codes with no tweets:";
      for (CapCode code : b.omitted) log << ' ' << code.value();
      log << '\n';
    }
  }

  const std::string model_path = OutPath(c, files::kModel);
  if (fs::exists(model_path)) {
    SupervisedModel model = SupervisedModel::Load(model_path);
    WriteFeatureCsv(OutPath(c, files::kFeaturesSu),
                    ClassifierFeatureTable(model.classifier, model.vocab,
                                           c.feature_top_n, codebook));
  }
  const std::string state_path = OutPath(c, files::kLdaState);
  if (fs::exists(state_path)) {
    LdaState state = LdaState::Load(state_path);
    WriteFeatureCsv(OutPath(c, files::kFeaturesUn),
                    TopicFeatureTable(state, map, c.feature_top_n, codebook));
  }
  log << "report: uninterpretable share UN1 "
      << csv::FormatFixed(UninterpretableShare(un1_codes), 3) << ", UN2 "
      << csv::FormatFixed(UninterpretableShare(un2_codes), 3)
      << "; non-CAP share SU " << csv::FormatFixed(NonCapShare(su_codes), 3)
      << ", UN1 " << csv::FormatFixed(NonCapShare(un1_codes), 3) << '\n';
}

int ExitCodeFor(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->category()) {
      case ErrorCategory::kConfig:
        return 2;
      case ErrorCategory::kData:
        return 3;
      case ErrorCategory::kInternal:
        return 4;
    }
  }
  if (dynamic_cast<const nlohmann::json::exception*>(&e) != nullptr) return 3;
  return 4;
}

}  // namespace polagenda
