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

#include "polagenda/topicmodel.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <numeric>

#include "polagenda/csv.h"
#include "polagenda/errors.h"
#include "polagenda/random.h"

namespace polagenda {

void LdaConfig::Validate() const {
  if (num_topics < 1) throw InvalidArgumentError("K must be at least 1");
  if (!(Alpha() > 0) || !std::isfinite(Alpha())) {
    throw InvalidArgumentError("alpha must be positive");
  }
  if (!(beta > 0) || !std::isfinite(beta)) {
    throw InvalidArgumentError("beta must be positive");
  }
  if (burn_in < 0 || iterations <= burn_in) {
    throw InvalidArgumentError("need iterations > burn_in >= 0");
  }
}

std::size_t LdaCorpus::TotalTokens() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.size();
  return n;
}

LdaCorpus MakeLdaCorpus(std::span<const TokenizedDoc> docs,
                        std::size_t min_df) {
  return MakeLdaCorpus(docs, Vocabulary::Build(docs, min_df));
}

LdaCorpus MakeLdaCorpus(std::span<const TokenizedDoc> docs, Vocabulary vocab) {
  LdaCorpus corpus;
  corpus.vocab = std::move(vocab);
  for (const TokenizedDoc& doc : docs) {
    std::vector<std::uint32_t> ids;
    ids.reserve(doc.tokens.size());
    for (const std::string& tok : doc.tokens) {
      if (auto id = corpus.vocab.Find(tok)) ids.push_back(*id);
    }
    if (ids.empty()) {
      corpus.excluded.push_back(doc.tweet_id);
    } else {
      corpus.doc_ids.push_back(doc.tweet_id);
      corpus.docs.push_back(std::move(ids));
    }
  }
  return corpus;
}

LdaState::LdaState(const LdaConfig& config, Vocabulary vocab)
    : config_(config), vocab_(std::move(vocab)) {
  config_.Validate();
  ResetCounts();
}

LdaState LdaState::FromAssignments(
    const LdaConfig& config, Vocabulary vocab,
    std::vector<std::string> doc_ids,
    std::vector<std::vector<std::uint32_t>> docs,
    std::vector<std::vector<std::int32_t>> z) {
  LdaState state(config, std::move(vocab));
  if (doc_ids.size() != docs.size() || z.size() != docs.size()) {
    throw DimensionMismatchError("LDA state: doc_ids/docs/z differ in size");
  }
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (z[d].size() != docs[d].size()) {
      throw DimensionMismatchError("LDA state: z and doc lengths differ");
    }
    for (std::uint32_t w : docs[d]) {
      if (w >= state.vocab_size()) throw IndexError(w, state.vocab_size());
    }
    for (std::int32_t t : z[d]) {
      if (t < 0 || t >= config.num_topics) {
        throw IndexError(static_cast<std::size_t>(std::max(t, 0)), state.K());
      }
    }
  }
  state.doc_ids_ = std::move(doc_ids);
  state.words_ = std::move(docs);
  state.z_ = std::move(z);
  state.ResetCounts();
  return state;
}

void LdaState::ResetCounts() {
  doc_topic_.assign(words_.size() * K(), 0);
  topic_word_.assign(vocab_size() * K(), 0);
  topic_total_.assign(K(), 0);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const auto k = static_cast<std::size_t>(z_[d][i]);
      ++doc_topic_[d * K() + k];
      ++topic_word_[words_[d][i] * K() + k];
      ++topic_total_[k];
    }
  }
}

double LdaState::Phi(int k, std::uint32_t w) const {
  const double v = static_cast<double>(vocab_size());
  return (static_cast<double>(topic_word(k, w)) + config_.beta) /
         (static_cast<double>(topic_total(k)) + v * config_.beta);
}

std::string LdaState::CheckInvariants() const {
  const std::size_t k_count = K();
  if (z_.size() != words_.size()) return "z and documents differ in count";
  std::int64_t corpus_total = 0;
  for (std::size_t d = 0; d < words_.size(); ++d) {
    if (z_[d].size() != words_[d].size()) {
      return "z length differs from doc " + std::to_string(d);
    }
    for (std::int32_t z : z_[d]) {
      if (z < 0 || static_cast<std::size_t>(z) >= k_count) {
        return "z out of range in doc " + std::to_string(d);
      }
    }
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < k_count; ++k) {
      const std::int64_t n = doc_topic_[d * k_count + k];
      if (n < 0) return "negative N_dk in doc " + std::to_string(d);
      sum += n;
    }
    if (sum != static_cast<std::int64_t>(words_[d].size())) {
      return "sum_k N_dk != length of doc " + std::to_string(d);
    }
    corpus_total += sum;
  }
  std::vector<std::int64_t> by_topic(k_count, 0);
  for (std::size_t w = 0; w < vocab_size(); ++w) {
    for (std::size_t k = 0; k < k_count; ++k) {
      const std::int64_t n = topic_word_[w * k_count + k];
      if (n < 0) return "negative N_kw";
      by_topic[k] += n;
    }
  }
  std::int64_t topic_sum = 0;
  for (std::size_t k = 0; k < k_count; ++k) {
    if (topic_total_[k] < 0) return "negative N_k";
    if (by_topic[k] != topic_total_[k]) {
      return "sum_w N_kw != N_k for topic " + std::to_string(k);
    }
    topic_sum += topic_total_[k];
  }
  if (topic_sum != corpus_total) return "sum_k N_k != corpus tokens";
  return {};
}

nlohmann::json LdaState::ToJson() const {
  nlohmann::json config{{"K", config_.num_topics},
                        {"alpha", config_.Alpha()},
                        {"beta", config_.beta},
                        {"iterations", config_.iterations},
                        {"burn_in", config_.burn_in},
                        {"seed", config_.seed}};
  return {{"format_version", kFormatVersion},
          {"config", config},
          {"vocab", vocab_.ToJson()},
          {"doc_ids", doc_ids_},
          {"docs", words_},
          {"z", z_},
          {"topic_totals", topic_total_}};
}

LdaState LdaState::FromJson(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion) {
    throw SchemaError(0, "unsupported LDA state format_version");
  }
  const nlohmann::json& c = j.at("config");
  LdaConfig config;
  config.num_topics = c.at("K").get<int>();
  config.alpha = c.at("alpha").get<double>();
  config.beta = c.at("beta").get<double>();
  config.iterations = c.at("iterations").get<int>();
  config.burn_in = c.at("burn_in").get<int>();
  config.seed = c.at("seed").get<std::uint64_t>();
  LdaState state = FromAssignments(
      config, Vocabulary::FromJson(j.at("vocab")),
      j.at("doc_ids").get<std::vector<std::string>>(),
      j.at("docs").get<std::vector<std::vector<std::uint32_t>>>(),
      j.at("z").get<std::vector<std::vector<std::int32_t>>>());
  if (j.at("topic_totals").get<std::vector<std::int64_t>>() !=
      state.topic_total_) {
    throw SchemaError(0, "LDA state: topic totals do not match assignments");
  }
  return state;
}

void LdaState::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  out << ToJson().dump() << '\n';
}

LdaState LdaState::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path);
  try {
    return FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(0, "LDA state " + path + ": " + e.what());
  }
}

bool LdaState::operator==(const LdaState& other) const {
  return config_.num_topics == other.config_.num_topics &&
         config_.Alpha() == other.config_.Alpha() &&
         config_.beta == other.config_.beta &&
         config_.iterations == other.config_.iterations &&
         config_.burn_in == other.config_.burn_in &&
         config_.seed == other.config_.seed &&
         vocab_.tokens() == other.vocab_.tokens() &&
         doc_ids_ == other.doc_ids_ && words_ == other.words_ &&
         z_ == other.z_;
}

class GibbsSampler {
 public:
  GibbsSampler(LdaState& state, Rng& rng)
      : s_(state),
        rng_(rng),
        k_(s_.K()),
        alpha_(s_.config_.Alpha()),
        beta_(s_.config_.beta),
        vbeta_(static_cast<double>(s_.vocab_size()) * beta_),
        inv_denom_(k_),
        p_(k_) {
    for (std::size_t k = 0; k < k_; ++k) UpdateDenom(k);
  }

  void Sweep() {
    for (std::size_t d = 0; d < s_.words_.size(); ++d) {
      std::int64_t* ndk = &s_.doc_topic_[d * k_];
      const auto& words = s_.words_[d];
      auto& z = s_.z_[d];
      for (std::size_t i = 0; i < words.size(); ++i) {
        std::int64_t* nkw = &s_.topic_word_[words[i] * k_];
        auto old = static_cast<std::size_t>(z[i]);
        --ndk[old];
        --nkw[old];
        --s_.topic_total_[old];
        UpdateDenom(old);

        double total = 0;
        for (std::size_t k = 0; k < k_; ++k) {
          total += (static_cast<double>(ndk[k]) + alpha_) *
                   (static_cast<double>(nkw[k]) + beta_) * inv_denom_[k];
          p_[k] = total;
        }
#ifndef NDEBUG
        double norm = 0;
        double prev = 0;
        for (std::size_t k = 0; k < k_; ++k) {
          norm += (p_[k] - prev) / total;
          prev = p_[k];
        }
        assert(std::abs(norm - 1.0) < 1e-9);
#endif
        const double u = rng_.Uniform() * total;
        std::size_t next = 0;
        while (next + 1 < k_ && p_[next] <= u) ++next;

        z[i] = static_cast<std::int32_t>(next);
        ++ndk[next];
        ++nkw[next];
        ++s_.topic_total_[next];
        UpdateDenom(next);
      }
    }
  }

 private:
  void UpdateDenom(std::size_t k) {
    inv_denom_[k] =
        1.0 / (static_cast<double>(s_.topic_total_[k]) + vbeta_);
  }

  LdaState& s_;
  Rng& rng_;
  std::size_t k_;
  double alpha_;
  double beta_;
  double vbeta_;
  std::vector<double> inv_denom_;
  std::vector<double> p_;
};

LdaState FitLda(const LdaConfig& config, const LdaCorpus& corpus,
                const SweepObserver& observer) {
  config.Validate();
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    if (corpus.docs[d].empty()) throw EmptyDocumentError(d);
  }
  if (corpus.doc_ids.size() != corpus.docs.size()) {
    throw DimensionMismatchError("LDA corpus: ids and docs differ in size");
  }
  Rng rng(config.seed);
  const auto k = static_cast<std::uint64_t>(config.num_topics);
  std::vector<std::vector<std::int32_t>> z(corpus.docs.size());
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    z[d].resize(corpus.docs[d].size());
    for (auto& t : z[d]) t = static_cast<std::int32_t>(rng.Below(k));
  }
  LdaState state = LdaState::FromAssignments(config, corpus.vocab,
                                             corpus.doc_ids, corpus.docs,
                                             std::move(z));

  GibbsSampler sampler(state, rng);
  for (int sweep = 1; sweep <= config.iterations; ++sweep) {
    sampler.Sweep();
    if (observer) observer(sweep, state);
  }
  return state;
}

DocTopics DocTopicDistribution(const LdaState& state, std::size_t doc) {
  if (doc >= state.num_docs()) throw IndexError(doc, state.num_docs());
  const int k_count = state.num_topics();
  const double alpha = state.config().Alpha();
  const double denom = static_cast<double>(state.words(doc).size()) +
                       k_count * alpha;
  DocTopics out{state.doc_id(doc), std::vector<double>(k_count)};
  for (int k = 0; k < k_count; ++k) {
    out.theta[k] =
        (static_cast<double>(state.doc_topic(doc, k)) + alpha) / denom;
  }
  return out;
}

std::pair<int, int> Top2Assign(std::span<const double> theta) {
  if (theta.size() < 2) throw KTooSmallError();
  int first = 0;
  for (std::size_t k = 1; k < theta.size(); ++k) {
    if (theta[k] > theta[first]) first = static_cast<int>(k);
  }
  int second = first == 0 ? 1 : 0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (static_cast<int>(k) == first) continue;
    if (theta[k] > theta[second]) second = static_cast<int>(k);
  }
  return {first, second};
}

TopicSummary TopWords(const LdaState& state, int topic, std::size_t top_n) {
  if (topic < 0 || topic >= state.num_topics()) {
    throw IndexError(static_cast<std::size_t>(std::max(topic, 0)),
                     static_cast<std::size_t>(state.num_topics()));
  }
  std::vector<std::uint32_t> ids(state.vocab_size());
  std::iota(ids.begin(), ids.end(), 0u);
  const Vocabulary& vocab = state.vocab();
  auto before = [&](std::uint32_t a, std::uint32_t b) {
    const auto na = state.topic_word(topic, a);
    const auto nb = state.topic_word(topic, b);
    if (na != nb) return na > nb;
    return vocab.token(a) < vocab.token(b);
  };
  const std::size_t n = std::min(top_n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n),
                    ids.end(), before);
  TopicSummary out{topic, {}};
  for (std::size_t i = 0; i < n; ++i) {
    out.words.emplace_back(vocab.token(ids[i]), state.Phi(topic, ids[i]));
  }
  return out;
}

std::vector<TopicSummary> AllTopWords(const LdaState& state,
                                      std::size_t top_n) {
  std::vector<TopicSummary> out;
  for (int k = 0; k < state.num_topics(); ++k) {
    out.push_back(TopWords(state, k, top_n));
  }
  return out;
}

double HeldoutPerplexity(const LdaState& state,
                         std::span<const TokenizedDoc> heldout,
                         const PerplexityOptions& options) {
  const auto k_count = static_cast<std::size_t>(state.num_topics());
  const double alpha = state.config().Alpha();
  const std::size_t v = state.vocab_size();

  // Frozen phi, word-major.
  std::vector<double> phi(v * k_count);
  for (std::size_t w = 0; w < v; ++w) {
    for (std::size_t k = 0; k < k_count; ++k) {
      phi[w * k_count + k] =
          state.Phi(static_cast<int>(k), static_cast<std::uint32_t>(w));
    }
  }

  double log_sum = 0;
  std::size_t tokens = 0;
  std::vector<double> cum(k_count);
  std::vector<std::int64_t> ndk(k_count);
  for (std::size_t d = 0; d < heldout.size(); ++d) {
    std::vector<std::uint32_t> ids;
    for (const std::string& tok : heldout[d].tokens) {
      if (auto id = state.vocab().Find(tok)) ids.push_back(*id);
    }
    if (ids.empty()) continue;

    Rng rng(options.seed ^ Rng::Mix(d));
    std::vector<std::size_t> z(ids.size());
    std::fill(ndk.begin(), ndk.end(), 0);
    for (auto& zi : z) {
      zi = static_cast<std::size_t>(rng.Below(k_count));
      ++ndk[zi];
    }
    for (int sweep = 0; sweep < options.fold_in_sweeps; ++sweep) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        --ndk[z[i]];
        const double* row = &phi[ids[i] * k_count];
        double total = 0;
        for (std::size_t k = 0; k < k_count; ++k) {
          total += (static_cast<double>(ndk[k]) + alpha) * row[k];
          cum[k] = total;
        }
        const double u = rng.Uniform() * total;
        std::size_t next = 0;
        while (next + 1 < k_count && cum[next] <= u) ++next;
        z[i] = next;
        ++ndk[next];
      }
    }
    const double denom = static_cast<double>(ids.size()) + k_count * alpha;
    for (std::uint32_t w : ids) {
      const double* row = &phi[w * k_count];
      double p = 0;
      for (std::size_t k = 0; k < k_count; ++k) {
        p += (static_cast<double>(ndk[k]) + alpha) / denom * row[k];
      }
      log_sum += std::log(p);
    }
    tokens += ids.size();
  }
  if (tokens == 0) throw EmptyHeldoutError();
  return std::exp(-log_sum / static_cast<double>(tokens));
}

std::vector<TopicAssignment> AssignTopics(
    const LdaState& state, std::span<const std::string> excluded) {
  std::vector<TopicAssignment> out;
  out.reserve(state.num_docs() + excluded.size());
  for (std::size_t d = 0; d < state.num_docs(); ++d) {
    DocTopics dt = DocTopicDistribution(state, d);
    TopicAssignment a;
    a.tweet_id = dt.tweet_id;
    if (dt.theta.size() == 1) {
      a.topic1 = 0;
      a.prob1 = dt.theta[0];
    } else {
      auto [t1, t2] = Top2Assign(dt.theta);
      a.topic1 = t1;
      a.prob1 = dt.theta[t1];
      a.topic2 = t2;
      a.prob2 = dt.theta[t2];
    }
    out.push_back(std::move(a));
  }
  for (const std::string& id : excluded) out.push_back({id, -1, 0, -1, 0});
  return out;
}

void WriteAssignmentsCsv(const std::string& path,
                         std::span<const TopicAssignment> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out,
                {"tweet_id", "un1_topic", "un1_prob", "un2_topic", "un2_prob"});
  for (const TopicAssignment& a : rows) {
    csv::WriteRow(out, {a.tweet_id, std::to_string(a.topic1),
                        csv::FormatExact(a.prob1), std::to_string(a.topic2),
                        csv::FormatExact(a.prob2)});
  }
}

std::vector<TopicAssignment> ReadAssignmentsCsv(const std::string& path) {
  csv::Table table = csv::ReadFile(
      path, {"tweet_id", "un1_topic", "un1_prob", "un2_topic", "un2_prob"});
  const std::size_t c_id = table.Column("tweet_id");
  const std::size_t c_t1 = table.Column("un1_topic");
  const std::size_t c_p1 = table.Column("un1_prob");
  const std::size_t c_t2 = table.Column("un2_topic");
  const std::size_t c_p2 = table.Column("un2_prob");
  std::vector<TopicAssignment> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const csv::Row& row = table.rows[r];
    try {
      out.push_back({row[c_id], std::stoi(row[c_t1]), std::stod(row[c_p1]),
                     std::stoi(row[c_t2]), std::stod(row[c_p2])});
    } catch (const std::logic_error&) {
      throw SchemaError(table.line_numbers[r], "bad number in assignments");
    }
  }
  return out;
}

void WriteTopicsCsv(const std::string& path,
                    std::span<const TopicSummary> topics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"topic_id", "top_words"});
  for (const TopicSummary& t : topics) {
    std::string words;
    for (const auto& [tok, weight] : t.words) {
      if (!words.empty()) words += ' ';
      words += tok;
    }
    csv::WriteRow(out, {std::to_string(t.topic), words});
  }
}

}  // namespace polagenda
