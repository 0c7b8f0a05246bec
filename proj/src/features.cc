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

#include "polagenda/features.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "polagenda/csv.h"
#include "polagenda/errors.h"

namespace polagenda {

Vocabulary Vocabulary::Build(std::span<const TokenizedDoc> docs,
                             std::size_t min_df) {
  if (min_df < 1) throw InvalidArgumentError("min_df must be >= 1");
  std::unordered_map<std::string, std::size_t> df;
  std::unordered_set<std::string_view> seen;
  for (const TokenizedDoc& doc : docs) {
    seen.clear();
    for (const std::string& tok : doc.tokens) {
      if (seen.insert(tok).second) ++df[tok];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : df) {
    if (n >= min_df) kept.emplace_back(tok, n);
  }
  if (kept.empty()) throw EmptyVocabularyError();
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  Vocabulary vocab;
  vocab.num_docs_ = docs.size();
  vocab.tokens_.reserve(kept.size());
  vocab.df_.reserve(kept.size());
  for (auto& [tok, n] : kept) {
    vocab.tokens_.push_back(std::move(tok));
    vocab.df_.push_back(n);
  }
  vocab.Reindex();
  return vocab;
}

void Vocabulary::Reindex() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace(tokens_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

nlohmann::json Vocabulary::ToJson() const {
  return {{"num_docs", num_docs_}, {"tokens", tokens_}, {"df", df_}};
}

Vocabulary Vocabulary::FromJson(const nlohmann::json& j) {
  Vocabulary vocab;
  vocab.num_docs_ = j.at("num_docs").get<std::size_t>();
  vocab.tokens_ = j.at("tokens").get<std::vector<std::string>>();
  vocab.df_ = j.at("df").get<std::vector<std::size_t>>();
  if (vocab.tokens_.size() != vocab.df_.size()) {
    throw DimensionMismatchError("vocabulary tokens/df length differ");
  }
  vocab.Reindex();
  if (vocab.index_.size() != vocab.tokens_.size()) {
    throw DimensionMismatchError("vocabulary has duplicate tokens");
  }
  return vocab;
}

std::size_t BowVector::TotalCount() const {
  std::size_t total = 0;
  for (const auto& [idx, n] : entries) total += n;
  return total;
}

BowVector VectorizeBow(const Vocabulary& vocab, const TokenizedDoc& doc) {
  std::vector<std::uint32_t> ids;
  ids.reserve(doc.tokens.size());
  for (const std::string& tok : doc.tokens) {
    if (auto id = vocab.Find(tok)) ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  BowVector bow;
  for (std::size_t i = 0; i < ids.size();) {
    std::size_t j = i;
    while (j < ids.size() && ids[j] == ids[i]) ++j;
    bow.entries.emplace_back(ids[i], static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return bow;
}

void EmbeddingTable::Add(std::string token, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw DimensionMismatchError("embedding for '" + token + "' has " +
                                 std::to_string(vector.size()) +
                                 " components, expected " +
                                 std::to_string(dim_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) {
      throw InvalidArgumentError("non-finite embedding component for '" +
                                 token + "'");
    }
  }
  if (index_.contains(token)) {
    throw InvalidArgumentError("duplicate embedding token '" + token + "'");
  }
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  values_.insert(values_.end(), vector.begin(), vector.end());
}

const double* EmbeddingTable::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? nullptr : values_.data() + it->second * dim_;
}

EmbeddingTable LoadEmbeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path);
  std::optional<EmbeddingTable> table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    values.clear();
    std::string field;
    while (ss >> field) {
      char* end = nullptr;
      double v = std::strtod(field.c_str(), &end);
      if (end != field.c_str() + field.size()) {
        throw SchemaError(line_no, "bad number '" + field + "'");
      }
      values.push_back(v);
    }
    if (!table) {
      if (values.empty()) {
        throw DimensionMismatchError("line " + std::to_string(line_no) +
                                     ": no vector components");
      }
      table.emplace(values.size());
    }
    if (values.size() != table->dimension()) {
      throw DimensionMismatchError(
          "line " + std::to_string(line_no) + ": expected " +
          std::to_string(table->dimension()) + " components, found " +
          std::to_string(values.size()));
    }
    try {
      table->Add(token, values);
    } catch (const InvalidArgumentError& e) {
      throw SchemaError(line_no, e.what());
    }
  }
  if (!table) throw EmptyCorpusError("embedding file is empty: " + path);
  return std::move(*table);
}

void WriteEmbeddings(const std::string& path, const EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.tokens()[i];
    for (double v : table.Row(i)) {
      std::snprintf(buf, sizeof(buf), " %.9g", v);
      out << buf;
    }
    out << '\n';
  }
}

DocEmbedding EmbedDocument(const EmbeddingTable& table,
                           const TokenizedDoc& doc) {
  DocEmbedding result;
  result.vector.assign(table.dimension(), 0.0);
  std::size_t hits = 0;
  for (const std::string& tok : doc.tokens) {
    const double* v = table.Find(tok);
    if (v == nullptr) continue;
    ++hits;
    for (std::size_t k = 0; k < table.dimension(); ++k) result.vector[k] += v[k];
  }
  if (hits == 0) {
    result.degenerate = true;
    return result;
  }
  for (double& x : result.vector) x /= static_cast<double>(hits);
  return result;
}

void Lexicon::Add(std::string_view category, std::string_view pattern) {
  if (category.empty()) throw InvalidArgumentError("empty lexicon category");
  if (pattern.empty() || pattern == "*") {
    throw InvalidArgumentError("empty lexicon pattern");
  }
  if (ToLowerUtf8(pattern) != pattern) {
    throw InvalidArgumentError("lexicon pattern is not lowercase: '" +
                               std::string(pattern) + "'");
  }
  auto it = std::find_if(categories_.begin(), categories_.end(),
                         [&](const Category& c) { return c.name == category; });
  if (it == categories_.end()) {
    categories_.push_back({std::string(category), {}, {}});
    it = categories_.end() - 1;
  }
  auto insert_sorted = [](std::vector<std::string>& v, std::string s) {
    auto pos = std::lower_bound(v.begin(), v.end(), s);
    if (pos == v.end() || *pos != s) v.insert(pos, std::move(s));
  };
  if (pattern.back() == '*') {
    insert_sorted(it->prefixes,
                  std::string(pattern.substr(0, pattern.size() - 1)));
  } else {
    insert_sorted(it->exact, std::string(pattern));
  }
}

bool Lexicon::Matches(std::size_t category, std::string_view token) const {
  const Category& c = categories_.at(category);
  if (std::binary_search(c.exact.begin(), c.exact.end(), token)) return true;
  for (const std::string& prefix : c.prefixes) {
    if (token.starts_with(prefix)) return true;
  }
  return false;
}

nlohmann::json Lexicon::ToJson() const {
  nlohmann::json j = nlohmann::json::array();
  for (const Category& c : categories_) {
    std::vector<std::string> patterns = c.exact;
    for (const std::string& p : c.prefixes) patterns.push_back(p + "*");
    j.push_back({{"category", c.name}, {"patterns", patterns}});
  }
  return j;
}

Lexicon Lexicon::FromJson(const nlohmann::json& j) {
  Lexicon lexicon;
  for (const auto& c : j) {
    const std::string name = c.at("category").get<std::string>();
    for (const auto& p : c.at("patterns")) {
      lexicon.Add(name, p.get<std::string>());
    }
  }
  return lexicon;
}

Lexicon LoadLexicon(const std::string& path) {
  csv::Table table = csv::ReadFile(path, {"category", "pattern"});
  const std::size_t c = table.Column("category"), p = table.Column("pattern");
  Lexicon lexicon;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    try {
      lexicon.Add(table.rows[i][c], table.rows[i][p]);
    } catch (const InvalidArgumentError& e) {
      throw SchemaError(table.line_numbers[i], e.what());
    }
  }
  return lexicon;
}

std::vector<double> LexiconFeatures(const Lexicon& lexicon,
                                    const TokenizedDoc& doc) {
  std::vector<double> out(lexicon.size(), 0.0);
  if (doc.tokens.empty()) return out;
  for (std::size_t c = 0; c < lexicon.size(); ++c) {
    std::size_t hits = 0;
    for (const std::string& tok : doc.tokens) {
      if (lexicon.Matches(c, tok)) ++hits;
    }
    out[c] = static_cast<double>(hits) / static_cast<double>(doc.tokens.size());
  }
  return out;
}

std::vector<double> SparseVector::ToDense() const {
  std::vector<double> dense(dim, 0.0);
  for (const auto& [i, v] : entries) dense[i] = v;
  return dense;
}

SparseVector SparseVector::FromDense(std::span<const double> dense) {
  SparseVector sv;
  sv.dim = dense.size();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      sv.entries.emplace_back(static_cast<std::uint32_t>(i), dense[i]);
    }
  }
  return sv;
}

std::string_view ToString(FeatureSet f) {
  switch (f) {
    case FeatureSet::kUnigram: return "unigram";
    case FeatureSet::kUnigramPlusEmbedding: return "unigram+embedding";
    case FeatureSet::kUnigramPlusLexicon: return "unigram+lexicon";
    case FeatureSet::kEmbeddingOnly: return "embedding";
  }
  return "?";
}

std::optional<FeatureSet> ParseFeatureSet(std::string_view s) {
  for (FeatureSet f :
       {FeatureSet::kUnigram, FeatureSet::kUnigramPlusEmbedding,
        FeatureSet::kUnigramPlusLexicon, FeatureSet::kEmbeddingOnly}) {
    if (ToString(f) == s) return f;
  }
  return std::nullopt;
}

namespace {

bool UsesUnigrams(FeatureSet f) { return f != FeatureSet::kEmbeddingOnly; }
bool UsesEmbeddings(FeatureSet f) {
  return f == FeatureSet::kUnigramPlusEmbedding ||
         f == FeatureSet::kEmbeddingOnly;
}
bool UsesLexicon(FeatureSet f) { return f == FeatureSet::kUnigramPlusLexicon; }

}  // namespace

FeatureAssembler::FeatureAssembler(FeatureSet set, CountScaling scaling,
                                   const Vocabulary* vocab,
                                   const EmbeddingTable* embeddings,
                                   const Lexicon* lexicon)
    : set_(set),
      scaling_(scaling),
      vocab_(vocab),
      embeddings_(embeddings),
      lexicon_(lexicon) {
  if (UsesUnigrams(set_)) {
    if (vocab_ == nullptr) {
      throw InvalidArgumentError("feature set needs a vocabulary");
    }
    dim_ += vocab_->size();
  }
  if (UsesEmbeddings(set_)) {
    if (embeddings_ == nullptr) {
      throw InvalidArgumentError("feature set needs an embedding table");
    }
    dim_ += embeddings_->dimension();
  }
  if (UsesLexicon(set_)) {
    if (lexicon_ == nullptr) {
      throw InvalidArgumentError("feature set needs a lexicon");
    }
    dim_ += lexicon_->size();
  }
}

SparseVector FeatureAssembler::Build(const TokenizedDoc& doc) const {
  SparseVector row;
  row.dim = dim_;
  std::uint32_t offset = 0;
  if (UsesUnigrams(set_)) {
    for (const auto& [idx, n] : VectorizeBow(*vocab_, doc).entries) {
      const double v = scaling_ == CountScaling::kRaw
                           ? static_cast<double>(n)
                           : 1.0 + std::log(static_cast<double>(n));
      row.entries.emplace_back(idx, v);
    }
    offset += static_cast<std::uint32_t>(vocab_->size());
  }
  if (UsesEmbeddings(set_)) {
    DocEmbedding e = EmbedDocument(*embeddings_, doc);
    for (std::size_t k = 0; k < e.vector.size(); ++k) {
      if (e.vector[k] != 0.0) {
        row.entries.emplace_back(offset + static_cast<std::uint32_t>(k),
                                 e.vector[k]);
      }
    }
    offset += static_cast<std::uint32_t>(embeddings_->dimension());
  }
  if (UsesLexicon(set_)) {
    std::vector<double> lex = LexiconFeatures(*lexicon_, doc);
    for (std::size_t k = 0; k < lex.size(); ++k) {
      if (lex[k] != 0.0) {
        row.entries.emplace_back(offset + static_cast<std::uint32_t>(k),
                                 lex[k]);
      }
    }
  }
  return row;
}

FeatureMatrix FeatureAssembler::BuildAll(
    std::span<const TokenizedDoc> docs) const {
  FeatureMatrix rows;
  rows.reserve(docs.size());
  for (const TokenizedDoc& doc : docs) rows.push_back(Build(doc));
  return rows;
}

}  // namespace polagenda
