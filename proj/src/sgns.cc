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

#include <algorithm>
#include <cmath>

#include "polagenda/errors.h"
#include "polagenda/features.h"
#include "polagenda/random.h"

namespace polagenda {

namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log(sigmoid(x)) without overflow.
double SoftplusNeg(double x) {
  return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

}  // namespace

SgnsResult TrainSgns(std::span<const TokenizedDoc> docs,
                     const SgnsConfig& config) {
  if (config.dim < 2) throw InvalidArgumentError("embedding dim must be >= 2");
  if (config.window < 1) throw InvalidArgumentError("window must be >= 1");
  if (config.epochs < 1) throw InvalidArgumentError("epochs must be >= 1");
  if (!(config.learning_rate > 0)) {
    throw InvalidArgumentError("learning_rate must be > 0");
  }

  // Vocabulary by raw token frequency; ordering follows Vocabulary so the
  // output table is deterministic.
  std::unordered_map<std::string, std::size_t> freq;
  for (const TokenizedDoc& doc : docs) {
    for (const std::string& tok : doc.tokens) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> words;
  for (auto& [tok, n] : freq) {
    if (n >= std::max<std::size_t>(config.min_count, 1)) words.emplace_back(tok, n);
  }
  if (words.empty()) throw EmptyCorpusError("no tokens to train embeddings on");
  std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < words.size(); ++i) {
    index.emplace(words[i].first, static_cast<std::uint32_t>(i));
  }

  std::vector<std::vector<std::uint32_t>> sentences;
  std::size_t total_tokens = 0;
  for (const TokenizedDoc& doc : docs) {
    std::vector<std::uint32_t> ids;
    for (const std::string& tok : doc.tokens) {
      auto it = index.find(tok);
      if (it != index.end()) ids.push_back(it->second);
    }
    total_tokens += ids.size();
    if (ids.size() > 1) sentences.push_back(std::move(ids));
  }

  // Noise distribution: unigram^0.75.
  std::vector<double> noise_cdf(words.size());
  double acc = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    acc += std::pow(static_cast<double>(words[i].second), 0.75);
    noise_cdf[i] = acc;
  }
  for (double& c : noise_cdf) c /= acc;

  const std::size_t dim = config.dim;
  const std::size_t vocab_size = words.size();
  Rng rng(config.seed);
  std::vector<double> in_vecs(vocab_size * dim);
  std::vector<double> out_vecs(vocab_size * dim, 0.0);
  for (double& v : in_vecs) {
    v = (rng.Uniform() - 0.5) / static_cast<double>(dim);
  }

  auto draw_noise = [&]() -> std::uint32_t {
    const double u = rng.Uniform();
    auto it = std::upper_bound(noise_cdf.begin(), noise_cdf.end(), u);
    return static_cast<std::uint32_t>(
        std::min<std::size_t>(it - noise_cdf.begin(), vocab_size - 1));
  };

  SgnsResult result;
  std::vector<double> grad_in(dim);
  const double total_steps =
      static_cast<double>(config.epochs) * std::max<std::size_t>(total_tokens, 1);
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0;
    std::size_t pairs = 0;
    for (const auto& sent : sentences) {
      for (std::size_t pos = 0; pos < sent.size(); ++pos, ++step) {
        const double lr = config.learning_rate *
                          std::max(1e-4, 1.0 - static_cast<double>(step) /
                                                   total_steps);
        const std::size_t shrink = rng.Below(config.window);
        const std::size_t reach = config.window - shrink;
        const std::size_t lo = pos >= reach ? pos - reach : 0;
        const std::size_t hi = std::min(sent.size() - 1, pos + reach);
        double* center = &in_vecs[sent[pos] * dim];
        for (std::size_t ctx = lo; ctx <= hi; ++ctx) {
          if (ctx == pos) continue;
          std::fill(grad_in.begin(), grad_in.end(), 0.0);
          for (std::size_t d = 0; d <= config.negatives; ++d) {
            std::uint32_t target;
            double label;
            if (d == 0) {
              target = sent[ctx];
              label = 1.0;
            } else {
              target = draw_noise();
              if (target == sent[ctx]) continue;
              label = 0.0;
            }
            double* out = &out_vecs[target * dim];
            double dot = 0;
            for (std::size_t k = 0; k < dim; ++k) dot += center[k] * out[k];
            loss_sum += label > 0 ? SoftplusNeg(dot) : SoftplusNeg(-dot);
            const double g = (label - Sigmoid(dot)) * lr;
            for (std::size_t k = 0; k < dim; ++k) {
              grad_in[k] += g * out[k];
              out[k] += g * center[k];
            }
          }
          for (std::size_t k = 0; k < dim; ++k) center[k] += grad_in[k];
          ++pairs;
        }
      }
    }
    result.epoch_loss.push_back(pairs ? loss_sum / static_cast<double>(pairs)
                                      : 0.0);
  }

  result.table = EmbeddingTable(dim);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    result.table.Add(words[i].first,
                     std::span<const double>(&in_vecs[i * dim], dim));
  }
  return result;
}

}  // namespace polagenda
