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

#include "polagenda/sweep.h"

#include <cmath>
#include <fstream>
#include <future>
#include <numeric>

#include "polagenda/csv.h"
#include "polagenda/errors.h"
#include "polagenda/evaluate.h"
#include "polagenda/random.h"

namespace polagenda {

std::vector<int> DefaultSweepKs() {
  std::vector<int> ks;
  for (int k = 5; k <= 70; k += 5) ks.push_back(k);
  return ks;
}

std::vector<SweepResult> SweepK(std::span<const TokenizedDoc> docs,
                                const LdaConfig& base,
                                const SweepOptions& options) {
  if (options.k_values.empty()) {
    throw InvalidArgumentError("sweep needs at least one K");
  }
  if (options.heldout_fraction < 0 || options.heldout_fraction >= 1) {
    throw InvalidArgumentError("heldout_fraction must be in [0, 1)");
  }

  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(base.seed);
  rng.Shuffle(order);
  const auto n_heldout = static_cast<std::size_t>(
      std::floor(options.heldout_fraction * static_cast<double>(docs.size()) +
                 1e-9));
  std::vector<char> is_heldout(docs.size(), 0);
  for (std::size_t i = 0; i < n_heldout; ++i) is_heldout[order[i]] = 1;
  std::vector<TokenizedDoc> fit_docs, heldout;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    (is_heldout[i] ? heldout : fit_docs).push_back(docs[i]);
  }

  const LdaCorpus corpus = MakeLdaCorpus(fit_docs, options.min_df);

  auto run = [&](int k) {
    LdaConfig config = base;
    config.num_topics = k;
    config.seed = base.seed + static_cast<std::uint64_t>(k);
    SweepResult r;
    r.k = k;
    r.state = FitLda(config, corpus);
    if (!heldout.empty()) {
      r.perplexity = HeldoutPerplexity(
          r.state, heldout, {options.fold_in_sweeps, config.seed});
    } else {
      r.perplexity = std::nan("");
    }
    std::vector<TopicSummary> topics = AllTopWords(r.state, options.top_n);
    r.mean_npmi =
        NpmiCoherence(topics, fit_docs, options.npmi_window).mean;
    return r;
  };

  std::vector<std::future<SweepResult>> futures;
  for (int k : options.k_values) {
    futures.push_back(std::async(std::launch::async, run, k));
  }
  std::vector<SweepResult> results;
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

void WriteSweepCsv(const std::string& path,
                   std::span<const SweepResult> results) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"k", "seed", "perplexity", "mean_npmi"});
  for (const SweepResult& r : results) {
    csv::WriteRow(out, {std::to_string(r.k),
                        std::to_string(r.state.config().seed),
                        csv::FormatExact(r.perplexity),
                        csv::FormatExact(r.mean_npmi)});
  }
}

}  // namespace polagenda
