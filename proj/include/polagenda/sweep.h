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

#ifndef POLAGENDA_SWEEP_H_
#define POLAGENDA_SWEEP_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polagenda/preprocess.h"
#include "polagenda/topicmodel.h"

namespace polagenda {

// 5, 10, ..., 70.
std::vector<int> DefaultSweepKs();

struct SweepOptions {
  std::vector<int> k_values = DefaultSweepKs();
  double heldout_fraction = 0.1;  // documents held out for perplexity
  std::size_t min_df = 2;
  std::size_t top_n = 10;         // words per topic for NPMI
  std::size_t npmi_window = 10;
  int fold_in_sweeps = 50;
};

struct SweepResult {
  int k = 0;
  LdaState state;
  double perplexity = 0;
  double mean_npmi = 0;
};

// One independent fit per K with seed base.seed + K and, unless base.alpha
// is set, alpha = 50 / K. A seeded fraction of the documents is held out
// for perplexity; NPMI uses the fitted documents as reference. Fits run
// concurrently; results follow k_values order.
std::vector<SweepResult> SweepK(std::span<const TokenizedDoc> docs,
                                const LdaConfig& base,
                                const SweepOptions& options);

// k,seed,perplexity,mean_npmi
void WriteSweepCsv(const std::string& path,
                   std::span<const SweepResult> results);

}  // namespace polagenda

#endif  // POLAGENDA_SWEEP_H_
