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

#ifndef POLAGENDA_PIPELINE_H_
#define POLAGENDA_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "polagenda/features.h"
#include "polagenda/report.h"
#include "polagenda/sweep.h"
#include "polagenda/supervised.h"
#include "polagenda/topicmodel.h"

namespace polagenda {

// Everything one pipeline run needs. The JSON form is flat: every key of
// Defaults() may appear in a config file and as a --key command-line flag
// (underscores may be written as dashes).
struct RunConfig {
  // Inputs. Relative paths resolve against the config file's directory.
  std::string tweets;
  std::string accounts;
  std::string codebook;  // empty: built-in codebook
  std::vector<std::string> stoplists;
  std::string labeled;
  std::string labelmap;
  std::string embeddings;
  std::string lexicon;
  std::string reference;  // coherence reference; empty: tokens.jsonl
  std::string out_dir = "out";

  // Preprocessing.
  int max_repeat = 3;
  int min_token_len = 2;
  bool originals_only = true;

  // Supervised model.
  TrainConfig train;
  std::size_t min_df = 5;
  SgnsConfig sgns;
  int rebalance_code = -1;  // < 0: no rebalancing
  std::size_t rebalance_target = 0;
  bool variants = false;

  // Topic model.
  LdaConfig lda;
  std::size_t lda_min_df = 2;
  std::vector<int> sweep = DefaultSweepKs();
  double heldout_fraction = 0.1;
  std::size_t top_n = 10;
  std::size_t npmi_window = 10;
  int fold_in_sweeps = 50;

  // Report.
  GroupBy group_by = GroupBy::kParty;
  std::size_t feature_top_n = 10;

  std::uint64_t seed = 1;

  // Key -> default value.
  static nlohmann::json Defaults();
  // Throws InvalidArgumentError on an unknown key or a badly typed value.
  static RunConfig FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;

  // The single seed drives the split, SGNS, the dummy draws and LDA.
  void SetSeed(std::uint64_t s);
};

// Merges a config file over the defaults and resolves relative paths.
// Throws IoError, InvalidArgumentError.
nlohmann::json LoadConfigJson(const std::string& path);

// Sets one key from its command-line text. Numbers, booleans and lists
// (comma separated) are converted according to the default's type.
// Throws InvalidArgumentError.
void ApplyOverride(nlohmann::json& config, std::string_view key,
                   const std::string& value);

// Files exchanged between subcommands, relative to out_dir.
namespace files {
inline constexpr char kTokens[] = "tokens.jsonl";
inline constexpr char kDropped[] = "dropped.csv";
inline constexpr char kLabeledTokens[] = "labeled_tokens.jsonl";
inline constexpr char kModel[] = "model.json";
inline constexpr char kEval[] = "eval.csv";
inline constexpr char kVariants[] = "variants.csv";
inline constexpr char kPredictions[] = "predictions.csv";
inline constexpr char kLdaState[] = "lda_state.json";
inline constexpr char kAssignments[] = "assignments.csv";
inline constexpr char kTopics[] = "topics.csv";
inline constexpr char kSweep[] = "sweep.csv";
inline constexpr char kCoherence[] = "coherence.csv";
inline constexpr char kKappa[] = "kappa.json";
inline constexpr char kDistribution[] = "distribution.csv";
inline constexpr char kDistributionText[] = "distribution.txt";
inline constexpr char kDistributionJson[] = "distribution.json";
inline constexpr char kFeaturesSu[] = "features_su.csv";
inline constexpr char kFeaturesUn[] = "features_un.csv";
inline constexpr char kShares[] = "shares.json";
}  // namespace files

// Subcommands. Each reads its inputs from the configured paths and
// out_dir, writes its outputs to out_dir and logs a summary to `log`.
void RunPreprocess(const RunConfig& config, std::ostream& log);
void RunTrainSupervised(const RunConfig& config, std::ostream& log);
void RunFitLda(const RunConfig& config, std::ostream& log);
void RunSweepK(const RunConfig& config, std::ostream& log);
void RunCoherence(const RunConfig& config, std::ostream& log);
void RunCompare(const RunConfig& config, std::ostream& log);
void RunReport(const RunConfig& config, std::ostream& log);

// Process exit code for an error: 2 config, 3 data, 4 internal.
int ExitCodeFor(const std::exception& e);

}  // namespace polagenda

#endif  // POLAGENDA_PIPELINE_H_
