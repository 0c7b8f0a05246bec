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
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "polagenda/classifier_pipeline.h"
#include "polagenda/errors.h"
#include "polagenda/evaluate.h"
#include "polagenda/pipeline.h"
#include "polagenda/preprocess.h"
#include "test_support.h"

namespace polagenda {
namespace {

namespace fs = std::filesystem;
using testing::CliResult;
using testing::RunCli;

std::string Fixture(const std::string& name) {
  return testing::DataDir() + "/e2e/" + name;
}

// Inputs passed as flags, no config file.
std::string InputFlags(const fs::path& out) {
  return "--tweets " + Fixture("tweets.jsonl") + " --labeled " +
         Fixture("labeled.jsonl") + " --accounts " + Fixture("accounts.csv") +
         " --codebook " + Fixture("codebook.csv") + " --labelmap " +
         Fixture("labelmap.csv") + " --out-dir " + out.string() +
         " --min-df 3 --seed 7";
}

TEST(CliTest, UnknownSubcommandIsConfigError) {
  EXPECT_EQ(RunCli("frobnicate").exit_code, 2);
  EXPECT_EQ(RunCli("").exit_code, 2);
  EXPECT_EQ(RunCli("preprocess --no-such-flag 1").exit_code, 2);
}

TEST(CliTest, PreprocessWritesCacheAndRerunIsIdentical) {
  const fs::path out = testing::MakeTempDir("cli_pre");
  const CliResult a = RunCli("preprocess " + InputFlags(out));
  ASSERT_EQ(a.exit_code, 0) << a.err;
  ASSERT_TRUE(fs::exists(out / files::kTokens));
  ASSERT_TRUE(fs::exists(out / files::kLabeledTokens));
  const auto first = testing::SnapshotTree(out);
  const CliResult b = RunCli("preprocess " + InputFlags(out));
  ASSERT_EQ(b.exit_code, 0) << b.err;
  EXPECT_EQ(testing::SnapshotTree(out), first);
  EXPECT_EQ(a.out, b.out);
  fs::remove_all(out);
}

TEST(CliTest, MissingStoplistExitsTwoNamingPath) {
  const fs::path out = testing::MakeTempDir("cli_stop");
  const std::string missing = "/nonexistent/stoplists/english.txt";
  const CliResult r =
      RunCli("preprocess " + InputFlags(out) + " --stoplists " + missing);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
  fs::remove_all(out);
}

TEST(CliTest, MissingLabelmapExitsThree) {
  const fs::path out = testing::MakeTempDir("cli_lmap");
  const std::string src = testing::DataDir() + "/compare_kappa0";
  fs::copy_file(src + "/predictions.csv", out / files::kPredictions);
  fs::copy_file(src + "/assignments.csv", out / files::kAssignments);
  const CliResult r = RunCli("compare --out-dir " + out.string() +
                             " --labelmap " + (out / "absent.csv").string());
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.err.find("absent.csv"), std::string::npos) << r.err;
  fs::remove_all(out);
}

TEST(CliTest, KnownKappaZeroPrintsZero) {
  const fs::path out = testing::MakeTempDir("cli_kappa");
  const std::string src = testing::DataDir() + "/compare_kappa0";
  fs::copy_file(src + "/predictions.csv", out / files::kPredictions);
  fs::copy_file(src + "/assignments.csv", out / files::kAssignments);
  const CliResult r = RunCli("compare --out-dir " + out.string() +
                             " --labelmap " + src + "/labelmap.csv");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("kappa: 0.000"), std::string::npos) << r.out;
  const auto j = nlohmann::json::parse(
      testing::ReadFileBytes(out / files::kKappa));
  EXPECT_EQ(j["kappa"], 0.0);
  EXPECT_EQ(j["n"], 4);
  fs::remove_all(out);
}

TEST(CliTest, TrainedModelLoadsAndPredictsIdentically) {
  const fs::path out = testing::MakeTempDir("cli_train");
  const std::string flags = InputFlags(out);
  ASSERT_EQ(RunCli("preprocess " + flags).exit_code, 0);
  const CliResult r = RunCli("train-supervised " + flags);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const SupervisedModel model =
      SupervisedModel::Load((out / files::kModel).string());
  const auto docs = LoadTokenized((out / files::kTokens).string());
  const auto labeled = model.Label(docs);
  const auto written =
      ReadPredictionsCsv((out / files::kPredictions).string());
  ASSERT_EQ(written.size(), docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    ASSERT_EQ(written[i].tweet_id, docs[i].tweet_id);
    ASSERT_EQ(written[i].code, labeled[i].code);
    ASSERT_EQ(written[i].score, labeled[i].score);
  }
  EXPECT_TRUE(fs::exists(out / files::kEval));
  fs::remove_all(out);
}

TEST(CliTest, VariantsFlagWritesTenRows) {
  const fs::path out = testing::MakeTempDir("cli_t2");
  const std::string flags = InputFlags(out) + " --embeddings " +
                            Fixture("embeddings.txt") + " --lexicon " +
                            Fixture("lexicon.csv") +
                            " --sgns-dim 10 --sgns-epochs 1";
  ASSERT_EQ(RunCli("preprocess " + flags).exit_code, 0);
  const CliResult r = RunCli("train-supervised --variants " + flags);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const std::string csv = testing::ReadFileBytes(out / files::kVariants);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  fs::remove_all(out);
}

TEST(CliTest, SweepWritesTwoStatesAndDiagnostics) {
  const fs::path out = testing::MakeTempDir("cli_sweep");
  const std::string flags = InputFlags(out);
  ASSERT_EQ(RunCli("preprocess " + flags).exit_code, 0);
  const CliResult r = RunCli("sweep-k " + flags +
                             " --sweep 5,10 --iterations 20 --burn-in 5"
                             " --fold-in-sweeps 5");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "sweep" / "lda_state_k5.json"));
  EXPECT_TRUE(fs::exists(out / "sweep" / "lda_state_k10.json"));
  const std::string csv = testing::ReadFileBytes(out / files::kSweep);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.rfind("k,seed,perplexity,mean_npmi\n", 0), 0u);
  fs::remove_all(out);
}

TEST(CliTest, ConfigFileAndOverrides) {
  const fs::path out = testing::MakeTempDir("cli_cfg");
  const CliResult r = RunCli("--config " + Fixture("config.json") +
                             " preprocess --out-dir " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / files::kTokens));
  // Unknown key in a config file.
  const fs::path bad = out / "bad.json";
  std::ofstream(bad) << R"({"no_such_key": 1})";
  EXPECT_EQ(RunCli("--config " + bad.string() + " preprocess").exit_code, 2);
  fs::remove_all(out);
}

TEST(RunConfigTest, JsonRoundTripAndSeed) {
  RunConfig c = RunConfig::FromJson(RunConfig::Defaults());
  EXPECT_EQ(c.ToJson(), RunConfig::Defaults());
  c.SetSeed(42);
  EXPECT_EQ(c.train.seed, 42u);
  EXPECT_EQ(c.lda.seed, 42u);
  EXPECT_EQ(c.sgns.seed, 42u);
  nlohmann::json j = RunConfig::Defaults();
  ApplyOverride(j, "sweep", "5,10");
  ApplyOverride(j, "alpha", "0.5");
  ApplyOverride(j, "k", "12");
  const RunConfig o = RunConfig::FromJson(j);
  EXPECT_EQ(o.sweep, (std::vector<int>{5, 10}));
  EXPECT_EQ(o.lda.alpha, 0.5);
  EXPECT_EQ(o.lda.num_topics, 12);
  EXPECT_THROW(ApplyOverride(j, "k", "twelve"), InvalidArgumentError);
}

}  // namespace
}  // namespace polagenda
