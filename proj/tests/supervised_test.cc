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

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "polagenda/classifier_pipeline.h"
#include "polagenda/errors.h"
#include "polagenda/random.h"
#include "polagenda/supervised.h"
#include "test_support.h"

namespace polagenda {
namespace {

SparseVector Dense(std::vector<double> v) { return SparseVector::FromDense(v); }

std::vector<CapCode> Codes(std::initializer_list<int> v) {
  std::vector<CapCode> out;
  for (int c : v) out.emplace_back(c);
  return out;
}

TrainConfig Config(Algorithm a) {
  TrainConfig c;
  c.algorithm = a;
  return c;
}

TEST(TrainTest, SingletonPredictsOwnLabel) {
  FeatureMatrix x = {Dense({1.0, 0.0, 2.0})};
  const auto y = Codes({16});
  for (Algorithm a : {Algorithm::kDummy, Algorithm::kNaiveBayes,
                      Algorithm::kLogisticRegression, Algorithm::kLinearSvm}) {
    TrainConfig cfg = Config(a);
    cfg.sgd.epochs = 50;
    const TrainedClassifier clf = Train(cfg, x, y);
    EXPECT_EQ(Predict(clf, x[0]).code, CapCode(16)) << ToString(a);
  }
}

// Docs over {a, b, c}: class 1 "a a b", "a c"; class 2 "b c c", "c".
TEST(NaiveBayesTest, HandComputedPosterior) {
  FeatureMatrix x = {Dense({2, 1, 0}), Dense({1, 0, 1}), Dense({0, 1, 2}),
                     Dense({0, 0, 1})};
  const auto y = Codes({1, 1, 2, 2});
  TrainConfig cfg = Config(Algorithm::kNaiveBayes);
  cfg.nb_smoothing = 1.0;
  const TrainedClassifier clf = Train(cfg, x, y);
  // P(a|1)=4/8, P(c|1)=2/8; P(a|2)=1/7, P(c|2)=4/7; equal priors.
  const double joint1 = 0.5 * (4.0 / 8) * (2.0 / 8);
  const double joint2 = 0.5 * (1.0 / 7) * (4.0 / 7);
  const Prediction p = Predict(clf, Dense({1, 0, 1}));
  EXPECT_NEAR(p.scores[0], joint1 / (joint1 + joint2), 1e-9);
  EXPECT_NEAR(p.scores[1], joint2 / (joint1 + joint2), 1e-9);
  EXPECT_EQ(p.code, CapCode(1));
  for (double v : clf.log_likelihood) EXPECT_TRUE(std::isfinite(v));
}

TEST(NaiveBayesTest, EmptyVectorGivesPriorArgmax) {
  FeatureMatrix x = {Dense({1, 0}), Dense({1, 0}), Dense({0, 1})};
  const auto y = Codes({5, 5, 3});
  const TrainedClassifier clf = Train(Config(Algorithm::kNaiveBayes), x, y);
  EXPECT_EQ(Predict(clf, Dense({0, 0})).code, CapCode(5));
}

TEST(NaiveBayesTest, RejectsNegativeFeatures) {
  FeatureMatrix x = {Dense({-1, 0})};
  EXPECT_THROW(Train(Config(Algorithm::kNaiveBayes), x, Codes({1})),
               InvalidArgumentError);
}

TEST(DummyTest, PredictionFrequenciesFollowPrior) {
  FeatureMatrix x;
  std::vector<CapCode> y;
  for (int i = 0; i < 100; ++i) {
    x.push_back(Dense({1.0}));
    y.emplace_back(i < 70 ? 1 : 2);
  }
  TrainConfig cfg = Config(Algorithm::kDummy);
  cfg.seed = 17;
  const TrainedClassifier clf = Train(cfg, x, y);
  FeatureMatrix queries(10000, Dense({0.0}));
  const auto preds = PredictBatch(clf, queries);
  std::size_t ones = 0;
  for (const auto& p : preds) ones += p.code == CapCode(1);
  EXPECT_NEAR(static_cast<double>(ones) / 10000.0, 0.7, 0.02);
  // Reproducible batch.
  const auto again = PredictBatch(clf, queries);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ASSERT_EQ(preds[i].code, again[i].code);
  }
}

TEST(PredictTest, ZeroWeightLogisticIsUniform) {
  TrainedClassifier clf;
  clf.algorithm = Algorithm::kLogisticRegression;
  clf.classes = Codes({1, 3, 16});
  clf.dim = 2;
  clf.weights.assign(6, 0.0);
  clf.bias.assign(3, 0.0);
  const Prediction p = Predict(clf, Dense({0.5, 2.0}));
  for (double s : p.scores) EXPECT_DOUBLE_EQ(s, 1.0 / 3);
  EXPECT_EQ(p.code, CapCode(1));
  EXPECT_THROW(Predict(clf, Dense({1.0})), DimensionMismatchError);
}

TEST(PredictTest, EmptyVectorStillClassified) {
  FeatureMatrix x = {Dense({1, 0}), Dense({0, 1})};
  const auto y = Codes({1, 2});
  for (Algorithm a : {Algorithm::kDummy, Algorithm::kNaiveBayes,
                      Algorithm::kLogisticRegression}) {
    const TrainedClassifier clf = Train(Config(a), x, y);
    const CapCode c = Predict(clf, Dense({0, 0})).code;
    EXPECT_TRUE(c == CapCode(1) || c == CapCode(2)) << ToString(a);
  }
}

TEST(TrainTest, RejectsBadInput) {
  FeatureMatrix x = {Dense({1, 0}), Dense({1})};
  EXPECT_THROW(Train(Config(Algorithm::kLogisticRegression), x, Codes({1, 2})),
               DimensionMismatchError);
  FeatureMatrix one = {Dense({1, 0})};
  EXPECT_THROW(
      Train(Config(Algorithm::kLogisticRegression), one, Codes({1, 2})),
      DimensionMismatchError);
  FeatureMatrix none;
  EXPECT_THROW(Train(Config(Algorithm::kLogisticRegression), none, {}),
               EmptyClassError);
  TrainConfig bad = Config(Algorithm::kLogisticRegression);
  bad.sgd.learning_rate = 0;
  EXPECT_THROW(bad.Validate(), InvalidArgumentError);
}

TEST(ScoreTest, PerfectPredictions) {
  const auto t = Codes({1, 2, 3, 3});
  const EvalReport r = ScorePredictions(t, t);
  EXPECT_DOUBLE_EQ(r.weighted_f1, 1.0);
  EXPECT_DOUBLE_EQ(r.macro_f1, 1.0);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  for (const auto& c : r.per_class) {
    EXPECT_DOUBLE_EQ(c.precision, 1.0);
    EXPECT_DOUBLE_EQ(c.recall, 1.0);
  }
}

TEST(ScoreTest, OneOfEachPerClass) {
  const EvalReport r =
      ScorePredictions(Codes({1, 1, 2, 2}), Codes({1, 2, 1, 2}));
  ASSERT_EQ(r.per_class.size(), 2u);
  for (const auto& c : r.per_class) {
    EXPECT_DOUBLE_EQ(c.precision, 0.5);
    EXPECT_DOUBLE_EQ(c.recall, 0.5);
    EXPECT_DOUBLE_EQ(c.f1, 0.5);
  }
  EXPECT_DOUBLE_EQ(r.weighted_f1, 0.5);
  EXPECT_EQ(r.confusion[0][1], 1u);
}

TEST(ScoreTest, MatchesIndependentWeightedF1) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> t, p;
    std::vector<CapCode> tc, pc;
    for (int i = 0; i < 200; ++i) {
      t.push_back(static_cast<int>(rng.Below(5)));
      p.push_back(rng.Uniform() < 0.6 ? t.back()
                                      : static_cast<int>(rng.Below(6)));
      tc.emplace_back(t.back());
      pc.emplace_back(p.back());
    }
    EXPECT_NEAR(ScorePredictions(tc, pc).weighted_f1,
                testing::WeightedF1(t, p), 1e-12);
  }
}

TEST(ClassifierJsonTest, RoundTripPredictsIdentically) {
  const auto docs = testing::SeparableCorpus(200, 40, 3);
  FeatureMatrix x;
  std::vector<CapCode> y;
  std::vector<TokenizedDoc> tokens;
  for (const auto& d : docs) tokens.push_back(d.doc);
  const Vocabulary v = Vocabulary::Build(tokens, 1);
  FeatureAssembler fa(FeatureSet::kUnigram, CountScaling::kRaw, &v, nullptr,
                      nullptr);
  for (const auto& d : docs) {
    x.push_back(fa.Build(d.doc));
    y.push_back(d.code);
  }
  for (Algorithm a : {Algorithm::kDummy, Algorithm::kNaiveBayes,
                      Algorithm::kLogisticRegression, Algorithm::kLinearSvm}) {
    const TrainedClassifier clf = Train(Config(a), x, y);
    const TrainedClassifier back = TrainedClassifier::FromJson(clf.ToJson());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Prediction p1 = Predict(clf, x[i], i), p2 = Predict(back, x[i], i);
      ASSERT_EQ(p1.code, p2.code) << ToString(a);
      ASSERT_EQ(p1.scores, p2.scores) << ToString(a);
    }
  }
}

TEST(SoftmaxObjectiveTest, ZeroParamsGiveLogClasses) {
  LinearParams p{3, 2, std::vector<double>(6, 0.0), std::vector<double>(3, 0.0)};
  FeatureMatrix x = {Dense({1, 2}), Dense({0, 1})};
  const std::vector<std::size_t> y = {0, 2};
  EXPECT_NEAR(SoftmaxObjective(p, x, y, 0.5, nullptr), std::log(3.0), 1e-12);
}

TEST(VariantMatrixTest, TenRowsSharingOneSplit) {
  const auto labeled = testing::SeparableCorpus(300, 60, 12);
  EmbeddingTable pretrained(4);
  Rng rng(1);
  for (int w = 0; w < 60; w += 2) {
    std::vector<double> v(4);
    for (double& c : v) c = rng.Uniform();
    char name[8];
    std::snprintf(name, sizeof name, "w%03d", w);
    pretrained.Add(name, v);
  }
  Lexicon lexicon;
  lexicon.Add("first", "w00*");
  lexicon.Add("late", "w05*");
  FeatureResources res;
  res.pretrained = &pretrained;
  res.lexicon = &lexicon;
  res.min_df = 1;
  res.sgns.dim = 8;
  res.sgns.epochs = 1;
  TrainConfig base;
  base.seed = 4;
  const auto configs = VariantConfigs(base);
  ASSERT_EQ(configs.size(), 10u);
  const auto rows = RunVariantMatrix(labeled, configs, res);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0].config.Name(), "D");
  for (const auto& row : rows) {
    EXPECT_EQ(row.report.n, rows[0].report.n);
    // Same test set: identical true-class supports.
    std::map<int, std::size_t> support, base_support;
    for (const auto& c : row.report.per_class) support[c.code.value()] = c.support;
    for (const auto& c : rows[0].report.per_class) {
      base_support[c.code.value()] = c.support;
    }
    std::erase_if(support, [](const auto& kv) { return kv.second == 0; });
    std::erase_if(base_support, [](const auto& kv) { return kv.second == 0; });
    EXPECT_EQ(support, base_support) << row.config.Name();
  }
}

TEST(VariantMatrixTest, AlgorithmOnlyDifferenceKeepsTestSet) {
  const auto labeled = testing::SeparableCorpus(120, 40, 21);
  std::vector<CapCode> codes;
  for (const auto& d : labeled) codes.push_back(d.code);
  const SplitIndices a = StratifiedSplitIndices(codes, 0.1, 5);
  const SplitIndices b = StratifiedSplitIndices(codes, 0.1, 5);
  EXPECT_EQ(a.test, b.test);
  FeatureResources res;
  res.min_df = 1;
  TrainConfig lr = Config(Algorithm::kLogisticRegression);
  TrainConfig nb = Config(Algorithm::kNaiveBayes);
  lr.seed = nb.seed = 5;
  const std::vector<TrainConfig> configs = {lr, nb};
  const auto rows = RunVariantMatrix(labeled, configs, res);
  EXPECT_EQ(rows[0].report.n, a.test.size());
  EXPECT_EQ(rows[1].report.n, a.test.size());
}

}  // namespace
}  // namespace polagenda
