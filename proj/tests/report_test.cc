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
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "polagenda/codebook.h"
#include "polagenda/csv.h"
#include "polagenda/errors.h"
#include "polagenda/random.h"
#include "polagenda/report.h"
#include "test_support.h"

namespace polagenda {
namespace {

namespace fs = std::filesystem;

std::vector<CapCode> Codes(std::initializer_list<int> v) {
  std::vector<CapCode> out;
  for (int c : v) out.emplace_back(c);
  return out;
}

const DistributionRow& RowFor(const DistributionTable& t, int code) {
  auto it = std::find_if(t.rows.begin(), t.rows.end(), [&](const auto& r) {
    return r.code == CapCode(code);
  });
  if (it == t.rows.end()) throw std::runtime_error("no row");
  return *it;
}

TEST(DistributionTest, Singleton) {
  const auto one = Codes({3});
  const DistributionTable t =
      MakeDistributionTable(one, one, one, CapCodebook::Default());
  const DistributionRow& r = RowFor(t, 3);
  EXPECT_EQ(r.su, 1.0);
  EXPECT_EQ(r.un1, 1.0);
  EXPECT_EQ(r.un2, 1.0);
  EXPECT_EQ(r.label, "health");
  EXPECT_FALSE(RowFor(t, 1).su.has_value());
  EXPECT_EQ(t.rows.size(), CapCodebook::Default().entries().size());
  EXPECT_EQ(t.rows.back().code, kNotPolicy);
}

TEST(DistributionTest, HandProportions) {
  const auto su = Codes({3, 3, 1, 0});
  const auto un1 = Codes({3, 26, 26, 26, 0});
  const auto un2 = Codes({16, 0});
  const DistributionTable t =
      MakeDistributionTable(su, un1, un2, CapCodebook::Default());
  EXPECT_EQ(RowFor(t, 3).su, 0.5);
  EXPECT_EQ(RowFor(t, 1).su, 0.25);
  EXPECT_EQ(RowFor(t, 0).su, 0.25);
  EXPECT_EQ(RowFor(t, 26).un1, 0.6);
  EXPECT_EQ(RowFor(t, 3).un1, 0.2);
  EXPECT_EQ(RowFor(t, 16).un2, 0.5);
  EXPECT_FALSE(RowFor(t, 26).su.has_value());
  for (int col = 0; col < 3; ++col) EXPECT_NEAR(t.ColumnSum(col), 1.0, 1e-12);
}

TEST(DistributionTest, AbsentRendersDashAndNull) {
  const auto su = Codes({3});
  const DistributionTable t =
      MakeDistributionTable(su, {}, {}, CapCodebook::Default());
  const std::string text = RenderDistribution(t);
  EXPECT_NE(text.find("1.000"), std::string::npos);
  EXPECT_NE(text.find("    -"), std::string::npos);
  const nlohmann::json j = DistributionToJson(t);
  for (const auto& row : j["rows"]) {
    if (row["code"] == 3) {
      EXPECT_EQ(row["su"], 1.0);
      EXPECT_TRUE(row["un1"].is_null());
    }
  }
  const fs::path dir = testing::MakeTempDir("dist");
  const std::string path = (dir / "d.csv").string();
  WriteDistributionCsv(path, t);
  const csv::Table table = csv::ReadFile(path, {"code", "label", "su", "un1", "un2"});
  for (const auto& row : table.rows) {
    EXPECT_EQ(row[3], "-");
    if (row[0] == "3") EXPECT_EQ(row[2], "1");
  }
  fs::remove_all(dir);
}

struct BreakdownFixture {
  std::vector<Tweet> corpus;
  AccountSet accounts;
  std::vector<CodedTweet> codes;

  BreakdownFixture() {
    accounts.Add({"dem_a", Party::kDem, Chamber::kHouse, Gender::kWoman});
    accounts.Add({"gop_a", Party::kGop, Chamber::kSenate, Gender::kMan});
    int id = 0;
    auto add = [&](const std::string& handle, int code, int n) {
      for (int i = 0; i < n; ++i) {
        const std::string tid = std::to_string(id++);
        corpus.push_back({tid, handle, "", "", false});
        codes.push_back({tid, CapCode(code), 1.0});
      }
    };
    add("dem_a", 3, 60);
    add("gop_a", 3, 40);
    add("dem_a", 7, 5);
  }
};

TEST(BreakdownTest, SharesPerGroup) {
  BreakdownFixture f;
  const GroupBreakdown b = MakeGroupBreakdown(f.codes, f.corpus, f.accounts,
                                              GroupBy::kParty,
                                              CapCodebook::Default());
  const std::string dem(ToString(Party::kDem)), gop(ToString(Party::kGop));
  auto share = [&](int code, const std::string& g) {
    for (const auto& r : b.rows) {
      if (r.code == CapCode(code) && r.group == g) return r.share;
    }
    return -1.0;
  };
  EXPECT_DOUBLE_EQ(share(3, dem), 0.6);
  EXPECT_DOUBLE_EQ(share(3, gop), 0.4);
  EXPECT_DOUBLE_EQ(share(7, dem), 1.0);
  EXPECT_DOUBLE_EQ(share(7, gop), 0.0);
  // Every other codebook code has no tweets.
  EXPECT_EQ(b.omitted.size(), CapCodebook::Default().entries().size() - 2);
  EXPECT_TRUE(std::find(b.omitted.begin(), b.omitted.end(), CapCode(16)) !=
              b.omitted.end());
  EXPECT_EQ(b.rows.size(), 4u);
}

TEST(BreakdownTest, UnknownAccountsListed) {
  BreakdownFixture f;
  f.corpus.push_back({"x1", "ghost", "", "", false});
  f.codes.push_back({"x1", CapCode(3), 1.0});
  f.codes.push_back({"nowhere", CapCode(3), 1.0});
  try {
    MakeGroupBreakdown(f.codes, f.corpus, f.accounts, GroupBy::kGender,
                       CapCodebook::Default());
    FAIL() << "expected UnknownAccountError";
  } catch (const UnknownAccountError& e) {
    EXPECT_EQ(e.handles(), (std::vector<std::string>{"ghost", "tweet:nowhere"}));
  }
}

Vocabulary TokenVocab(int n) {
  std::vector<TokenizedDoc> docs;
  TokenizedDoc d{"1", {}};
  for (int i = 0; i < n; ++i) d.tokens.push_back("tok" + std::to_string(100 + i));
  docs.push_back(d);
  return Vocabulary::Build(docs, 1);
}

TEST(ClassifierFeatureTest, DominantWeightFirst) {
  const Vocabulary vocab = TokenVocab(6);
  TrainedClassifier clf;
  clf.algorithm = Algorithm::kLogisticRegression;
  clf.classes = Codes({1, 3});
  clf.dim = 6;
  clf.weights.assign(12, 0.01);
  clf.bias.assign(2, 0.0);
  clf.weights[0 * 6 + 4] = 5.0;
  clf.weights[1 * 6 + 2] = 5.0;
  const auto rows = ClassifierFeatureTable(clf, vocab, 3, CapCodebook::Default());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].groups[0][0], vocab.token(4));
  EXPECT_EQ(rows[1].groups[0][0], vocab.token(2));
  EXPECT_EQ(rows[1].label, "health");
  EXPECT_EQ(rows[1].groups[0].size(), 3u);
}

TEST(ClassifierFeatureTest, RandomWeightsMatchSortingOracle) {
  const Vocabulary vocab = TokenVocab(40);
  Rng rng(13);
  TrainedClassifier clf;
  clf.algorithm = Algorithm::kLinearSvm;
  clf.classes = Codes({1, 3, 16});
  clf.dim = 44;  // unigram block plus 4 trailing non-unigram columns
  for (std::size_t i = 0; i < 3 * clf.dim; ++i) {
    // Coarse grid so ties occur.
    clf.weights.push_back(static_cast<double>(rng.Below(9)) - 4.0);
  }
  clf.bias.assign(3, 0.0);
  const auto rows = ClassifierFeatureTable(clf, vocab, 10, CapCodebook::Default());
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<std::pair<double, std::string>> ranked;
    for (std::uint32_t j = 0; j < vocab.size(); ++j) {
      ranked.emplace_back(clf.weights[c * clf.dim + j], vocab.token(j));
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    ASSERT_EQ(rows[c].groups[0].size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_EQ(rows[c].groups[0][i], ranked[i].second);
    }
  }
}

TEST(ClassifierFeatureTest, NaiveBayesRatioAndDummy) {
  const Vocabulary vocab = TokenVocab(3);
  TrainedClassifier nb;
  nb.algorithm = Algorithm::kNaiveBayes;
  nb.classes = Codes({1, 2});
  nb.dim = 3;
  nb.log_prior = {std::log(0.5), std::log(0.5)};
  nb.log_likelihood = {std::log(0.2), std::log(0.7), std::log(0.1),
                       std::log(0.6), std::log(0.3), std::log(0.1)};
  const auto rows = ClassifierFeatureTable(nb, vocab, 2, CapCodebook::Default());
  EXPECT_EQ(rows[0].groups[0],
            (std::vector<std::string>{vocab.token(1), vocab.token(2)}));
  EXPECT_EQ(rows[1].groups[0],
            (std::vector<std::string>{vocab.token(0), vocab.token(2)}));
  TrainedClassifier dummy;
  dummy.algorithm = Algorithm::kDummy;
  dummy.classes = Codes({1, 2});
  dummy.prior = {0.5, 0.5};
  const auto d = ClassifierFeatureTable(dummy, vocab, 2, CapCodebook::Default());
  ASSERT_EQ(d.size(), 2u);
  EXPECT_TRUE(d[0].groups.empty());
}

TEST(TopicFeatureTest, MergedTopicsGiveTwoGroups) {
  std::vector<TokenizedDoc> docs = {{"1", {"a", "a", "b"}}, {"2", {"c", "c", "d"}},
                                    {"3", {"e"}}};
  const LdaCorpus c = MakeLdaCorpus(docs, 1);
  LdaConfig cfg;
  cfg.num_topics = 3;
  cfg.alpha = 0.1;
  cfg.iterations = 2;
  cfg.burn_in = 0;
  const LdaState s = LdaState::FromAssignments(cfg, c.vocab, c.doc_ids, c.docs,
                                               {{0, 0, 0}, {2, 2, 2}, {1}});
  LabelMap map;
  map.Add(2, "health b", CapCode(3));
  map.Add(0, "health a", CapCode(3));
  map.Add(1, "district affairs", CapCode(26));
  const auto rows = TopicFeatureTable(s, map, 2, CapCodebook::Default());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].code, CapCode(3));
  ASSERT_EQ(rows[0].groups.size(), 2u);
  EXPECT_EQ(rows[0].groups[0], (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rows[0].groups[1], (std::vector<std::string>{"c", "d"}));

  const fs::path dir = testing::MakeTempDir("feat");
  const std::string path = (dir / "f.csv").string();
  WriteFeatureCsv(path, rows);
  const csv::Table t = csv::ReadFile(path, {"code", "label", "features"});
  EXPECT_EQ(t.rows[0][2], "a b; c d");
  fs::remove_all(dir);
}

TEST(SharesTest, Uninterpretable) {
  EXPECT_EQ(UninterpretableShare(Codes({1, 3, 26})), 0.0);
  EXPECT_EQ(UninterpretableShare(Codes({0, 0})), 1.0);
  EXPECT_EQ(UninterpretableShare({}), 0.0);
  std::vector<CapCode> fixture;
  for (int i = 0; i < 1000; ++i) fixture.emplace_back(i < 284 ? 0 : 1 + i % 20);
  EXPECT_DOUBLE_EQ(UninterpretableShare(fixture), 0.284);
}

TEST(SharesTest, NonCapPlusCapIsOne) {
  Rng rng(4);
  std::vector<CapCode> codes;
  for (int i = 0; i < 500; ++i) codes.emplace_back(static_cast<int>(rng.Below(36)));
  EXPECT_NEAR(NonCapShare(codes) + CapShare(codes), 1.0, 1e-12);
  EXPECT_EQ(NonCapShare(Codes({0, 26, 3, 5})), 0.5);
}

TEST(GroupByTest, Parse) {
  EXPECT_EQ(ParseGroupBy("gender"), GroupBy::kGender);
  EXPECT_FALSE(ParseGroupBy("age").has_value());
}

}  // namespace
}  // namespace polagenda
