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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "polagenda/corpus.h"
#include "polagenda/errors.h"
#include "polagenda/random.h"
#include "test_support.h"

namespace polagenda {
namespace {

namespace fs = std::filesystem;
using testing::MakeTempDir;

Tweet MakeTweet(std::string id, std::string handle, bool retweet = false) {
  return Tweet{std::move(id), std::move(handle), "2017-05-01T12:00:00Z",
               "some text", retweet};
}

LabeledTweet MakeLabeled(std::string id, int code, bool retweet = false) {
  return LabeledTweet{MakeTweet(std::move(id), "rep_a", retweet),
                      CapCode(code)};
}

TEST(CapCodeTest, Ranges) {
  EXPECT_TRUE(CapCode(0).is_not_policy());
  EXPECT_TRUE(CapCode(1).is_cap());
  EXPECT_FALSE(CapCode(11).is_cap());
  EXPECT_FALSE(CapCode(22).is_cap());
  EXPECT_TRUE(CapCode(23).is_cap());
  EXPECT_TRUE(CapCode(26).is_extended());
  EXPECT_FALSE(CapCode(36).is_known());
  EXPECT_TRUE(IsLabelCode(CapCode(3)));
  EXPECT_FALSE(IsLabelCode(CapCode(26)));
}

TEST(LoadTweetsTest, ThreeValidLines) {
  const fs::path dir = MakeTempDir("corpus");
  const std::string path = (dir / "t.jsonl").string();
  std::ofstream(path)
      << R"({"id":"1","account_handle":"a","posted_at":"2017-05-01T12:00:00Z","text":"hi","is_retweet":false})"
      << "\n"
      << R"({"id":"2","account_handle":"a","posted_at":"2017-05-01T12:00:00Z","text":"yo","is_retweet":true})"
      << "\n\n"
      << R"({"id":"3","account_handle":"b","posted_at":"2017-05-01T12:00:00Z","text":"","is_retweet":false})"
      << "\n";
  Corpus c = LoadTweets(path);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[1].text, "yo");
  EXPECT_TRUE(c[1].is_retweet);
  fs::remove_all(dir);
}

TEST(LoadTweetsTest, MissingTextNamesLine) {
  const fs::path dir = MakeTempDir("corpus");
  const std::string path = (dir / "t.jsonl").string();
  std::ofstream(path)
      << R"({"id":"1","account_handle":"a","posted_at":"2017-05-01T12:00:00Z","text":"hi","is_retweet":false})"
      << "\n"
      << R"({"id":"2","account_handle":"a","posted_at":"2017-05-01T12:00:00Z","is_retweet":false})"
      << "\n";
  try {
    LoadTweets(path);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("text"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(LoadTweetsTest, MissingFileIsIoError) {
  EXPECT_THROW(LoadTweets("/nonexistent/tweets.jsonl"), IoError);
}

TEST(LoadTweetsTest, ThousandLineRoundTrip) {
  Rng rng(42);
  Corpus corpus;
  const std::vector<std::string> pieces = {
      "health", "Care", "\"quoted\"", "back\\slash", "tab\there", "ñandú",
      "\xF0\x9F\x87\xBA\xF0\x9F\x87\xB8", "https://t.co/x", "@rep_1", ","};
  for (int i = 0; i < 1000; ++i) {
    Tweet t;
    t.id = std::to_string(900000000000000000LL + i);
    t.account_handle = "rep_" + std::to_string(rng.Below(50));
    t.posted_at = "2017-01-" + std::to_string(10 + rng.Below(20)) + "T00:00:00Z";
    const std::size_t n = rng.Below(12);
    for (std::size_t j = 0; j < n; ++j) {
      if (j) t.text += ' ';
      t.text += pieces[rng.Below(pieces.size())];
    }
    t.is_retweet = rng.Uniform() < 0.2;
    corpus.push_back(t);
  }
  const fs::path dir = MakeTempDir("corpus");
  const std::string path = (dir / "t.jsonl").string();
  WriteTweets(path, corpus);
  Corpus back = LoadTweets(path);
  ASSERT_EQ(back.size(), 1000u);
  EXPECT_EQ(back, corpus);
  fs::remove_all(dir);
}

TEST(LabeledTweetsTest, RoundTripAndBadCodes) {
  const fs::path dir = MakeTempDir("corpus");
  const std::string path = (dir / "l.jsonl").string();
  std::vector<LabeledTweet> labeled = {MakeLabeled("1", 3),
                                       MakeLabeled("2", 0)};
  WriteLabeledTweets(path, labeled);
  EXPECT_EQ(LoadLabeledTweets(path), labeled);

  for (int bad : {11, 22, 26, -1}) {
    std::ofstream(path)
        << R"({"id":"1","account_handle":"a","posted_at":"2017-05-01T12:00:00Z","text":"t","is_retweet":false,"code":)"
        << bad << "}\n";
    EXPECT_THROW(LoadLabeledTweets(path), SchemaError) << bad;
  }
  fs::remove_all(dir);
}

TEST(AccountsTest, RoundTripAndDuplicates) {
  AccountSet set;
  set.Add({"rep_a", Party::kGop, Chamber::kHouse, Gender::kMan});
  set.Add({"rep_b", Party::kDem, Chamber::kSenate, Gender::kWoman});
  EXPECT_THROW(set.Add({"rep_a", Party::kDem, Chamber::kHouse, Gender::kMan}),
               DuplicateIdError);
  const fs::path dir = MakeTempDir("corpus");
  const std::string path = (dir / "a.csv").string();
  WriteAccounts(path, set);
  AccountSet back = LoadAccounts(path);
  ASSERT_EQ(back.size(), 2u);
  const Account* b = back.Find("rep_b");
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->party, Party::kDem);
  EXPECT_EQ(b->chamber, Chamber::kSenate);
  EXPECT_EQ(b->gender, Gender::kWoman);
  fs::remove_all(dir);
}

TEST(FilterOriginalsTest, AllOriginalsIdentity) {
  Corpus c = {MakeTweet("1", "a"), MakeTweet("2", "b")};
  EXPECT_EQ(FilterOriginals(c), c);
}

TEST(FilterOriginalsTest, AllRetweetsEmpty) {
  Corpus c = {MakeTweet("1", "a", true), MakeTweet("2", "b", true)};
  EXPECT_TRUE(FilterOriginals(c).empty());
}

TEST(FilterOriginalsTest, LabeledCorpusSizes) {
  // 68,398 labeled tweets, of which 59,826 are originals.
  std::vector<LabeledTweet> labeled;
  Rng rng(3);
  std::size_t retweets = 0;
  for (int i = 0; i < 68398; ++i) {
    const bool rt = retweets < 68398 - 59826 && rng.Uniform() < 0.2;
    retweets += rt;
    labeled.push_back(MakeLabeled(std::to_string(i), 0, rt));
  }
  while (retweets < 68398 - 59826) {
    for (LabeledTweet& t : labeled) {
      if (!t.tweet.is_retweet) {
        t.tweet.is_retweet = true;
        ++retweets;
        break;
      }
    }
  }
  EXPECT_EQ(FilterOriginals(labeled).size(), 59826u);
}

TEST(StratifiedSplitTest, SingleClassNinetyTen) {
  std::vector<LabeledTweet> labeled;
  for (int i = 0; i < 100; ++i) labeled.push_back(MakeLabeled(std::to_string(i), 3));
  Split s = StratifiedSplit(labeled, 0.1, 1);
  EXPECT_EQ(s.train.size(), 90u);
  EXPECT_EQ(s.test.size(), 10u);
}

TEST(StratifiedSplitTest, TwoClassesEightyTwenty) {
  std::vector<LabeledTweet> labeled;
  for (int i = 0; i < 100; ++i) {
    labeled.push_back(MakeLabeled(std::to_string(i), i < 80 ? 1 : 2));
  }
  Split s = StratifiedSplit(labeled, 0.1, 9);
  std::map<int, int> test_counts;
  for (const auto& t : s.test) ++test_counts[t.code.value()];
  EXPECT_EQ(test_counts[1], 8);
  EXPECT_EQ(test_counts[2], 2);
  EXPECT_EQ(s.train.size(), 90u);
  // Disjoint and covering.
  std::set<std::string> ids;
  for (const auto& t : s.train) ids.insert(t.tweet.id);
  for (const auto& t : s.test) ids.insert(t.tweet.id);
  EXPECT_EQ(ids.size(), 100u);
}

TEST(StratifiedSplitTest, SameSeedSamePartition) {
  std::vector<LabeledTweet> labeled;
  for (int i = 0; i < 200; ++i) {
    labeled.push_back(MakeLabeled(std::to_string(i), i % 3));
  }
  Split a = StratifiedSplit(labeled, 0.25, 77);
  Split b = StratifiedSplit(labeled, 0.25, 77);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  Split c = StratifiedSplit(labeled, 0.25, 78);
  EXPECT_NE(a.test, c.test);
}

TEST(StratifiedSplitTest, RejectsBadInput) {
  std::vector<LabeledTweet> none;
  EXPECT_THROW(StratifiedSplit(none, 0.1, 1), EmptyClassError);
  std::vector<LabeledTweet> one = {MakeLabeled("1", 1)};
  EXPECT_THROW(StratifiedSplit(one, 0.0, 1), InvalidArgumentError);
  EXPECT_THROW(StratifiedSplit(one, 1.0, 1), InvalidArgumentError);
}

TEST(RebalanceTest, NotPolicySubsample) {
  std::vector<LabeledTweet> labeled;
  int id = 0;
  for (int i = 0; i < 20122; ++i) labeled.push_back(MakeLabeled(std::to_string(id++), 0));
  for (int i = 0; i < 39704; ++i) {
    labeled.push_back(MakeLabeled(std::to_string(id++), 1 + i % 20));
  }
  auto out = RebalanceSubsample(labeled, kNotPolicy, 2012, 5);
  EXPECT_EQ(out.size(), 41716u);
  std::size_t zeros = 0;
  for (const auto& t : out) zeros += t.code.is_not_policy();
  EXPECT_EQ(zeros, 2012u);
}

TEST(RebalanceTest, IdentityAndZeroTarget) {
  std::vector<LabeledTweet> labeled;
  for (int i = 0; i < 30; ++i) labeled.push_back(MakeLabeled(std::to_string(i), i % 2));
  EXPECT_EQ(RebalanceSubsample(labeled, kNotPolicy, 15, 1), labeled);
  auto none = RebalanceSubsample(labeled, kNotPolicy, 0, 1);
  EXPECT_EQ(none.size(), 15u);
  for (const auto& t : none) EXPECT_EQ(t.code.value(), 1);
  EXPECT_THROW(RebalanceSubsample(labeled, kNotPolicy, 16, 1),
               TargetTooLargeError);
}

TEST(GroupCountsTest, Singleton) {
  AccountSet accounts;
  accounts.Add({"rep_a", Party::kGop, Chamber::kHouse, Gender::kMan});
  Corpus c = {MakeTweet("1", "rep_a")};
  GroupCounts g = CountByGroup(c, accounts);
  EXPECT_EQ(g.Total(), 1u);
  EXPECT_EQ(g.At({Party::kGop, Chamber::kHouse, Gender::kMan}), 1u);
  EXPECT_EQ(g.cells().size(), 1u);
}

TEST(GroupCountsTest, KnownCellCounts) {
  AccountSet accounts;
  std::map<GroupKey, std::size_t> planted;
  Corpus c;
  int handle = 0, id = 0;
  for (Party p : {Party::kDem, Party::kGop}) {
    for (Chamber ch : {Chamber::kHouse, Chamber::kSenate}) {
      for (Gender g : {Gender::kMan, Gender::kWoman}) {
        const std::string h = "rep_" + std::to_string(handle);
        accounts.Add({h, p, ch, g});
        const std::size_t n = 3 + static_cast<std::size_t>(handle) * 7;
        planted[{p, ch, g}] = n;
        for (std::size_t i = 0; i < n; ++i) {
          c.push_back(MakeTweet(std::to_string(id++), h));
        }
        ++handle;
      }
    }
  }
  GroupCounts g = CountByGroup(c, accounts);
  for (const auto& [key, n] : planted) EXPECT_EQ(g.At(key), n);
  EXPECT_EQ(g.Total(), c.size());
  EXPECT_EQ(g.ByParty(Party::kDem) + g.ByParty(Party::kGop), c.size());
}

TEST(GroupCountsTest, GenderTotals) {
  GroupCounts g;
  g.Add({Party::kDem, Chamber::kHouse, Gender::kMan}, 600000);
  g.Add({Party::kGop, Chamber::kSenate, Gender::kMan}, 513365);
  g.Add({Party::kDem, Chamber::kSenate, Gender::kWoman}, 372469);
  EXPECT_EQ(g.ByGender(Gender::kMan), 1113365u);
  EXPECT_EQ(g.ByGender(Gender::kWoman), 372469u);
  EXPECT_EQ(g.Total(), 1485834u);
}

TEST(GroupCountsTest, UnknownHandlesListed) {
  AccountSet accounts;
  accounts.Add({"rep_a", Party::kGop, Chamber::kHouse, Gender::kMan});
  Corpus c = {MakeTweet("1", "rep_z"), MakeTweet("2", "rep_a"),
              MakeTweet("3", "rep_y")};
  try {
    CountByGroup(c, accounts);
    FAIL() << "expected UnknownAccountError";
  } catch (const UnknownAccountError& e) {
    EXPECT_EQ(e.handles().size(), 2u);
  }
}

}  // namespace
}  // namespace polagenda
