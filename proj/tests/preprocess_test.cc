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

#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "polagenda/errors.h"
#include "polagenda/preprocess.h"
#include "polagenda/random.h"
#include "test_support.h"

namespace polagenda {
namespace {

namespace fs = std::filesystem;
using testing::DefaultStoplist;

using Stoplist = std::set<std::string, std::less<>>;

TEST(TokenizeTest, GoldenCases) {
  const TokenPipeline pipeline(DefaultStoplist());
  const auto cases = testing::LoadTokenizerGolden();
  ASSERT_GE(cases.size(), 20u);
  for (const auto& c : cases) {
    EXPECT_EQ(pipeline.Tokenize(c.text), c.tokens) << c.text;
  }
}

TEST(TokenizeTest, Reduplication) {
  const TokenPipeline pipeline(Stoplist{});
  EXPECT_EQ(pipeline.Tokenize("Heeeeeeeey"),
            std::vector<std::string>{"heeey"});
  EXPECT_EQ(pipeline.Tokenize("Heeeey"), std::vector<std::string>{"heeey"});
}

TEST(TokenizeTest, EmptyText) {
  const TokenPipeline pipeline(DefaultStoplist());
  EXPECT_TRUE(pipeline.Tokenize("").empty());
}

TEST(TokenizeTest, OrderedRules) {
  const TokenPipeline pipeline(Stoplist{"now"});
  EXPECT_EQ(pipeline.Tokenize("@RepX Vote NOW!! https://t.co/ab 2020 healthcare"),
            (std::vector<std::string>{"vote", "healthcare"}));
}

TEST(TokenizeTest, NoStemming) {
  const TokenPipeline pipeline(Stoplist{});
  EXPECT_EQ(pipeline.Tokenize("running runs ran"),
            (std::vector<std::string>{"running", "runs", "ran"}));
}

TEST(TokenizeTest, BoundsAreConfigurable) {
  const TokenPipeline pipeline(Stoplist{}, 1, 4);
  EXPECT_EQ(pipeline.Tokenize("bookkeeper cat"),
            std::vector<std::string>{"bokeper"});
}

TEST(TokenPipelineTest, RejectsBadStoplist) {
  EXPECT_THROW(TokenPipeline(Stoplist{"The"}), InvalidArgumentError);
  EXPECT_THROW(TokenPipeline(Stoplist{"a b"}), InvalidArgumentError);
  EXPECT_THROW(TokenPipeline(Stoplist{""}), InvalidArgumentError);
  EXPECT_THROW(TokenPipeline(Stoplist{}, 0, 2), InvalidArgumentError);
  EXPECT_THROW(TokenPipeline(Stoplist{}, 3, 0), InvalidArgumentError);
}

TEST(PreprocessCorpusTest, NoneEmptied) {
  const TokenPipeline pipeline(DefaultStoplist());
  Corpus c = {{"1", "a", "", "health care", false},
              {"2", "a", "", "border wall", false},
              {"3", "b", "", "school lunch", false}};
  PreprocessResult r = PreprocessCorpus(pipeline, c);
  ASSERT_EQ(r.docs.size(), 3u);
  EXPECT_TRUE(r.dropped.empty());
  EXPECT_EQ(r.docs[2].tweet_id, "3");
}

TEST(PreprocessCorpusTest, UrlOnlyTweetDropped) {
  const TokenPipeline pipeline(DefaultStoplist());
  Corpus c = {{"1", "a", "", "https://t.co/abcdef", false},
              {"2", "a", "", "health care", false}};
  PreprocessResult r = PreprocessCorpus(pipeline, c);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0], "1");
  EXPECT_TRUE(r.docs[0].tokens.empty());
}

// Second implementation of the rules for ASCII text.
std::string CollapseAscii(const std::string& s, int max_repeat) {
  std::string out;
  int run = 0;
  for (char c : s) {
    run = (!out.empty() && out.back() == c) ? run + 1 : 1;
    if (run <= max_repeat) out += c;
  }
  return out;
}

std::vector<std::string> ReferenceTokenize(std::string text,
                                           const Stoplist& stop) {
  for (char& c : text) c = static_cast<char>(std::tolower(c));
  text = std::regex_replace(text, std::regex("@[a-z0-9_]+"), "");
  std::string no_urls;
  for (std::size_t i = 0; i < text.size();) {
    const bool boundary = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
    const std::string rest = text.substr(i);
    if (boundary && (rest.rfind("http://", 0) == 0 ||
                     rest.rfind("https://", 0) == 0 ||
                     rest.rfind("www.", 0) == 0 || rest.rfind("t.co/", 0) == 0)) {
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      continue;
    }
    no_urls += text[i++];
  }
  text = CollapseAscii(no_urls, 3);
  std::vector<std::string> out;
  std::string word;
  std::istringstream in(text);
  while (in >> word) {
    bool digit = false;
    for (char c : word) digit |= std::isdigit(static_cast<unsigned char>(c)) != 0;
    if (digit || stop.contains(word)) continue;
    std::string letters;
    for (char c : word) {
      if (std::isalpha(static_cast<unsigned char>(c))) letters += c;
    }
    letters = CollapseAscii(letters, 3);
    if (letters.size() < 2 || stop.contains(letters)) continue;
    out.push_back(letters);
  }
  return out;
}

TEST(PreprocessCorpusTest, MatchesReferenceOnSyntheticTweets) {
  const Stoplist stop = DefaultStoplist();
  std::vector<std::string> stopwords;
  for (const std::string& w : stop) {
    bool ascii = true;
    for (char c : w) ascii &= static_cast<unsigned char>(c) < 0x80;
    if (ascii) stopwords.push_back(w);
  }
  const std::vector<std::string> content = {
      "health", "Care", "BORDER", "veterans", "jobs!!", "#taxes", "co-op",
      "sooooo", "greeeat", "it's", "H.R.", "x", "b2b", "2018", "100%",
      "@rep_1", "@Sen_Smith:", "https://t.co/aB1", "www.example.org",
      "nowww.x", "rep@house.gov", "(vote)", "...", "a", "The", "NOW"};
  Rng rng(2024);
  Corpus corpus;
  for (int i = 0; i < 1000; ++i) {
    std::string text;
    const std::size_t n = rng.Below(15);
    for (std::size_t j = 0; j < n; ++j) {
      if (j) text += rng.Uniform() < 0.1 ? "\t" : " ";
      text += rng.Uniform() < 0.3 ? stopwords[rng.Below(stopwords.size())]
                                  : content[rng.Below(content.size())];
    }
    corpus.push_back({std::to_string(i), "a", "", text, false});
  }
  const TokenPipeline pipeline(stop);
  PreprocessResult r = PreprocessCorpus(pipeline, corpus);
  std::size_t total = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto expected = ReferenceTokenize(corpus[i].text, stop);
    EXPECT_EQ(r.docs[i].tokens, expected) << corpus[i].text;
    total += expected.size();
  }
  EXPECT_GT(total, 1000u);
}

TEST(LoadStoplistTest, SingleFile) {
  const fs::path dir = testing::MakeTempDir("stop");
  const std::string path = (dir / "s.txt").string();
  std::ofstream(path) << "the\nla\n";
  const std::vector<std::string> paths = {path};
  EXPECT_EQ(LoadStoplist(paths), (Stoplist{"the", "la"}));
  fs::remove_all(dir);
}

TEST(LoadStoplistTest, UnionWithoutDuplicates) {
  const fs::path dir = testing::MakeTempDir("stop");
  const std::string a = (dir / "a.txt").string();
  const std::string b = (dir / "b.txt").string();
  std::ofstream(a) << "# comment\nthe\nde\n";
  std::ofstream(b) << "de\nLa\n\n";
  const std::vector<std::string> paths = {a, b};
  EXPECT_EQ(LoadStoplist(paths), (Stoplist{"the", "de", "la"}));
  fs::remove_all(dir);
}

std::size_t CountEntries(const std::string& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) n += !line.empty() && line[0] != '#';
  return n;
}

TEST(LoadStoplistTest, BundledLists) {
  const std::string en = testing::StoplistDir() + "/english.txt";
  const std::string es = testing::StoplistDir() + "/spanish.txt";
  EXPECT_EQ(CountEntries(en), 179u);
  EXPECT_EQ(CountEntries(es), 313u);
  const std::vector<std::string> en_only = {en}, es_only = {es};
  const Stoplist e = LoadStoplist(en_only), s = LoadStoplist(es_only);
  std::size_t shared = 0;
  for (const std::string& w : e) shared += s.contains(w);
  const Stoplist both = DefaultStoplist();
  EXPECT_EQ(both.size(), 179u + 313u - shared);
  EXPECT_EQ(both.size(), 485u);
}

TEST(LoadStoplistTest, MissingFileIsIoError) {
  const std::vector<std::string> paths = {"/nonexistent/stop.txt"};
  EXPECT_THROW(LoadStoplist(paths), IoError);
}

TEST(TokenizedCacheTest, RoundTrip) {
  const fs::path dir = testing::MakeTempDir("tok");
  const std::string path = (dir / "t.jsonl").string();
  std::vector<TokenizedDoc> docs = {{"1", {"salud", "ñandú"}}, {"2", {}}};
  WriteTokenized(path, docs);
  EXPECT_EQ(LoadTokenized(path), docs);
  fs::remove_all(dir);
}

TEST(UnicodeHelpersTest, LowerAndLength) {
  EXPECT_EQ(ToLowerUtf8("ÉLECTION Día"), "élection día");
  EXPECT_EQ(CodePointLength("ñandú"), 5u);
}

}  // namespace
}  // namespace polagenda
