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

// Writes the synthetic end-to-end fixture: tweets, accounts, a labeled
// subset, a codebook, a lexicon, pre-trained embeddings and a run config.
// The label map is authored by hand from the fitted topics.
//
//   make_fixture OUT_DIR [--tweets N] [--labeled N] [--seed S]

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polagenda/codebook.h"
#include "polagenda/corpus.h"
#include "polagenda/csv.h"
#include "polagenda/features.h"
#include "polagenda/random.h"

namespace {

using polagenda::CapCode;
using polagenda::Rng;

struct Theme {
  const char* name;
  int label_code;  // supervised label (0 or CAP)
  double weight;
  std::vector<std::string> words;
};

const std::vector<Theme>& Themes() {
  static const std::vector<Theme> themes = {
      {"health", 3, 0.16,
       {"health", "care", "insurance", "medicare", "hospital", "patients",
        "opioid", "coverage", "medicaid", "doctors", "prescription", "drugs",
        "salud", "clinic"}},
      {"defense", 16, 0.10,
       {"military", "troops", "veterans", "defense", "army", "navy",
        "service", "soldiers", "deployment", "pentagon", "missile",
        "readiness"}},
      {"education", 6, 0.09,
       {"school", "students", "teachers", "education", "college", "loans",
        "classroom", "learning", "tuition", "graduates", "escuela",
        "campus"}},
      {"economy", 1, 0.12,
       {"economy", "jobs", "taxes", "budget", "growth", "inflation",
        "wages", "workers", "deficit", "spending", "reform", "paycheck",
        "trabajo"}},
      {"environment", 7, 0.07,
       {"climate", "pollution", "water", "environment", "conservation",
        "wildlife", "emissions", "clean", "parks", "forests", "rivers"}},
      {"immigration", 9, 0.08,
       {"immigration", "border", "daca", "immigrants", "asylum", "dreamers",
        "visa", "deportation", "wall", "refugees", "inmigrantes"}},
      {"district", 0, 0.14,
       {"district", "town", "hall", "visit", "community", "local",
        "constituents", "office", "county", "meeting", "tour", "mayor"}},
      {"celebration", 0, 0.14,
       {"happy", "birthday", "congratulations", "great", "team", "proud",
        "celebrate", "honor", "thank", "champions", "anniversary",
        "felicidades"}},
      {"media", 0, 0.10,
       {"interview", "tune", "live", "tonight", "watch", "joined", "discuss",
        "radio", "podcast", "show", "morning", "segment"}},
  };
  return themes;
}

const std::vector<std::string>& Filler() {
  static const std::vector<std::string> filler = {
      "the",   "and",    "to",      "of",     "for",   "we",     "our",
      "this",  "today",  "must",    "need",   "people", "america", "country",
      "new",   "work",   "support", "vote",   "bill",  "act",    "week",
      "de",    "la",     "que",     "los",    "para",  "nuestra", "time",
      "year",  "every",  "family",  "families", "right", "help",  "house",
      "senate", "plan",  "leaders", "future", "state"};
  return filler;
}

const char* const kNoise[] = {"https://t.co/aB3xYz", "www.example.org/x",
                              "2018", "#1", "100%", "\xF0\x9F\x87\xBA\xF0\x9F\x87\xB8",
                              "\xF0\x9F\x91\x8F", "sooooo", "greaaaat",
                              "RT:", "&amp;"};

std::size_t PickTheme(Rng& rng) {
  double u = rng.Uniform();
  const auto& themes = Themes();
  for (std::size_t i = 0; i < themes.size(); ++i) {
    if (u < themes[i].weight) return i;
    u -= themes[i].weight;
  }
  return themes.size() - 1;
}

template <typename T>
const T& Pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.Below(v.size()))];
}

std::string MakeText(Rng& rng, std::size_t theme, std::size_t n_accounts) {
  // Nothing in these survives preprocessing.
  if (rng.Uniform() < 0.02) {
    return "@rep_" + std::to_string(rng.Below(n_accounts)) +
           " https://t.co/Qz81 " + kNoise[rng.Below(5)];
  }
  const auto& words = Themes()[theme].words;
  const std::size_t len = 8 + static_cast<std::size_t>(rng.Below(9));
  std::string text;
  for (std::size_t i = 0; i < len; ++i) {
    if (!text.empty()) text += ' ';
    const double u = rng.Uniform();
    if (u < 0.50) {
      std::string w = Pick(rng, words);
      if (rng.Uniform() < 0.15) w[0] = static_cast<char>(std::toupper(w[0]));
      text += w;
    } else if (u < 0.62) {
      text += Pick(rng, Pick(rng, Themes()).words);
    } else if (u < 0.92) {
      text += Pick(rng, Filler());
    } else if (u < 0.96) {
      text += "@rep_" + std::to_string(rng.Below(n_accounts));
    } else {
      text += kNoise[rng.Below(std::size(kNoise))];
    }
  }
  return text;
}

std::string Timestamp(Rng& rng) {
  const int day = 1 + static_cast<int>(rng.Below(28));
  const int month = 1 + static_cast<int>(rng.Below(12));
  const int hour = static_cast<int>(rng.Below(24));
  char buf[32];
  std::snprintf(buf, sizeof buf, "2017-%02d-%02dT%02d:%02d:00Z", month, day,
                hour, static_cast<int>(rng.Below(60)));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Write the synthetic end-to-end fixture"};
  std::string out_dir;
  std::size_t n_tweets = 10000;
  std::size_t n_labeled = 2000;
  std::size_t n_accounts = 60;
  std::uint64_t seed = 20170103;
  app.add_option("out_dir", out_dir, "output directory")->required();
  app.add_option("--tweets", n_tweets, "number of tweets");
  app.add_option("--labeled", n_labeled, "number of labeled tweets");
  app.add_option("--accounts", n_accounts, "number of accounts");
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  Rng rng(seed);

  polagenda::AccountSet accounts;
  for (std::size_t i = 0; i < n_accounts; ++i) {
    polagenda::Account a;
    a.handle = "rep_" + std::to_string(i);
    a.party = rng.Uniform() < 0.5 ? polagenda::Party::kDem
                                  : polagenda::Party::kGop;
    a.chamber = rng.Uniform() < 0.8 ? polagenda::Chamber::kHouse
                                    : polagenda::Chamber::kSenate;
    a.gender = rng.Uniform() < 0.75 ? polagenda::Gender::kMan
                                    : polagenda::Gender::kWoman;
    accounts.Add(a);
  }
  polagenda::WriteAccounts((dir / "accounts.csv").string(), accounts);

  // GOP accounts trade half their environment tweets for defense.
  auto theme_for = [&](const polagenda::Account& a) {
    std::size_t t = PickTheme(rng);
    if (a.party == polagenda::Party::kGop && Themes()[t].label_code == 7 &&
        rng.Uniform() < 0.5) {
      t = 1;
    }
    return t;
  };

  polagenda::Corpus tweets;
  for (std::size_t i = 0; i < n_tweets; ++i) {
    const polagenda::Account& a =
        accounts.accounts()[rng.Below(accounts.size())];
    polagenda::Tweet t;
    t.id = "t" + std::to_string(100000 + i);
    t.account_handle = a.handle;
    t.posted_at = Timestamp(rng);
    t.text = MakeText(rng, theme_for(a), n_accounts);
    t.is_retweet = rng.Uniform() < 0.05;
    tweets.push_back(std::move(t));
  }
  polagenda::WriteTweets((dir / "tweets.jsonl").string(), tweets);

  std::vector<polagenda::LabeledTweet> labeled;
  for (std::size_t i = 0; i < n_labeled; ++i) {
    const polagenda::Account& a =
        accounts.accounts()[rng.Below(accounts.size())];
    const std::size_t theme = theme_for(a);
    polagenda::LabeledTweet lt;
    lt.tweet.id = "L" + std::to_string(10000 + i);
    lt.tweet.account_handle = a.handle;
    lt.tweet.posted_at = Timestamp(rng);
    lt.tweet.text = MakeText(rng, theme, n_accounts);
    lt.code = CapCode(Themes()[theme].label_code);
    labeled.push_back(std::move(lt));
  }
  polagenda::WriteLabeledTweets((dir / "labeled.jsonl").string(), labeled);

  {
    std::ofstream out(dir / "lexicon.csv", std::ios::binary);
    polagenda::csv::WriteRow(out, {"category", "pattern"});
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"health", "health*"}, {"health", "hospital"}, {"health", "doctor*"},
        {"money", "tax*"},     {"money", "budget"},    {"money", "wage*"},
        {"social", "famil*"},  {"social", "community"}, {"social", "people"},
        {"posemo", "happy"},   {"posemo", "proud"},    {"posemo", "great"},
        {"negemo", "crisis"},  {"negemo", "pollution"}};
    for (const auto& [cat, pat] : rows) {
      polagenda::csv::WriteRow(out, {cat, pat});
    }
  }

  // Theme words sit near a per-theme centroid.
  const std::size_t dim = 25;
  polagenda::EmbeddingTable table(dim);
  Rng erng(seed ^ 0x5eedULL);
  for (const Theme& theme : Themes()) {
    std::vector<double> centroid(dim);
    for (double& c : centroid) c = erng.Uniform() * 2 - 1;
    for (const std::string& w : theme.words) {
      if (table.Find(w) != nullptr) continue;
      std::vector<double> v(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        v[d] = centroid[d] + 0.3 * (erng.Uniform() * 2 - 1);
      }
      table.Add(w, v);
    }
  }
  polagenda::WriteEmbeddings((dir / "embeddings.txt").string(), table);

  nlohmann::json config{
      {"tweets", "tweets.jsonl"},   {"accounts", "accounts.csv"},
      {"codebook", "codebook.csv"}, {"labeled", "labeled.jsonl"},
      {"labelmap", "labelmap.csv"}, {"embeddings", "embeddings.txt"},
      {"lexicon", "lexicon.csv"},   {"out_dir", "out"},
      {"min_df", 3},                {"sgns_dim", 50},
      {"variants", true},             {"k", 10},
      {"iterations", 300},          {"burn_in", 50},
      {"sweep", {5, 10}},           {"seed", 7}};
  std::ofstream(dir / "config.json", std::ios::binary) << config.dump(2)
                                                       << '\n';
  std::cout << "wrote " << tweets.size() << " tweets, " << labeled.size()
            << " labeled tweets and " << accounts.size() << " accounts to "
            << out_dir << '\n';
  return 0;
}
