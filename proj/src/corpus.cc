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

#include "polagenda/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "polagenda/csv.h"
#include "polagenda/errors.h"
#include "polagenda/random.h"

namespace polagenda {

namespace {

using nlohmann::json;

std::string JoinHandles(const std::vector<std::string>& handles) {
  std::string out;
  for (const auto& h : handles) {
    if (!out.empty()) out += ", ";
    out += h;
  }
  return out;
}

const json& Field(const json& obj, const char* name, std::size_t line_no) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw SchemaError(line_no, std::string("missing field '") + name + "'");
  }
  return *it;
}

std::string StringField(const json& obj, const char* name,
                        std::size_t line_no) {
  const json& v = Field(obj, name, line_no);
  if (!v.is_string()) {
    throw SchemaError(line_no, std::string("field '") + name +
                                   "' must be a string");
  }
  return v.get<std::string>();
}

// Accepts YYYY-MM-DDTHH:MM:SS with optional fraction and a Z or +hh:mm
// offset. The value is kept verbatim.
bool LooksLikeIso8601(std::string_view s) {
  auto digits = [&](std::size_t pos, std::size_t n) {
    if (pos + n > s.size()) return false;
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  };
  if (!(digits(0, 4) && s.size() > 4 && s[4] == '-' && digits(5, 2) &&
        s.size() > 7 && s[7] == '-' && digits(8, 2))) {
    return false;
  }
  if (s.size() == 10) return true;
  if (s.size() < 19 || (s[10] != 'T' && s[10] != ' ') || !digits(11, 2) ||
      s[13] != ':' || !digits(14, 2) || s[16] != ':' || !digits(17, 2)) {
    return false;
  }
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) return false;
  }
  if (pos == s.size()) return true;
  if (s[pos] == 'Z') return pos + 1 == s.size();
  if (s[pos] == '+' || s[pos] == '-') {
    return pos + 6 == s.size() && digits(pos + 1, 2) && s[pos + 3] == ':' &&
           digits(pos + 4, 2);
  }
  return false;
}

Tweet ParseTweet(const json& obj, std::size_t line_no) {
  if (!obj.is_object()) throw SchemaError(line_no, "expected a JSON object");
  Tweet t;
  t.id = StringField(obj, "id", line_no);
  t.account_handle = StringField(obj, "account_handle", line_no);
  t.posted_at = StringField(obj, "posted_at", line_no);
  t.text = StringField(obj, "text", line_no);
  const json& rt = Field(obj, "is_retweet", line_no);
  if (!rt.is_boolean()) {
    throw SchemaError(line_no, "field 'is_retweet' must be a boolean");
  }
  t.is_retweet = rt.get<bool>();
  if (t.id.empty()) throw SchemaError(line_no, "empty id");
  if (!LooksLikeIso8601(t.posted_at)) {
    throw SchemaError(line_no, "posted_at is not ISO-8601: " + t.posted_at);
  }
  return t;
}

json TweetToJson(const Tweet& t) {
  return json{{"id", t.id},
              {"account_handle", t.account_handle},
              {"posted_at", t.posted_at},
              {"text", t.text},
              {"is_retweet", t.is_retweet}};
}

template <typename Fn>
void ForEachJsonLine(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw IoError(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError(line_no, std::string("invalid JSON: ") + e.what());
    }
    fn(obj, line_no);
  }
}

}  // namespace

UnknownAccountError::UnknownAccountError(std::vector<std::string> handles)
    : Error(ErrorCategory::kData, "unknown account handles: " +
                                      JoinHandles(handles)),
      handles_(std::move(handles)) {}

std::string_view ToString(Party p) {
  return p == Party::kDem ? "Dem" : "GOP";
}
std::string_view ToString(Chamber c) {
  return c == Chamber::kHouse ? "House" : "Senate";
}
std::string_view ToString(Gender g) {
  return g == Gender::kMan ? "Man" : "Woman";
}

std::optional<Party> ParseParty(std::string_view s) {
  if (s == "Dem") return Party::kDem;
  if (s == "GOP") return Party::kGop;
  return std::nullopt;
}
std::optional<Chamber> ParseChamber(std::string_view s) {
  if (s == "House") return Chamber::kHouse;
  if (s == "Senate") return Chamber::kSenate;
  return std::nullopt;
}
std::optional<Gender> ParseGender(std::string_view s) {
  if (s == "Man") return Gender::kMan;
  if (s == "Woman") return Gender::kWoman;
  return std::nullopt;
}

void AccountSet::Add(Account account) {
  if (account.handle.empty()) {
    throw InvalidArgumentError("account handle must be non-empty");
  }
  if (index_.contains(account.handle)) {
    throw DuplicateIdError(account.handle);
  }
  index_.emplace(account.handle, accounts_.size());
  accounts_.push_back(std::move(account));
}

const Account* AccountSet::Find(std::string_view handle) const {
  auto it = index_.find(std::string(handle));
  return it == index_.end() ? nullptr : &accounts_[it->second];
}

Corpus LoadTweets(const std::string& path) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  ForEachJsonLine(path, [&](const json& obj, std::size_t line_no) {
    Tweet t = ParseTweet(obj, line_no);
    if (!seen.insert(t.id).second) throw DuplicateIdError(t.id);
    corpus.push_back(std::move(t));
  });
  return corpus;
}

void WriteTweets(const std::string& path, std::span<const Tweet> corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  for (const Tweet& t : corpus) out << TweetToJson(t).dump() << '\n';
}

std::vector<LabeledTweet> LoadLabeledTweets(const std::string& path) {
  std::vector<LabeledTweet> labeled;
  std::unordered_set<std::string> seen;
  ForEachJsonLine(path, [&](const json& obj, std::size_t line_no) {
    Tweet t = ParseTweet(obj, line_no);
    const json& c = Field(obj, "code", line_no);
    if (!c.is_number_integer()) {
      throw SchemaError(line_no, "field 'code' must be an integer");
    }
    CapCode code(c.get<int>());
    if (!IsLabelCode(code)) {
      throw SchemaError(line_no, "code " + std::to_string(code.value()) +
                                     " is not a CAP macro code or 0");
    }
    if (!seen.insert(t.id).second) throw DuplicateIdError(t.id);
    labeled.push_back({std::move(t), code});
  });
  return labeled;
}

void WriteLabeledTweets(const std::string& path,
                        std::span<const LabeledTweet> labeled) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  for (const LabeledTweet& lt : labeled) {
    json obj = TweetToJson(lt.tweet);
    obj["code"] = lt.code.value();
    out << obj.dump() << '\n';
  }
}

AccountSet LoadAccounts(const std::string& path) {
  csv::Table table =
      csv::ReadFile(path, {"handle", "party", "chamber", "gender"});
  const std::size_t h = table.Column("handle"), p = table.Column("party"),
                    c = table.Column("chamber"), g = table.Column("gender");
  AccountSet accounts;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line_no = table.line_numbers[i];
    auto party = ParseParty(row[p]);
    auto chamber = ParseChamber(row[c]);
    auto gender = ParseGender(row[g]);
    if (!party) throw SchemaError(line_no, "bad party '" + row[p] + "'");
    if (!chamber) throw SchemaError(line_no, "bad chamber '" + row[c] + "'");
    if (!gender) throw SchemaError(line_no, "bad gender '" + row[g] + "'");
    if (row[h].empty()) throw SchemaError(line_no, "empty handle");
    accounts.Add({row[h], *party, *chamber, *gender});
  }
  return accounts;
}

void WriteAccounts(const std::string& path, const AccountSet& accounts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path);
  csv::WriteRow(out, {"handle", "party", "chamber", "gender"});
  for (const Account& a : accounts.accounts()) {
    csv::WriteRow(out, {a.handle, std::string(ToString(a.party)),
                        std::string(ToString(a.chamber)),
                        std::string(ToString(a.gender))});
  }
}

Corpus FilterOriginals(std::span<const Tweet> corpus) {
  Corpus out;
  for (const Tweet& t : corpus) {
    if (!t.is_retweet) out.push_back(t);
  }
  return out;
}

std::vector<LabeledTweet> FilterOriginals(
    std::span<const LabeledTweet> labeled) {
  std::vector<LabeledTweet> out;
  for (const LabeledTweet& lt : labeled) {
    if (!lt.tweet.is_retweet) out.push_back(lt);
  }
  return out;
}

SplitIndices StratifiedSplitIndices(std::span<const CapCode> codes,
                                    double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidArgumentError("test_fraction must lie in (0, 1)");
  }
  if (codes.empty()) throw EmptyClassError("no labeled instances to split");

  std::map<CapCode, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    by_class[codes[i]].push_back(i);
  }

  std::vector<bool> in_test(codes.size(), false);
  Rng rng(seed);
  for (auto& [code, members] : by_class) {
    const auto n_test = static_cast<std::size_t>(
        std::floor(test_fraction * static_cast<double>(members.size()) +
                   1e-9));
    rng.Shuffle(members);
    for (std::size_t k = 0; k < n_test; ++k) in_test[members[k]] = true;
  }

  SplitIndices split;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    (in_test[i] ? split.test : split.train).push_back(i);
  }
  return split;
}

Split StratifiedSplit(std::span<const LabeledTweet> labeled,
                      double test_fraction, std::uint64_t seed) {
  std::vector<CapCode> codes;
  codes.reserve(labeled.size());
  for (const LabeledTweet& lt : labeled) codes.push_back(lt.code);
  SplitIndices idx = StratifiedSplitIndices(codes, test_fraction, seed);
  Split split;
  for (std::size_t i : idx.train) split.train.push_back(labeled[i]);
  for (std::size_t i : idx.test) split.test.push_back(labeled[i]);
  return split;
}

std::vector<LabeledTweet> RebalanceSubsample(
    std::span<const LabeledTweet> labeled, CapCode code,
    std::size_t target_count, std::uint64_t seed) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (labeled[i].code == code) members.push_back(i);
  }
  if (target_count > members.size()) {
    throw TargetTooLargeError(target_count, members.size());
  }
  std::vector<bool> keep(labeled.size(), true);
  for (std::size_t i : members) keep[i] = false;
  Rng rng(seed);
  rng.Shuffle(members);
  for (std::size_t k = 0; k < target_count; ++k) keep[members[k]] = true;

  std::vector<LabeledTweet> out;
  out.reserve(labeled.size() - members.size() + target_count);
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (keep[i]) out.push_back(labeled[i]);
  }
  return out;
}

std::size_t GroupCounts::At(const GroupKey& key) const {
  auto it = cells_.find(key);
  return it == cells_.end() ? 0 : it->second;
}

std::size_t GroupCounts::Total() const {
  std::size_t total = 0;
  for (const auto& [key, n] : cells_) total += n;
  return total;
}

std::size_t GroupCounts::ByParty(Party p) const {
  std::size_t total = 0;
  for (const auto& [key, n] : cells_) {
    if (key.party == p) total += n;
  }
  return total;
}

std::size_t GroupCounts::ByChamber(Chamber c) const {
  std::size_t total = 0;
  for (const auto& [key, n] : cells_) {
    if (key.chamber == c) total += n;
  }
  return total;
}

std::size_t GroupCounts::ByGender(Gender g) const {
  std::size_t total = 0;
  for (const auto& [key, n] : cells_) {
    if (key.gender == g) total += n;
  }
  return total;
}

GroupCounts CountByGroup(std::span<const Tweet> corpus,
                         const AccountSet& accounts) {
  GroupCounts counts;
  std::vector<std::string> unknown;
  std::unordered_set<std::string> reported;
  for (const Tweet& t : corpus) {
    const Account* a = accounts.Find(t.account_handle);
    if (a == nullptr) {
      if (reported.insert(t.account_handle).second) {
        unknown.push_back(t.account_handle);
      }
      continue;
    }
    counts.Add({a->party, a->chamber, a->gender});
  }
  if (!unknown.empty()) throw UnknownAccountError(std::move(unknown));
  return counts;
}

}  // namespace polagenda
