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

#ifndef POLAGENDA_CORPUS_H_
#define POLAGENDA_CORPUS_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace polagenda {

// A policy topic code: 0 = not policy / uninterpretable, 1-23 the CAP macro
// codes (there is no 11 or 22), 24-35 the extended non-CAP codes.
class CapCode {
 public:
  constexpr CapCode() = default;
  constexpr explicit CapCode(int value) : value_(value) {}

  constexpr int value() const { return value_; }
  constexpr bool is_not_policy() const { return value_ == 0; }
  constexpr bool is_cap() const {
    return value_ >= 1 && value_ <= 23 && value_ != 11 && value_ != 22;
  }
  constexpr bool is_extended() const { return value_ >= 24 && value_ <= 35; }
  // Anything a label map may point to.
  constexpr bool is_known() const {
    return is_not_policy() || is_cap() || is_extended();
  }

  constexpr auto operator<=>(const CapCode&) const = default;

 private:
  int value_ = 0;
};

inline constexpr CapCode kNotPolicy{0};

// Codes admissible on a supervised training label.
constexpr bool IsLabelCode(CapCode code) {
  return code.is_not_policy() || code.is_cap();
}

enum class Party { kDem, kGop };
enum class Chamber { kHouse, kSenate };
enum class Gender { kMan, kWoman };

std::string_view ToString(Party p);
std::string_view ToString(Chamber c);
std::string_view ToString(Gender g);
std::optional<Party> ParseParty(std::string_view s);
std::optional<Chamber> ParseChamber(std::string_view s);
std::optional<Gender> ParseGender(std::string_view s);

struct Account {
  std::string handle;
  Party party = Party::kDem;
  Chamber chamber = Chamber::kHouse;
  Gender gender = Gender::kMan;
};

// Accounts keyed by handle.
class AccountSet {
 public:
  AccountSet() = default;

  // Throws DuplicateIdError on a repeated handle, InvalidArgumentError on an
  // empty one.
  void Add(Account account);
  const Account* Find(std::string_view handle) const;
  std::size_t size() const { return accounts_.size(); }
  const std::vector<Account>& accounts() const { return accounts_; }

 private:
  std::vector<Account> accounts_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Tweet {
  std::string id;
  std::string account_handle;
  std::string posted_at;  // ISO-8601, kept verbatim
  std::string text;
  bool is_retweet = false;

  bool operator==(const Tweet&) const = default;
};

using Corpus = std::vector<Tweet>;

struct LabeledTweet {
  Tweet tweet;
  CapCode code;

  bool operator==(const LabeledTweet&) const = default;
};

// tweets.jsonl: one object per line with id, account_handle, posted_at,
// text and is_retweet. Blank lines are skipped.
Corpus LoadTweets(const std::string& path);
void WriteTweets(const std::string& path, std::span<const Tweet> corpus);

// Labeled corpus: tweets.jsonl records plus an integer "code" field.
// Codes 11, 22 and anything outside {0, CAP} are a SchemaError.
std::vector<LabeledTweet> LoadLabeledTweets(const std::string& path);
void WriteLabeledTweets(const std::string& path,
                        std::span<const LabeledTweet> labeled);

// accounts.csv: handle,party,chamber,gender
AccountSet LoadAccounts(const std::string& path);
void WriteAccounts(const std::string& path, const AccountSet& accounts);

Corpus FilterOriginals(std::span<const Tweet> corpus);
std::vector<LabeledTweet> FilterOriginals(std::span<const LabeledTweet> labeled);

struct Split {
  std::vector<LabeledTweet> train;
  std::vector<LabeledTweet> test;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per-class test count is floor(test_fraction * class_size); the
// remainder goes to train. Output keeps input order within each side.
// Throws EmptyClassError on empty input, InvalidArgumentError when
// test_fraction is outside (0, 1).
SplitIndices StratifiedSplitIndices(std::span<const CapCode> codes,
                                    double test_fraction, std::uint64_t seed);
Split StratifiedSplit(std::span<const LabeledTweet> labeled,
                      double test_fraction, std::uint64_t seed);

// Keeps every instance of other classes and a seeded uniform subsample
// (without replacement) of `target_count` instances of `code`. Output
// keeps input order.
std::vector<LabeledTweet> RebalanceSubsample(
    std::span<const LabeledTweet> labeled, CapCode code,
    std::size_t target_count, std::uint64_t seed);

struct GroupKey {
  Party party;
  Chamber chamber;
  Gender gender;
  auto operator<=>(const GroupKey&) const = default;
};

class GroupCounts {
 public:
  void Add(const GroupKey& key, std::size_t n = 1) { cells_[key] += n; }
  std::size_t At(const GroupKey& key) const;
  std::size_t Total() const;
  std::size_t ByParty(Party p) const;
  std::size_t ByChamber(Chamber c) const;
  std::size_t ByGender(Gender g) const;
  const std::map<GroupKey, std::size_t>& cells() const { return cells_; }

 private:
  std::map<GroupKey, std::size_t> cells_;
};

// Throws UnknownAccountError listing every unresolved handle.
GroupCounts CountByGroup(std::span<const Tweet> corpus,
                         const AccountSet& accounts);

}  // namespace polagenda

template <>
struct std::hash<polagenda::CapCode> {
  std::size_t operator()(polagenda::CapCode c) const noexcept {
    return std::hash<int>{}(c.value());
  }
};

#endif  // POLAGENDA_CORPUS_H_
