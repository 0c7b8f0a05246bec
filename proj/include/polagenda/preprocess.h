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

#ifndef POLAGENDA_PREPROCESS_H_
#define POLAGENDA_PREPROCESS_H_

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polagenda/corpus.h"

namespace polagenda {

// Text -> unigram pipeline. Rules, applied in order:
//
//   1. lowercase (Unicode simple case mapping)
//   2. strip handles:   @[a-z0-9_]+
//   3. strip URLs:      (?<![\p{L}\p{N}])(https?://|www\.|t\.co/)\S*
//   4. collapse any run of one character longer than max_repeat to
//      max_repeat copies
//   5. split on Unicode white space
//   6. drop tokens that contain a Unicode number (\p{N})
//   7. drop stoplisted tokens (checked before and after step 8)
//   8. keep only Unicode letters (\p{L}); re-apply step 4
//   9. drop tokens shorter than min_token_len code points
//
// No stemming or lemmatization is ever applied.
class TokenPipeline {
 public:
  // Throws InvalidArgumentError when a stoplist entry is empty, not
  // lowercase or contains white space, or when a bound is < 1.
  explicit TokenPipeline(std::set<std::string, std::less<>> stoplist,
                         int max_repeat = 3, int min_token_len = 2);

  std::vector<std::string> Tokenize(std::string_view text) const;

  const std::set<std::string, std::less<>>& stoplist() const {
    return stoplist_;
  }
  int max_repeat() const { return max_repeat_; }
  int min_token_len() const { return min_token_len_; }

 private:
  std::set<std::string, std::less<>> stoplist_;
  int max_repeat_;
  int min_token_len_;
};

struct TokenizedDoc {
  std::string tweet_id;
  std::vector<std::string> tokens;

  bool operator==(const TokenizedDoc&) const = default;
};

struct PreprocessResult {
  std::vector<TokenizedDoc> docs;     // one per input tweet, input order
  std::vector<std::string> dropped;   // ids whose token list is empty
};

PreprocessResult PreprocessCorpus(const TokenPipeline& pipeline,
                                  std::span<const Tweet> corpus);

// One token per line; '#' lines are comments. Union, lowercased.
std::set<std::string, std::less<>> LoadStoplist(
    std::span<const std::string> paths);

// Tokenized cache: JSONL {"tweet_id": str, "tokens": [str]}.
void WriteTokenized(const std::string& path,
                    std::span<const TokenizedDoc> docs);
std::vector<TokenizedDoc> LoadTokenized(const std::string& path);

// Unicode helpers shared with the feature code.
std::string ToLowerUtf8(std::string_view text);
std::size_t CodePointLength(std::string_view text);

}  // namespace polagenda

#endif  // POLAGENDA_PREPROCESS_H_
