// Copyright 2026 The ctrnli Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTRNLI_SHORTENING_HPP_
#define CTRNLI_SHORTENING_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ctrnli/corpus.hpp"
#include "ctrnli/tfidf.hpp"
#include "ctrnli/tokenizer.hpp"
#include "ctrnli/types.hpp"
#include "json.hpp"

namespace ctrnli {

// Markers used when two distinct premise summaries are joined into one
// classifier input. Part of every strategy fingerprint.
inline constexpr std::string_view kPrimaryMarker = "Primary trial: ";
inline constexpr std::string_view kSecondaryMarker = " Secondary trial: ";

enum class StrategyKind { Truncate, ExtractiveTfidf, AbstractiveCombined, AbstractiveDistinct };

std::string_view strategy_name(StrategyKind kind);
// Accepts "truncate", "extractive", "abstractive-combined", "abstractive-distinct"
// (plus the enum spellings).
std::optional<StrategyKind> parse_strategy(std::string_view text);

struct ShorteningStrategy {
  StrategyKind kind = StrategyKind::Truncate;
  std::size_t model_max = 512;
  std::size_t reserve = 10;
  // Extractive limit, in whitespace words per premise.
  std::size_t word_limit = 300;
};

struct TokenBudget {
  std::size_t model_max = 512;
  std::size_t reserve = 10;
  std::size_t statement_tokens = 0;
  std::size_t budget = 0;  // model_max - statement_tokens - reserve
};

// Raises StatementTooLong when the statement leaves no room for a premise.
TokenBudget compute_budget(std::string_view statement, const WordPieceTokenizer& tokenizer,
                           std::size_t model_max = 512, std::size_t reserve = 10);

struct ShortenedPremise {
  std::string instance_id;
  std::string fingerprint;
  std::string primary_short;
  std::optional<std::string> secondary_short;
  std::size_t primary_tokens = 0;
  std::optional<std::size_t> secondary_tokens;

  std::size_t total_tokens() const { return primary_tokens + secondary_tokens.value_or(0); }

  nlohmann::ordered_json to_json() const;
  static ShortenedPremise from_json(const nlohmann::json& value);

  bool operator==(const ShortenedPremise&) const = default;
};

// Single: the premise keeps at most `budget` tokens. Comparison: each
// premise keeps at most floor(budget / 2).
ShortenedPremise truncate_premises(const NLIInstance& instance, const TrialCorpus& corpus,
                                   const WordPieceTokenizer& tokenizer,
                                   std::size_t model_max = 512, std::size_t reserve = 10);

// Seq2seq summarization backend used by the abstractive strategies.
class AbstractiveSummarizer {
 public:
  virtual ~AbstractiveSummarizer() = default;
  // Caller passes the raw premise; prompt handling is the backend's business.
  virtual std::string summarize(std::string_view premise) = 0;
  // Identifies weights and decoding settings.
  virtual std::string fingerprint() const = 0;
};

// Append-only JSONL store of shortened premises for one (fingerprint, split).
class SummaryCache {
 public:
  // Loads existing records. A record stamped with a different fingerprint
  // raises CacheCorruption.
  SummaryCache(std::filesystem::path file, std::string fingerprint);

  const ShortenedPremise* find(const std::string& instance_id) const;
  void append(const ShortenedPremise& record);
  std::size_t size() const { return records_.size(); }
  const std::filesystem::path& path() const { return file_; }
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::filesystem::path file_;
  std::string fingerprint_;
  std::unordered_map<std::string, ShortenedPremise> records_;
};

// Everything a strategy may depend on. Which members must be set depends on
// the strategy kind.
struct ShorteningContext {
  const WordPieceTokenizer* tokenizer = nullptr;
  const TfidfModel* tfidf = nullptr;
  AbstractiveSummarizer* summarizer = nullptr;
};

// Dispatches instances to their strategy and memoizes results in an optional
// cache. generated() counts cache misses, so re-runs can be checked for
// redundant work.
class Shortener {
 public:
  Shortener(ShorteningStrategy strategy, ShorteningContext context, SummaryCache* cache = nullptr);

  // Stable string identifying strategy parameters and model state.
  const std::string& fingerprint() const { return fingerprint_; }

  ShortenedPremise shorten(const NLIInstance& instance, const TrialCorpus& corpus);

  std::size_t generated() const { return generated_; }
  std::size_t reused() const { return reused_; }

 private:
  ShortenedPremise compute(const NLIInstance& instance, const TrialCorpus& corpus);

  ShorteningStrategy strategy_;
  ShorteningContext context_;
  SummaryCache* cache_;
  std::string fingerprint_;
  std::size_t generated_ = 0;
  std::size_t reused_ = 0;
};

std::string strategy_fingerprint(const ShorteningStrategy& strategy,
                                 const ShorteningContext& context);

}  // namespace ctrnli

#endif  // CTRNLI_SHORTENING_HPP_
