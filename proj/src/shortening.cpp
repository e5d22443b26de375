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

#include "ctrnli/shortening.hpp"

#include <fstream>

#include <spdlog/spdlog.h>

#include "ctrnli/error.hpp"
#include "ctrnli/hash.hpp"

namespace ctrnli {

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Truncate: return "truncate";
    case StrategyKind::ExtractiveTfidf: return "extractive";
    case StrategyKind::AbstractiveCombined: return "abstractive-combined";
    case StrategyKind::AbstractiveDistinct: return "abstractive-distinct";
  }
  return "";
}

std::optional<StrategyKind> parse_strategy(std::string_view text) {
  if (text == "truncate" || text == "Truncate") return StrategyKind::Truncate;
  if (text == "extractive" || text == "extractive-tfidf" || text == "ExtractiveTfidf") {
    return StrategyKind::ExtractiveTfidf;
  }
  if (text == "abstractive-combined" || text == "AbstractiveCombined") {
    return StrategyKind::AbstractiveCombined;
  }
  if (text == "abstractive-distinct" || text == "AbstractiveDistinct") {
    return StrategyKind::AbstractiveDistinct;
  }
  return std::nullopt;
}

TokenBudget compute_budget(std::string_view statement, const WordPieceTokenizer& tokenizer,
                           std::size_t model_max, std::size_t reserve) {
  TokenBudget budget;
  budget.model_max = model_max;
  budget.reserve = reserve;
  budget.statement_tokens = tokenizer.count(statement);
  if (budget.statement_tokens + reserve >= model_max) {
    throw Error(ErrorCode::StatementTooLong,
                "statement has " + std::to_string(budget.statement_tokens) +
                    " tokens; at most " + std::to_string(model_max - reserve - 1) + " allowed");
  }
  budget.budget = model_max - budget.statement_tokens - reserve;
  return budget;
}

nlohmann::ordered_json ShortenedPremise::to_json() const {
  nlohmann::ordered_json out;
  out["instance_id"] = instance_id;
  out["fingerprint"] = fingerprint;
  out["primary_short"] = primary_short;
  out["secondary_short"] =
      secondary_short ? nlohmann::ordered_json(*secondary_short) : nlohmann::ordered_json(nullptr);
  out["token_counts"] = {{"primary", primary_tokens},
                         {"secondary", secondary_tokens ? nlohmann::ordered_json(*secondary_tokens)
                                                        : nlohmann::ordered_json(nullptr)}};
  return out;
}

ShortenedPremise ShortenedPremise::from_json(const nlohmann::json& value) {
  ShortenedPremise out;
  try {
    out.instance_id = value.at("instance_id").get<std::string>();
    out.fingerprint = value.at("fingerprint").get<std::string>();
    out.primary_short = value.at("primary_short").get<std::string>();
    if (!value.at("secondary_short").is_null()) {
      out.secondary_short = value.at("secondary_short").get<std::string>();
    }
    const auto& counts = value.at("token_counts");
    out.primary_tokens = counts.at("primary").get<std::size_t>();
    if (!counts.at("secondary").is_null()) {
      out.secondary_tokens = counts.at("secondary").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CacheCorruption, std::string("bad cache record: ") + e.what());
  }
  return out;
}

ShortenedPremise truncate_premises(const NLIInstance& instance, const TrialCorpus& corpus,
                                   const WordPieceTokenizer& tokenizer, std::size_t model_max,
                                   std::size_t reserve) {
  const TokenBudget budget = compute_budget(instance.statement, tokenizer, model_max, reserve);
  const ResolvedPremises premises = resolve_premises(instance, corpus);
  ShortenedPremise out;
  out.instance_id = instance.instance_id;
  if (!premises.secondary_text) {
    out.primary_short = tokenizer.truncate(premises.primary_text, budget.budget);
  } else {
    const std::size_t half = budget.budget / 2;
    out.primary_short = tokenizer.truncate(premises.primary_text, half);
    out.secondary_short = tokenizer.truncate(*premises.secondary_text, half);
  }
  out.primary_tokens = tokenizer.count(out.primary_short);
  if (out.secondary_short) out.secondary_tokens = tokenizer.count(*out.secondary_short);
  return out;
}

SummaryCache::SummaryCache(std::filesystem::path file, std::string fingerprint)
    : file_(std::move(file)), fingerprint_(std::move(fingerprint)) {
  std::ifstream in(file_);
  if (!in) return;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::CacheCorruption,
                  file_.string() + ":" + std::to_string(line_number) + ": " + e.what());
    }
    ShortenedPremise record = ShortenedPremise::from_json(value);
    if (record.fingerprint != fingerprint_) {
      throw Error(ErrorCode::CacheCorruption,
                  file_.string() + ":" + std::to_string(line_number) + ": fingerprint '" +
                      record.fingerprint + "' does not match '" + fingerprint_ + "'");
    }
    records_.insert_or_assign(record.instance_id, std::move(record));
  }
}

const ShortenedPremise* SummaryCache::find(const std::string& instance_id) const {
  auto it = records_.find(instance_id);
  return it == records_.end() ? nullptr : &it->second;
}

void SummaryCache::append(const ShortenedPremise& record) {
  if (record.fingerprint != fingerprint_) {
    throw Error(ErrorCode::CacheCorruption, "refusing to cache a record for fingerprint '" +
                                                record.fingerprint + "'");
  }
  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::Io, "cannot append to " + file_.string());
  out << record.to_json().dump() << '\n';
  records_.insert_or_assign(record.instance_id, record);
}

std::string strategy_fingerprint(const ShorteningStrategy& strategy,
                                 const ShorteningContext& context) {
  if (context.tokenizer == nullptr) {
    throw Error(ErrorCode::InvalidConfig, "every strategy needs a tokenizer");
  }
  std::string fp(strategy_name(strategy.kind));
  switch (strategy.kind) {
    case StrategyKind::Truncate:
      fp += "/max=" + std::to_string(strategy.model_max) +
            "/reserve=" + std::to_string(strategy.reserve);
      break;
    case StrategyKind::ExtractiveTfidf:
      if (context.tfidf == nullptr) {
        throw Error(ErrorCode::InvalidConfig, "extractive strategy needs a fitted TF-IDF model");
      }
      fp += "/words=" + std::to_string(strategy.word_limit) + "/" + context.tfidf->fingerprint();
      break;
    case StrategyKind::AbstractiveCombined:
    case StrategyKind::AbstractiveDistinct:
      if (context.summarizer == nullptr) {
        throw Error(ErrorCode::RuntimeUnavailable, "abstractive strategy needs a summarizer");
      }
      fp += "/" + context.summarizer->fingerprint();
      break;
  }
  fp += "/" + context.tokenizer->fingerprint();
  fp += "/join-" + short_hash(std::string(kPrimaryMarker) + "|" + std::string(kSecondaryMarker), 8);
  return fp;
}

Shortener::Shortener(ShorteningStrategy strategy, ShorteningContext context, SummaryCache* cache)
    : strategy_(strategy),
      context_(context),
      cache_(cache),
      fingerprint_(strategy_fingerprint(strategy, context)) {
  if (cache_ != nullptr && cache_->fingerprint() != fingerprint_) {
    throw Error(ErrorCode::CacheCorruption, "cache " + cache_->path().string() +
                                                " belongs to fingerprint '" +
                                                cache_->fingerprint() + "'");
  }
}

ShortenedPremise Shortener::shorten(const NLIInstance& instance, const TrialCorpus& corpus) {
  if (cache_ != nullptr) {
    if (const ShortenedPremise* hit = cache_->find(instance.instance_id)) {
      ++reused_;
      return *hit;
    }
  }
  ShortenedPremise result = compute(instance, corpus);
  result.fingerprint = fingerprint_;
  ++generated_;
  if (cache_ != nullptr) cache_->append(result);
  return result;
}

ShortenedPremise Shortener::compute(const NLIInstance& instance, const TrialCorpus& corpus) {
  const WordPieceTokenizer& tokenizer = *context_.tokenizer;
  if (strategy_.kind == StrategyKind::Truncate) {
    return truncate_premises(instance, corpus, tokenizer, strategy_.model_max, strategy_.reserve);
  }

  const ResolvedPremises premises = resolve_premises(instance, corpus);
  ShortenedPremise out;
  out.instance_id = instance.instance_id;
  switch (strategy_.kind) {
    case StrategyKind::ExtractiveTfidf:
      out.primary_short =
          extractive_summarize(premises.primary_text, *context_.tfidf, strategy_.word_limit);
      if (premises.secondary_text) {
        out.secondary_short =
            extractive_summarize(*premises.secondary_text, *context_.tfidf, strategy_.word_limit);
      }
      break;
    case StrategyKind::AbstractiveCombined: {
      std::string joined = premises.primary_text;
      if (premises.secondary_text) {
        joined.push_back('\n');
        joined += *premises.secondary_text;
      }
      out.primary_short = context_.summarizer->summarize(joined);
      break;
    }
    case StrategyKind::AbstractiveDistinct:
      out.primary_short = context_.summarizer->summarize(premises.primary_text);
      if (premises.secondary_text) {
        out.secondary_short = context_.summarizer->summarize(*premises.secondary_text);
      }
      break;
    case StrategyKind::Truncate:
      break;
  }
  out.primary_tokens = tokenizer.count(out.primary_short);
  if (out.secondary_short) out.secondary_tokens = tokenizer.count(*out.secondary_short);
  return out;
}

}  // namespace ctrnli
