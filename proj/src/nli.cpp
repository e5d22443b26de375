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

#include "ctrnli/nli.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "ctrnli/error.hpp"
#include "ctrnli/text.hpp"
#include "json.hpp"

namespace ctrnli {
namespace {

std::string join_parts(std::string_view primary, std::string_view secondary) {
  std::string out(kPrimaryMarker);
  out += primary;
  out += kSecondaryMarker;
  out += secondary;
  return out;
}

}  // namespace

void ClassifierConfig::validate() const {
  if (model_identifier.empty()) throw Error(ErrorCode::InvalidConfig, "classifier model is empty");
  if (max_sequence_tokens != 512) {
    throw Error(ErrorCode::InvalidConfig, "classifier max_sequence_tokens is fixed at 512");
  }
  if (epochs == 0 || batch_size == 0 || !(learning_rate > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "classifier hyperparameters must be positive");
  }
}

std::size_t assembled_length(const NLIInputPair& pair, const WordPieceTokenizer& tokenizer) {
  return kSpecialTokensPerPair + tokenizer.count(pair.text_a) + tokenizer.count(pair.text_b);
}

NLIInputPair assemble_input(const ShortenedPremise& shortened, const NLIInstance& instance,
                            const WordPieceTokenizer& tokenizer, std::size_t max_tokens) {
  if (shortened.instance_id != instance.instance_id) {
    throw Error(ErrorCode::InvalidConfig, "shortened premise " + shortened.instance_id +
                                              " does not belong to instance " + instance.instance_id);
  }
  NLIInputPair pair;
  pair.instance_id = instance.instance_id;
  pair.text_b = instance.statement;
  pair.gold = instance.label;

  const std::size_t statement_tokens = tokenizer.count(instance.statement);
  if (statement_tokens + kSpecialTokensPerPair >= max_tokens) {
    throw Error(ErrorCode::StatementTooLong,
                "statement of instance " + instance.instance_id + " has " +
                    std::to_string(statement_tokens) + " tokens");
  }
  const std::size_t room = max_tokens - kSpecialTokensPerPair - statement_tokens;

  if (!shortened.secondary_short) {
    pair.text_a = shortened.primary_short;
    if (tokenizer.count(pair.text_a) > room) {
      pair.text_a = tokenizer.truncate(pair.text_a, room);
      pair.premise_truncated = true;
    }
  } else {
    std::string primary = shortened.primary_short;
    std::string secondary = *shortened.secondary_short;
    pair.text_a = join_parts(primary, secondary);
    const std::size_t total = tokenizer.count(pair.text_a);
    if (total > room) {
      const std::size_t primary_tokens = tokenizer.count(primary);
      const std::size_t secondary_tokens = tokenizer.count(secondary);
      const std::size_t markers = total - primary_tokens - secondary_tokens;
      const std::size_t parts = room > markers ? room - markers : 0;
      std::size_t keep_primary = parts / 2;
      std::size_t keep_secondary = parts - keep_primary;
      if (primary_tokens < keep_primary) {
        keep_primary = primary_tokens;
        keep_secondary = parts - keep_primary;
      } else if (secondary_tokens < keep_secondary) {
        keep_secondary = secondary_tokens;
        keep_primary = parts - keep_secondary;
      }
      pair.text_a = join_parts(tokenizer.truncate(primary, keep_primary),
                               tokenizer.truncate(secondary, keep_secondary));
      // Marker tokens alone may not fit when the statement is huge.
      if (tokenizer.count(pair.text_a) > room) pair.text_a = tokenizer.truncate(pair.text_a, room);
      pair.premise_truncated = true;
    }
  }
  if (pair.premise_truncated) {
    spdlog::info("instance {}: premise cut to fit {} tokens", instance.instance_id, max_tokens);
  }
  return pair;
}

Label label_for_score(double score, double threshold) {
  return score >= threshold ? Label::Entailment : Label::Contradiction;
}

double lexical_overlap_score(std::string_view text_a, std::string_view text_b) {
  const auto premise_tokens = text::word_tokens(text_a);
  const auto statement_tokens = text::word_tokens(text_b);
  const std::set<std::string> premise(premise_tokens.begin(), premise_tokens.end());
  const std::set<std::string> statement(statement_tokens.begin(), statement_tokens.end());
  if (statement.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& term : statement) shared += premise.contains(term) ? 1 : 0;
  return static_cast<double>(shared) / static_cast<double>(statement.size());
}

std::vector<PredictionRecord> lexical_overlap_baseline(std::span<const NLIInputPair> pairs,
                                                       double threshold,
                                                       const std::string& model_tag) {
  std::vector<PredictionRecord> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const double score = lexical_overlap_score(pair.text_a, pair.text_b);
    out.push_back({pair.instance_id, label_for_score(score, threshold), score, model_tag});
  }
  return out;
}

void write_predictions(const std::filesystem::path& file,
                       std::span<const PredictionRecord> records) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
  for (const auto& r : records) {
    nlohmann::ordered_json line;
    line["instance_id"] = r.instance_id;
    line["predicted"] = label_name(r.predicted);
    line["score"] = r.score;
    line["model_tag"] = r.model_tag;
    out << line.dump() << '\n';
  }
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Io, "cannot open predictions " + file.string());
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::string where = file.string() + ":" + std::to_string(line_number);
    try {
      const auto value = nlohmann::json::parse(line);
      PredictionRecord r;
      r.instance_id = value.at("instance_id").get<std::string>();
      const auto label_text = value.at("predicted").get<std::string>();
      auto label = parse_label(label_text);
      if (!label) throw Error(ErrorCode::MalformedDocument, where + ": unknown label " + label_text);
      r.predicted = *label;
      r.score = value.at("score").get<double>();
      r.model_tag = value.at("model_tag").get<std::string>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedDocument, where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace ctrnli
