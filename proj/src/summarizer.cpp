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

#include "ctrnli/summarizer.hpp"

#include <algorithm>

#include "ctrnli/error.hpp"

namespace ctrnli {

void SummarizerConfig::validate() const {
  if (model_identifier.empty()) throw Error(ErrorCode::InvalidConfig, "summarizer model is empty");
  if (max_summary_tokens == 0 || max_source_tokens == 0 || beam_width == 0) {
    throw Error(ErrorCode::InvalidConfig, "summarizer limits must be positive");
  }
  if (max_summary_tokens >= max_source_tokens) {
    throw Error(ErrorCode::InvalidConfig, "max_summary_tokens must be below max_source_tokens");
  }
}

void FineTuneConfig::validate() const {
  if (!(learning_rate > 0.0) || weight_decay < 0.0 || batch_size == 0) {
    throw Error(ErrorCode::InvalidConfig, "fine-tuning hyperparameters must be positive");
  }
  if (epochs.empty()) throw Error(ErrorCode::InvalidConfig, "fine-tuning epoch grid is empty");
  for (std::size_t e : epochs) {
    if (e == 0) throw Error(ErrorCode::InvalidConfig, "epoch grid entries must be positive");
  }
}

std::vector<SummaryTrainPair> build_finetune_dataset(std::span<const NLIInstance> instances,
                                                     const TrialCorpus& corpus, PremiseMode mode,
                                                     std::string_view prompt_prefix) {
  std::vector<SummaryTrainPair> pairs;
  const std::string prefix(prompt_prefix);
  for (const NLIInstance& instance : filter_entailment(instances)) {
    const ResolvedPremises premises = resolve_premises(instance, corpus);
    if (mode == PremiseMode::Combined) {
      std::string joined = premises.primary_text;
      if (premises.secondary_text) joined += "\n" + *premises.secondary_text;
      pairs.push_back({prefix + joined, instance.statement});
      continue;
    }
    pairs.push_back({prefix + premises.primary_text, instance.statement});
    if (premises.secondary_text) {
      pairs.push_back({prefix + *premises.secondary_text, instance.statement});
    }
  }
  return pairs;
}

CheckpointScore best_checkpoint(std::span<const CheckpointScore> scores) {
  if (scores.empty()) throw Error(ErrorCode::EmptyInput, "no checkpoint scores");
  CheckpointScore best = scores.front();
  for (const auto& s : scores) {
    if (s.rouge1_f > best.rouge1_f || (s.rouge1_f == best.rouge1_f && s.epoch < best.epoch)) {
      best = s;
    }
  }
  return best;
}

nlohmann::json scores_to_json(std::span<const CheckpointScore> scores) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : scores) out.push_back({{"epoch", s.epoch}, {"rouge1_f", s.rouge1_f}});
  return out;
}

std::vector<CheckpointScore> scores_from_json(const nlohmann::json& value) {
  std::vector<CheckpointScore> out;
  for (const auto& item : value) {
    out.push_back({item.at("epoch").get<std::size_t>(), item.at("rouge1_f").get<double>()});
  }
  return out;
}

}  // namespace ctrnli
