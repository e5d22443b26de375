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

#ifndef CTRNLI_SUMMARIZER_HPP_
#define CTRNLI_SUMMARIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctrnli/corpus.hpp"
#include "ctrnli/types.hpp"
#include "json.hpp"

namespace ctrnli {

struct SummarizerConfig {
  // Resolved by the model runtime: "scratch:<arch>" or a checkpoint directory.
  std::string model_identifier = "scratch:t5-tiny";
  std::string prompt_prefix = "summarize: ";
  std::size_t max_source_tokens = 2048;
  std::size_t max_summary_tokens = 300;
  std::size_t beam_width = 4;

  // Throws InvalidConfig on nonsensical settings.
  void validate() const;
};

struct FineTuneConfig {
  double learning_rate = 2e-5;
  double weight_decay = 0.01;
  std::size_t batch_size = 4;
  std::vector<std::size_t> epochs = {2, 5, 7, 10};
  std::uint64_t seed = 0;

  void validate() const;
};

enum class PremiseMode { Distinct, Combined };

struct SummaryTrainPair {
  std::string source;  // prompt prefix + premise
  std::string target;  // the entailed statement
};

// One pair per Entailment instance; Contradiction instances are skipped. In
// Distinct mode a Comparison instance contributes one pair per premise, both
// with the statement as target. In Combined mode the premises are joined
// with '\n'.
std::vector<SummaryTrainPair> build_finetune_dataset(std::span<const NLIInstance> instances,
                                                     const TrialCorpus& corpus, PremiseMode mode,
                                                     std::string_view prompt_prefix = "summarize: ");

struct CheckpointScore {
  std::size_t epoch = 0;
  double rouge1_f = 0.0;

  bool operator==(const CheckpointScore&) const = default;
};

// argmax rouge1_f; ties go to the fewer-epoch checkpoint.
CheckpointScore best_checkpoint(std::span<const CheckpointScore> scores);

nlohmann::json scores_to_json(std::span<const CheckpointScore> scores);
std::vector<CheckpointScore> scores_from_json(const nlohmann::json& value);

}  // namespace ctrnli

#endif  // CTRNLI_SUMMARIZER_HPP_
