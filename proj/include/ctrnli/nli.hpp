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

#ifndef CTRNLI_NLI_HPP_
#define CTRNLI_NLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctrnli/shortening.hpp"
#include "ctrnli/tokenizer.hpp"
#include "ctrnli/types.hpp"

namespace ctrnli {

struct ClassifierConfig {
  // "scratch:encoder-<size>" or a checkpoint directory.
  std::string model_identifier = "scratch:encoder-small";
  std::size_t max_sequence_tokens = 512;
  std::size_t epochs = 40;
  double learning_rate = 5e-5;
  std::uint64_t seed = 0;
  std::size_t batch_size = 16;

  void validate() const;
};

// One classifier input: [CLS] text_a [SEP] text_b [SEP].
struct NLIInputPair {
  std::string instance_id;
  std::string text_a;  // shortened premise(s)
  std::string text_b;  // statement, never modified
  std::optional<Label> gold;
  bool premise_truncated = false;
};

inline constexpr std::size_t kSpecialTokensPerPair = 3;

// Token count of the assembled [CLS] a [SEP] b [SEP] sequence.
std::size_t assembled_length(const NLIInputPair& pair, const WordPieceTokenizer& tokenizer);

// Builds text_a from the shortened premise. Distinct Comparison parts are
// joined as "Primary trial: A Secondary trial: B". When the sequence would
// exceed `max_tokens`, only the premise side is cut; for joined parts the
// cut is shared between the two premises.
NLIInputPair assemble_input(const ShortenedPremise& shortened, const NLIInstance& instance,
                            const WordPieceTokenizer& tokenizer, std::size_t max_tokens = 512);

struct PredictionRecord {
  std::string instance_id;
  Label predicted = Label::Contradiction;
  double score = 0.0;  // P(Entailment)
  std::string model_tag;

  bool operator==(const PredictionRecord&) const = default;
};

// score >= threshold is Entailment (a tie at the threshold goes to Entailment).
Label label_for_score(double score, double threshold = 0.5);

// Fraction of distinct statement unigrams that also occur in the premise.
double lexical_overlap_score(std::string_view text_a, std::string_view text_b);

std::vector<PredictionRecord> lexical_overlap_baseline(std::span<const NLIInputPair> pairs,
                                                       double threshold = 0.5,
                                                       const std::string& model_tag = "lexical-overlap");

void write_predictions(const std::filesystem::path& file,
                       std::span<const PredictionRecord> records);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& file);

}  // namespace ctrnli

#endif  // CTRNLI_NLI_HPP_
