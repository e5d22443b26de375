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

#ifndef CTRNLI_MODELS_HPP_
#define CTRNLI_MODELS_HPP_

// Neural backends: a small encoder-decoder summarizer and a cross-encoder
// classifier. Both are implemented on libtorch; in builds without it every
// entry point raises RuntimeUnavailable.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctrnli/nli.hpp"
#include "ctrnli/shortening.hpp"
#include "ctrnli/summarizer.hpp"
#include "ctrnli/tokenizer.hpp"

namespace ctrnli {

bool model_runtime_available();

class Seq2SeqSummarizer final : public AbstractiveSummarizer {
 public:
  // `config.model_identifier` is either "scratch:t5-<size>" (fresh weights
  // drawn from `seed`) or a directory written by save(). Scratch models use
  // `tokenizer`; saved ones carry their own vocabulary.
  static Seq2SeqSummarizer open(const SummarizerConfig& config,
                                std::shared_ptr<const WordPieceTokenizer> tokenizer,
                                std::uint64_t seed);

  Seq2SeqSummarizer(Seq2SeqSummarizer&&) noexcept;
  Seq2SeqSummarizer& operator=(Seq2SeqSummarizer&&) noexcept;
  ~Seq2SeqSummarizer() override;

  // Prepends the prompt prefix, truncates to max_source_tokens and beam
  // decodes at most max_summary_tokens tokens.
  std::string summarize(std::string_view premise) override;
  // Same, for a source that already carries the prefix.
  std::string generate_from_source(std::string_view source);
  std::vector<int> generate_ids(std::string_view source);

  std::string fingerprint() const override;
  const SummarizerConfig& config() const;
  const WordPieceTokenizer& tokenizer() const;

  void save(const std::filesystem::path& directory) const;

 private:
  struct Impl;
  explicit Seq2SeqSummarizer(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;

  friend struct SummarizerTraining;
};

struct SummarizerTrainResult {
  std::vector<CheckpointScore> scores;
  CheckpointScore best;
  std::vector<std::filesystem::path> checkpoints;
};

// Mean ROUGE-1 F1 of generated summaries against the pair targets.
double mean_rouge1(Seq2SeqSummarizer& model, std::span<const SummaryTrainPair> pairs);

// Trains in place with AdamW and teacher forcing for max(config.epochs)
// epochs. At every grid epoch the dev pairs are scored and, when
// `checkpoint_root` is non-empty, the weights are saved to
// checkpoint_root/epoch-<k>. On return the model holds the final weights.
SummarizerTrainResult finetune_summarizer(Seq2SeqSummarizer& model, const FineTuneConfig& config,
                                          std::span<const SummaryTrainPair> pairs,
                                          std::span<const SummaryTrainPair> dev_pairs,
                                          const std::filesystem::path& checkpoint_root = {});

class CrossEncoder {
 public:
  static CrossEncoder open(const ClassifierConfig& config,
                           std::shared_ptr<const WordPieceTokenizer> tokenizer);

  CrossEncoder(CrossEncoder&&) noexcept;
  CrossEncoder& operator=(CrossEncoder&&) noexcept;
  ~CrossEncoder();

  // Order-preserving; safe to call concurrently on disjoint inputs.
  std::vector<PredictionRecord> predict(std::span<const NLIInputPair> pairs,
                                        const std::string& model_tag) const;

  std::string fingerprint() const;
  const WordPieceTokenizer& tokenizer() const;
  void save(const std::filesystem::path& directory) const;

 private:
  struct Impl;
  explicit CrossEncoder(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;

  friend struct ClassifierTraining;
};

struct ClassifierTrainResult {
  std::vector<double> dev_macro_f1;    // one entry per epoch
  std::vector<double> train_accuracy;  // one entry per epoch
  std::size_t best_epoch = 0;          // 1-based
};

// Cross-entropy fine-tuning with Adam. Leaves the model at the weights of
// the best dev Macro F1 epoch (ties: earliest).
ClassifierTrainResult finetune_classifier(CrossEncoder& model, const ClassifierConfig& config,
                                          std::span<const NLIInputPair> train_pairs,
                                          std::span<const NLIInputPair> dev_pairs);

}  // namespace ctrnli

#endif  // CTRNLI_MODELS_HPP_
