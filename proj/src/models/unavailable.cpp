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

// Stand-ins used when the project is built without libtorch.

#include "ctrnli/error.hpp"
#include "ctrnli/models.hpp"

namespace ctrnli {
namespace {

[[noreturn]] void unavailable() {
  throw Error(ErrorCode::RuntimeUnavailable, "built without the libtorch model runtime");
}

}  // namespace

struct Seq2SeqSummarizer::Impl {};
struct CrossEncoder::Impl {};

bool model_runtime_available() { return false; }

Seq2SeqSummarizer::Seq2SeqSummarizer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Seq2SeqSummarizer::Seq2SeqSummarizer(Seq2SeqSummarizer&&) noexcept = default;
Seq2SeqSummarizer& Seq2SeqSummarizer::operator=(Seq2SeqSummarizer&&) noexcept = default;
Seq2SeqSummarizer::~Seq2SeqSummarizer() = default;

Seq2SeqSummarizer Seq2SeqSummarizer::open(const SummarizerConfig&,
                                          std::shared_ptr<const WordPieceTokenizer>,
                                          std::uint64_t) {
  unavailable();
}
std::string Seq2SeqSummarizer::summarize(std::string_view) { unavailable(); }
std::string Seq2SeqSummarizer::generate_from_source(std::string_view) { unavailable(); }
std::vector<int> Seq2SeqSummarizer::generate_ids(std::string_view) { unavailable(); }
std::string Seq2SeqSummarizer::fingerprint() const { unavailable(); }
const SummarizerConfig& Seq2SeqSummarizer::config() const { unavailable(); }
const WordPieceTokenizer& Seq2SeqSummarizer::tokenizer() const { unavailable(); }
void Seq2SeqSummarizer::save(const std::filesystem::path&) const { unavailable(); }

double mean_rouge1(Seq2SeqSummarizer&, std::span<const SummaryTrainPair>) { unavailable(); }

SummarizerTrainResult finetune_summarizer(Seq2SeqSummarizer&, const FineTuneConfig&,
                                          std::span<const SummaryTrainPair>,
                                          std::span<const SummaryTrainPair>,
                                          const std::filesystem::path&) {
  unavailable();
}

CrossEncoder::CrossEncoder(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
CrossEncoder::CrossEncoder(CrossEncoder&&) noexcept = default;
CrossEncoder& CrossEncoder::operator=(CrossEncoder&&) noexcept = default;
CrossEncoder::~CrossEncoder() = default;

CrossEncoder CrossEncoder::open(const ClassifierConfig&, std::shared_ptr<const WordPieceTokenizer>) {
  unavailable();
}
std::vector<PredictionRecord> CrossEncoder::predict(std::span<const NLIInputPair>,
                                                    const std::string&) const {
  unavailable();
}
std::string CrossEncoder::fingerprint() const { unavailable(); }
const WordPieceTokenizer& CrossEncoder::tokenizer() const { unavailable(); }
void CrossEncoder::save(const std::filesystem::path&) const { unavailable(); }

ClassifierTrainResult finetune_classifier(CrossEncoder&, const ClassifierConfig&,
                                          std::span<const NLIInputPair>,
                                          std::span<const NLIInputPair>) {
  unavailable();
}

}  // namespace ctrnli
