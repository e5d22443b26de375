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

#ifndef CTRNLI_PIPELINE_HPP_
#define CTRNLI_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctrnli/config.hpp"
#include "ctrnli/corpus.hpp"
#include "ctrnli/metrics.hpp"
#include "ctrnli/models.hpp"
#include "ctrnli/report.hpp"
#include "ctrnli/shortening.hpp"
#include "ctrnli/summarizer.hpp"
#include "ctrnli/tfidf.hpp"
#include "ctrnli/tokenizer.hpp"

namespace ctrnli {

struct ShortenStats {
  std::filesystem::path cache_file;
  std::string fingerprint;
  std::size_t instances = 0;
  std::size_t generated = 0;
  std::size_t reused = 0;
};

enum class Component { Summarizer, Classifier };

struct TrainOutcome {
  std::filesystem::path directory;
  std::filesystem::path scores_file;
  std::vector<CheckpointScore> summarizer_scores;   // Summarizer only
  std::vector<double> classifier_dev_macro_f1;      // Classifier only
  std::size_t best_epoch = 0;
};

struct EvaluateOutputs {
  std::filesystem::path report_json;
  std::filesystem::path table_csv;
  std::vector<std::filesystem::path> breakdown_csvs;
  std::optional<std::filesystem::path> agreement_csv;
  std::optional<std::filesystem::path> agreement_svg;
  std::vector<MetricsReport> reports;
  std::optional<AgreementMatrix> agreement;
};

// Counts work that would be redundant on a warm re-run.
struct ModelCalls {
  std::size_t premises_shortened = 0;
  std::size_t classifier_predictions = 0;
};

// Stateful orchestrator behind the CLI. Inputs are loaded lazily and cached
// for the lifetime of the object; every command records what it wrote in
// <output>/manifest.json.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);
  ~Pipeline();

  const RunConfig& config() const { return config_; }

  // Full load-time validation of corpus and all configured splits.
  std::vector<Diagnostic> validate();

  ShortenStats shorten(Split split);
  TrainOutcome train(Component component);
  // Writes predictions/<split>-<model_tag>.jsonl and returns its path.
  std::filesystem::path predict(Split split, bool lexical_baseline);
  EvaluateOutputs evaluate(Split split, const std::vector<std::filesystem::path>& prediction_files);

  const TrialCorpus& corpus();
  const std::vector<NLIInstance>& instances(Split split);
  std::shared_ptr<const WordPieceTokenizer> tokenizer();
  const TfidfModel& tfidf();

  std::string model_tag(bool lexical_baseline) const;
  std::filesystem::path cache_file(const std::string& fingerprint, Split split) const;
  std::filesystem::path classifier_dir() const;
  std::filesystem::path summarizer_dir() const;

  const ModelCalls& calls() const { return calls_; }

 private:
  ShorteningContext context_for(StrategyKind kind);
  AbstractiveSummarizer& summarizer();
  std::vector<NLIInputPair> assembled_pairs(Split split);
  void record_artifact(const std::filesystem::path& file, const std::string& kind);

  RunConfig config_;
  std::optional<TrialCorpus> corpus_;
  std::map<Split, std::vector<NLIInstance>> instances_;
  std::shared_ptr<const WordPieceTokenizer> tokenizer_;
  std::optional<TfidfModel> tfidf_;
  std::unique_ptr<Seq2SeqSummarizer> summarizer_;
  ModelCalls calls_;
};

}  // namespace ctrnli

#endif  // CTRNLI_PIPELINE_HPP_
