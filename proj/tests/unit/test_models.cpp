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

#include <fmt/format.h>

#include "doctest.h"
#include "fixtures.hpp"

#include "ctrnli/error.hpp"
#include "ctrnli/models.hpp"
#include "ctrnli/pipeline.hpp"

using namespace ctrnli;
using ctrnli::testing::TempDir;

namespace {

std::shared_ptr<const WordPieceTokenizer> shared_toy_tokenizer() {
  return std::make_shared<const WordPieceTokenizer>(testing::toy_tokenizer());
}

SummarizerConfig fast_summarizer(std::size_t max_tokens = 12) {
  SummarizerConfig config;
  config.max_summary_tokens = max_tokens;
  config.beam_width = 2;
  return config;
}

std::vector<NLIInputPair> toy_pairs(std::size_t n) {
  std::vector<NLIInputPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const bool entails = i % 2 == 0;
    pairs.push_back({"p" + std::to_string(i), "the patients were treated with drug " + std::to_string(i),
                     entails ? "results were primary" : "dose was secondary",
                     entails ? Label::Entailment : Label::Contradiction, false});
  }
  return pairs;
}

}  // namespace

TEST_CASE("the model runtime is available in this build") { CHECK(model_runtime_available()); }

TEST_CASE("beam decoding is deterministic and bounded") {
  auto model = Seq2SeqSummarizer::open(SummarizerConfig{}, shared_toy_tokenizer(), 1);
  const std::string premise = "the patients were treated with drug dose 20 mg";
  const std::string summary = model.summarize(premise);
  CHECK(model.tokenizer().count(summary) <= 300);
  CHECK(model.summarize(premise) == summary);
  CHECK_NOTHROW(model.summarize(""));
  CHECK(model.generate_ids("summarize: trial").size() <= 300);
}

TEST_CASE("scratch summarizers depend on the seed only") {
  auto a = Seq2SeqSummarizer::open(fast_summarizer(), shared_toy_tokenizer(), 4);
  auto b = Seq2SeqSummarizer::open(fast_summarizer(), shared_toy_tokenizer(), 4);
  auto c = Seq2SeqSummarizer::open(fast_summarizer(), shared_toy_tokenizer(), 5);
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint() != c.fingerprint());
  CHECK(a.summarize("drug dose") == b.summarize("drug dose"));
  CHECK_THROWS_AS(
      Seq2SeqSummarizer::open([] {
        SummarizerConfig bad;
        bad.model_identifier = "scratch:t5-enormous";
        return bad;
      }(), shared_toy_tokenizer(), 0),
      Error);
}

TEST_CASE("summarizer fine-tuning is reproducible and checkpoints reload") {
  TempDir dir;
  std::vector<SummaryTrainPair> pairs;
  for (int i = 0; i < 6; ++i) {
    pairs.push_back({"summarize: the patients were treated with drug " + std::to_string(i),
                     "treated with drug"});
  }
  FineTuneConfig config;
  config.learning_rate = 1e-3;
  config.epochs = {1, 2};
  config.seed = 11;

  std::vector<CheckpointScore> scores[2];
  for (int run = 0; run < 2; ++run) {
    auto model = Seq2SeqSummarizer::open(fast_summarizer(), shared_toy_tokenizer(), 11);
    const auto result = finetune_summarizer(model, config, pairs, pairs, dir / ("run" + std::to_string(run)));
    scores[run] = result.scores;
    REQUIRE(result.checkpoints.size() == 2);
    CHECK(std::filesystem::exists(result.checkpoints[1] / "model.pt"));
    if (run == 0) {
      model.save(dir / "saved");
      SummarizerConfig reload = fast_summarizer();
      reload.model_identifier = (dir / "saved").string();
      auto loaded = Seq2SeqSummarizer::open(reload, nullptr, 0);
      CHECK(loaded.fingerprint() == model.fingerprint());
      CHECK(loaded.summarize("the patients") == model.summarize("the patients"));
    }
  }
  CHECK(scores[0] == scores[1]);
  REQUIRE(scores[0].size() == 2);
  CHECK(scores[0][0].epoch == 1);

  auto model = Seq2SeqSummarizer::open(fast_summarizer(), shared_toy_tokenizer(), 11);
  CHECK_THROWS_AS(finetune_summarizer(model, config, {}, {}), Error);
}

TEST_CASE("cross-encoder predictions keep order and stay in range") {
  auto model = CrossEncoder::open(ClassifierConfig{}, shared_toy_tokenizer());
  const auto pairs = toy_pairs(5);
  const auto records = model.predict(pairs, "m");
  REQUIRE(records.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(records[i].instance_id == pairs[i].instance_id);
    CHECK(records[i].score >= 0.0);
    CHECK(records[i].score <= 1.0);
    CHECK(records[i].predicted == label_for_score(records[i].score));
    CHECK(records[i].model_tag == "m");
  }
  CHECK(model.predict(pairs, "m") == records);
}

TEST_CASE("classifier fine-tuning is reproducible and restores the best epoch") {
  TempDir dir;
  ClassifierConfig config;
  config.epochs = 3;
  config.seed = 2;
  const auto train = toy_pairs(8);
  std::vector<double> curves[2];
  for (int run = 0; run < 2; ++run) {
    auto model = CrossEncoder::open(config, shared_toy_tokenizer());
    const auto result = finetune_classifier(model, config, train, train);
    curves[run] = result.dev_macro_f1;
    CHECK(result.dev_macro_f1.size() == 3);
    CHECK(result.train_accuracy.size() == 3);
    CHECK(result.best_epoch >= 1);
    const double best = *std::max_element(result.dev_macro_f1.begin(), result.dev_macro_f1.end());
    CHECK(result.dev_macro_f1[result.best_epoch - 1] == best);
    // The restored weights reproduce the best epoch's dev score.
    std::vector<Label> golds, preds;
    for (const auto& r : model.predict(train, "m")) preds.push_back(r.predicted);
    for (const auto& p : train) golds.push_back(*p.gold);
    CHECK(macro_f1(golds, preds).macro_f1 == doctest::Approx(best));

    if (run == 0) {
      model.save(dir / "clf");
      ClassifierConfig reload = config;
      reload.model_identifier = (dir / "clf").string();
      auto loaded = CrossEncoder::open(reload, nullptr);
      CHECK(loaded.predict(train, "m") == model.predict(train, "m"));
    }
  }
  CHECK(curves[0] == curves[1]);

  auto model = CrossEncoder::open(config, shared_toy_tokenizer());
  CHECK_THROWS_AS(finetune_classifier(model, config, {}, {}), Error);
}

TEST_CASE("train writes the checkpoint grid and per-epoch scores") {
  TempDir dir;
  // A small corpus with short sections keeps this fast.
  std::vector<NLIInstance> train;
  TrialCorpus corpus;
  for (int t = 0; t < 4; ++t) {
    const std::string id = "T" + std::to_string(t);
    auto trial = testing::make_trial(id, {"drug " + std::to_string(t) + " improved the response."});
    testing::write_file(dir / ("data/trials/" + id + ".json"), trial_to_json(trial).dump());
  }
  for (int i = 0; i < 16; ++i) {
    const bool entails = i % 2 == 0;
    train.push_back(testing::make_single("i" + std::to_string(i), "T" + std::to_string(i % 4),
                                         entails ? Label::Entailment : Label::Contradiction,
                                         entails ? "the response improved" : "nothing changed"));
  }
  testing::write_file(dir / "data/train.json", instances_to_json(train).dump());
  const std::string toml = fmt::format(R"(
name = "grid"
seed = 1
[paths]
corpus = "data/trials"
train = "data/train.json"
output = "out"
[summarizer]
max_summary_tokens = 8
beam_width = 2
[summarizer.finetune]
learning_rate = 1e-3
[strategy]
name = "truncate"
)");
  Pipeline pipeline(parse_config(toml, dir.path()));

  const auto summarizer = pipeline.train(Component::Summarizer);
  for (int epoch : {2, 5, 7, 10}) {
    CHECK(std::filesystem::exists(dir / fmt::format("out/summarizer/epoch-{}/model.pt", epoch)));
  }
  CHECK(std::filesystem::exists(dir / "out/summarizer/scores.json"));
  CHECK(summarizer.summarizer_scores.size() == 4);

  const auto classifier = pipeline.train(Component::Classifier);
  const auto scores = nlohmann::json::parse(testing::read_file(classifier.scores_file));
  CHECK(scores["dev_macro_f1"].size() == 40);
  CHECK(scores["train_accuracy"].size() == 40);

  const auto predictions = read_predictions(pipeline.predict(Split::Train, false));
  CHECK(predictions.size() == train.size());
  CHECK(predictions.front().model_tag == "cross-encoder@truncate");
  CHECK(pipeline.calls().classifier_predictions == train.size());

  // A second run from scratch writes identical score files.
  const std::string first = testing::read_file(classifier.scores_file);
  std::filesystem::remove_all(dir / "out");
  Pipeline rerun(parse_config(toml, dir.path()));
  rerun.train(Component::Classifier);
  CHECK(testing::read_file(classifier.scores_file) == first);
}
