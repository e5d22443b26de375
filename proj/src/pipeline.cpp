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

#include "ctrnli/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "ctrnli/error.hpp"
#include "ctrnli/hash.hpp"
#include "ctrnli/nli.hpp"

namespace ctrnli {
namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::string file_safe(std::string_view tag) {
  std::string out;
  for (char c : tag) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                    c == '.' || c == '@';
    out.push_back(ok ? c : '_');
  }
  return out;
}

// Re-raises with the instance id attached, keeping the error code.
[[noreturn]] void rethrow_for(const NLIInstance& instance, const Error& e) {
  std::string_view message = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  if (message.starts_with(prefix)) message.remove_prefix(prefix.size());
  throw Error(e.code(), "instance " + instance.instance_id + ": " + std::string(message));
}

}  // namespace

Pipeline::Pipeline(RunConfig config) : config_(std::move(config)) {}
Pipeline::~Pipeline() = default;

const TrialCorpus& Pipeline::corpus() {
  if (!corpus_) corpus_ = load_corpus_or_throw(config_.paths.corpus);
  return *corpus_;
}

const std::vector<NLIInstance>& Pipeline::instances(Split split) {
  auto it = instances_.find(split);
  if (it != instances_.end()) return it->second;
  const auto& file = config_.paths.instances(split);
  if (file.empty()) {
    throw Error(ErrorCode::InvalidConfig,
                "no instance file configured for split " + std::string(split_name(split)));
  }
  return instances_.emplace(split, load_instances_or_throw(file, corpus())).first->second;
}

std::vector<Diagnostic> Pipeline::validate() {
  std::vector<Diagnostic> diagnostics = check_paths(config_);
  if (!diagnostics.empty()) return diagnostics;

  CorpusLoad corpus_load = load_corpus(config_.paths.corpus);
  diagnostics.insert(diagnostics.end(), corpus_load.errors.begin(), corpus_load.errors.end());
  for (Split split : {Split::Train, Split::Dev, Split::Test}) {
    const auto& file = config_.paths.instances(split);
    if (file.empty()) continue;
    InstanceLoad load = load_instances(file, corpus_load.trials);
    diagnostics.insert(diagnostics.end(), load.errors.begin(), load.errors.end());
    if (split != Split::Test) {
      for (const auto& instance : load.instances) {
        if (!instance.label) {
          diagnostics.push_back({ErrorCode::UnlabeledInstance, file.string(),
                                 "instance " + instance.instance_id + " in the " +
                                     std::string(split_name(split)) + " split has no label"});
        }
      }
    }
  }
  return diagnostics;
}

std::shared_ptr<const WordPieceTokenizer> Pipeline::tokenizer() {
  if (tokenizer_) return tokenizer_;
  std::filesystem::path vocab = config_.tokenizer.vocab;
  if (vocab.empty()) vocab = config_.paths.output / "tokenizer" / "vocab.txt";
  if (std::filesystem::exists(vocab)) {
    tokenizer_ = std::make_shared<const WordPieceTokenizer>(WordPieceTokenizer::load(vocab));
    return tokenizer_;
  }
  std::vector<std::string> texts;
  std::set<std::string> seen;
  for (const auto& instance : instances(Split::Train)) {
    const ResolvedPremises premises = resolve_premises(instance, corpus());
    for (const std::string* t : {&premises.primary_text,
                                 premises.secondary_text ? &*premises.secondary_text : nullptr}) {
      if (t != nullptr && seen.insert(*t).second) texts.push_back(*t);
    }
    texts.push_back(instance.statement);
  }
  const std::vector<std::string> reserved = {std::string(kPrimaryMarker),
                                             std::string(kSecondaryMarker),
                                             config_.summarizer.prompt_prefix};
  auto trained = WordPieceTokenizer::train(texts, config_.tokenizer.max_vocab, reserved);
  trained.save(vocab);
  record_artifact(vocab, "tokenizer");
  tokenizer_ = std::make_shared<const WordPieceTokenizer>(std::move(trained));
  return tokenizer_;
}

const TfidfModel& Pipeline::tfidf() {
  if (tfidf_) return *tfidf_;
  std::vector<std::string> texts;
  std::set<std::string> seen;
  for (const auto& instance : instances(Split::Train)) {
    const ResolvedPremises premises = resolve_premises(instance, corpus());
    for (const std::string* t : {&premises.primary_text,
                                 premises.secondary_text ? &*premises.secondary_text : nullptr}) {
      if (t != nullptr && seen.insert(*t).second) texts.push_back(*t);
    }
  }
  tfidf_ = fit_tfidf(texts);
  const auto file = config_.paths.output / "tfidf" / "model.json";
  const std::string contents = tfidf_->to_json().dump(1) + "\n";
  if (!std::filesystem::exists(file) || read_file(file) != contents) {
    write_text_file(file, contents);
  }
  record_artifact(file, "tfidf");
  return *tfidf_;
}

std::filesystem::path Pipeline::summarizer_dir() const { return config_.paths.output / "summarizer"; }

std::filesystem::path Pipeline::classifier_dir() const {
  return config_.paths.output / "classifier" / std::string(strategy_name(config_.strategy.kind));
}

AbstractiveSummarizer& Pipeline::summarizer() {
  if (summarizer_) return *summarizer_;
  SummarizerConfig settings = config_.summarizer;
  std::filesystem::path checkpoint = config_.summarizer_checkpoint;
  if (checkpoint.empty()) {
    const auto marker = summarizer_dir() / "BEST";
    if (std::filesystem::exists(marker)) {
      std::string name = read_file(marker);
      while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
      checkpoint = summarizer_dir() / name;
    }
  }
  if (!checkpoint.empty()) settings.model_identifier = checkpoint.string();
  summarizer_ = std::make_unique<Seq2SeqSummarizer>(
      Seq2SeqSummarizer::open(settings, tokenizer(), config_.seed));
  return *summarizer_;
}

ShorteningContext Pipeline::context_for(StrategyKind kind) {
  ShorteningContext context;
  context.tokenizer = tokenizer().get();
  if (kind == StrategyKind::ExtractiveTfidf) context.tfidf = &tfidf();
  if (kind == StrategyKind::AbstractiveCombined || kind == StrategyKind::AbstractiveDistinct) {
    context.summarizer = &summarizer();
  }
  return context;
}

std::filesystem::path Pipeline::cache_file(const std::string& fingerprint, Split split) const {
  return config_.cache_root() /
         fmt::format("shortened-{}-{}.jsonl", short_hash(fingerprint), split_name(split));
}

ShortenStats Pipeline::shorten(Split split) {
  const ShorteningContext context = context_for(config_.strategy.kind);
  const std::string fingerprint = strategy_fingerprint(config_.strategy, context);
  SummaryCache cache(cache_file(fingerprint, split), fingerprint);
  Shortener shortener(config_.strategy, context, &cache);
  for (const auto& instance : instances(split)) {
    try {
      shortener.shorten(instance, corpus());
    } catch (const Error& e) {
      rethrow_for(instance, e);
    }
  }
  if (!std::filesystem::exists(cache.path())) write_text_file(cache.path(), "");
  calls_.premises_shortened += shortener.generated();
  if (shortener.generated() > 0 || !std::filesystem::exists(config_.paths.output / "manifest.json")) {
    record_artifact(cache.path(), "shortened-cache");
  }
  spdlog::info("shorten {} ({}): {} generated, {} cached", split_name(split), fingerprint,
               shortener.generated(), shortener.reused());
  return {cache.path(), fingerprint, instances(split).size(), shortener.generated(),
          shortener.reused()};
}

std::vector<NLIInputPair> Pipeline::assembled_pairs(Split split) {
  const ShortenStats stats = shorten(split);
  SummaryCache cache(stats.cache_file, stats.fingerprint);
  const auto& tok = *tokenizer();
  std::vector<NLIInputPair> pairs;
  for (const auto& instance : instances(split)) {
    const ShortenedPremise* shortened = cache.find(instance.instance_id);
    if (shortened == nullptr) {
      throw Error(ErrorCode::CacheCorruption, "cache lacks instance " + instance.instance_id);
    }
    try {
      pairs.push_back(
          assemble_input(*shortened, instance, tok, config_.classifier.max_sequence_tokens));
    } catch (const Error& e) {
      rethrow_for(instance, e);
    }
  }
  return pairs;
}

std::string Pipeline::model_tag(bool lexical_baseline) const {
  return std::string(lexical_baseline ? "lexical-overlap" : "cross-encoder") + "@" +
         std::string(strategy_name(config_.strategy.kind));
}

TrainOutcome Pipeline::train(Component component) {
  TrainOutcome outcome;
  if (component == Component::Summarizer) {
    const auto& train_instances = instances(Split::Train);
    const auto pairs = build_finetune_dataset(train_instances, corpus(), config_.finetune_mode,
                                              config_.summarizer.prompt_prefix);
    std::vector<SummaryTrainPair> dev_pairs;
    if (!config_.paths.dev.empty()) {
      dev_pairs = build_finetune_dataset(instances(Split::Dev), corpus(), config_.finetune_mode,
                                         config_.summarizer.prompt_prefix);
    }
    SummarizerConfig base = config_.summarizer;
    auto model = Seq2SeqSummarizer::open(base, tokenizer(), config_.seed);
    outcome.directory = summarizer_dir();
    const auto result = finetune_summarizer(model, config_.finetune, pairs, dev_pairs, outcome.directory);
    outcome.summarizer_scores = result.scores;
    outcome.best_epoch = result.best.epoch;
    outcome.scores_file = outcome.directory / "scores.json";
    nlohmann::ordered_json scores;
    scores["metric"] = "rouge1_f";
    scores["scores"] = scores_to_json(result.scores);
    scores["best_epoch"] = result.best.epoch;
    write_text_file(outcome.scores_file, scores.dump(2) + "\n");
    write_text_file(outcome.directory / "BEST", fmt::format("epoch-{}\n", result.best.epoch));
    for (const auto& dir : result.checkpoints) {
      for (const char* name : {"model.pt", "vocab.txt", "config.json"}) {
        record_artifact(dir / name, "summarizer-checkpoint");
      }
    }
    record_artifact(outcome.scores_file, "summarizer-scores");
    record_artifact(outcome.directory / "BEST", "summarizer-best");
    summarizer_.reset();
    return outcome;
  }

  const auto train_pairs = assembled_pairs(Split::Train);
  std::vector<NLIInputPair> dev_pairs;
  if (!config_.paths.dev.empty()) dev_pairs = assembled_pairs(Split::Dev);
  auto model = CrossEncoder::open(config_.classifier, tokenizer());
  const auto result = finetune_classifier(model, config_.classifier, train_pairs, dev_pairs);
  outcome.directory = classifier_dir();
  outcome.classifier_dev_macro_f1 = result.dev_macro_f1;
  outcome.best_epoch = result.best_epoch;
  model.save(outcome.directory / "best");
  outcome.scores_file = outcome.directory / "scores.json";
  nlohmann::ordered_json scores;
  scores["metric"] = "dev_macro_f1";
  scores["dev_macro_f1"] = result.dev_macro_f1;
  scores["train_accuracy"] = result.train_accuracy;
  scores["best_epoch"] = result.best_epoch;
  write_text_file(outcome.scores_file, scores.dump(2) + "\n");
  write_text_file(outcome.directory / "BEST", fmt::format("epoch-{}\n", result.best_epoch));
  for (const char* name : {"model.pt", "vocab.txt", "config.json"}) {
    record_artifact(outcome.directory / "best" / name, "classifier-checkpoint");
  }
  record_artifact(outcome.scores_file, "classifier-scores");
  record_artifact(outcome.directory / "BEST", "classifier-best");
  return outcome;
}

std::filesystem::path Pipeline::predict(Split split, bool lexical_baseline) {
  const std::string tag = model_tag(lexical_baseline);
  std::vector<PredictionRecord> records;
  if (lexical_baseline) {
    records = lexical_overlap_baseline(assembled_pairs(split), 0.5, tag);
  } else {
    const auto checkpoint = classifier_dir() / "best";
    if (!std::filesystem::exists(checkpoint / "model.pt")) {
      throw Error(ErrorCode::MissingCheckpoint,
                  "no trained classifier at " + checkpoint.string() + "; run `train classifier`");
    }
    ClassifierConfig settings = config_.classifier;
    settings.model_identifier = checkpoint.string();
    auto model = CrossEncoder::open(settings, nullptr);
    const auto pairs = assembled_pairs(split);
    records = model.predict(pairs, tag);
    calls_.classifier_predictions += pairs.size();
  }
  const auto file = config_.paths.output / "predictions" /
                    (std::string(split_name(split)) + "-" + file_safe(tag) + ".jsonl");
  write_predictions(file, records);
  record_artifact(file, "predictions");
  return file;
}

EvaluateOutputs Pipeline::evaluate(Split split,
                                   const std::vector<std::filesystem::path>& prediction_files) {
  if (prediction_files.empty()) throw Error(ErrorCode::EmptyInput, "no prediction files given");
  const auto& split_instances = instances(split);
  const auto& tok = *tokenizer();
  const std::string split_text(split_name(split));

  // Original premise and statement lengths do not depend on the model.
  std::vector<std::size_t> original_tokens;
  std::vector<std::size_t> statement_tokens;
  for (const auto& instance : split_instances) {
    if (!instance.label) {
      throw Error(ErrorCode::UnlabeledInstance,
                  "evaluation needs gold labels; " + instance.instance_id + " has none");
    }
    const ResolvedPremises premises = resolve_premises(instance, corpus());
    original_tokens.push_back(tok.count(premises.primary_text) +
                              (premises.secondary_text ? tok.count(*premises.secondary_text) : 0));
    statement_tokens.push_back(tok.count(instance.statement));
  }

  // Shortened lengths come from the cache of the strategy named in the tag.
  auto shortened_tokens = [&](const std::string& tag) -> std::optional<std::vector<std::size_t>> {
    const auto at = tag.rfind('@');
    if (at == std::string::npos) return std::nullopt;
    auto kind = parse_strategy(tag.substr(at + 1));
    if (!kind) return std::nullopt;
    try {
      ShorteningStrategy strategy = config_.strategy;
      strategy.kind = *kind;
      const std::string fp = strategy_fingerprint(strategy, context_for(*kind));
      const auto file = cache_file(fp, split);
      if (!std::filesystem::exists(file)) return std::nullopt;
      SummaryCache cache(file, fp);
      std::vector<std::size_t> out;
      for (const auto& instance : split_instances) {
        const ShortenedPremise* record = cache.find(instance.instance_id);
        if (record == nullptr) return std::nullopt;
        out.push_back(record->total_tokens());
      }
      return out;
    } catch (const Error& e) {
      spdlog::warn("no shortened lengths for {}: {}", tag, e.what());
      return std::nullopt;
    }
  };

  EvaluateOutputs outputs;
  std::vector<std::pair<std::string, std::vector<PredictionRecord>>> sets;
  const auto report_dir = config_.paths.output / "reports" / split_text;
  for (const auto& file : prediction_files) {
    auto records = read_predictions(file);
    if (records.empty()) throw Error(ErrorCode::MissingPredictions, file.string() + " is empty");
    const std::string tag = records.front().model_tag;
    for (const auto& r : records) {
      if (r.model_tag != tag) {
        throw Error(ErrorCode::MixedModelTags, file.string() + " mixes '" + tag + "' and '" +
                                                   r.model_tag + "'");
      }
    }
    std::map<std::string, const PredictionRecord*> by_id;
    for (const auto& r : records) by_id.emplace(r.instance_id, &r);

    std::vector<Label> golds;
    std::vector<Label> preds;
    std::vector<BreakdownItem> items;
    const auto shortened = shortened_tokens(tag);
    for (std::size_t i = 0; i < split_instances.size(); ++i) {
      const auto& instance = split_instances[i];
      auto it = by_id.find(instance.instance_id);
      if (it == by_id.end()) {
        throw Error(ErrorCode::MissingPredictions,
                    file.string() + " has no prediction for " + instance.instance_id);
      }
      golds.push_back(*instance.label);
      preds.push_back(it->second->predicted);
      BreakdownItem item;
      item.section = instance.section;
      item.type = instance.instance_type;
      item.gold = *instance.label;
      item.predicted = it->second->predicted;
      item.original_premise_tokens = original_tokens[i];
      if (shortened) item.shortened_premise_tokens = (*shortened)[i];
      item.statement_tokens = statement_tokens[i];
      items.push_back(item);
    }

    MetricsReport report;
    report.model_tag = tag;
    report.split = split_text;
    report.num_instances = split_instances.size();
    report.scores = macro_f1(golds, preds);
    const auto pairs = build_contrast_pairs(split_instances, records);
    report.faithfulness = faithfulness(pairs);
    report.consistency = consistency(pairs);
    report.contrast = contrast_counts(pairs);
    const bool report_shortened = tag.ends_with("@extractive") ||
                                  tag.ends_with("@abstractive-combined") ||
                                  tag.ends_with("@abstractive-distinct");
    report.by_section = breakdown(items, GroupBy::Section, report_shortened);
    report.by_type = breakdown(items, GroupBy::Type, report_shortened);

    const auto section_csv = report_dir / ("breakdown-section-" + file_safe(tag) + ".csv");
    const auto type_csv = report_dir / ("breakdown-type-" + file_safe(tag) + ".csv");
    write_text_file(section_csv, breakdown_csv(report.by_section));
    write_text_file(type_csv, breakdown_csv(report.by_type));
    outputs.breakdown_csvs.push_back(section_csv);
    outputs.breakdown_csvs.push_back(type_csv);
    outputs.reports.push_back(std::move(report));
    sets.emplace_back(tag, std::move(records));
  }

  nlohmann::ordered_json document;
  document["split"] = split_text;
  document["config_hash"] = config_.hash();
  document["models"] = nlohmann::ordered_json::array();
  for (const auto& r : outputs.reports) document["models"].push_back(report_to_json(r));
  if (sets.size() >= 2) {
    outputs.agreement = agreement_matrix(sets);
    document["agreement"] = agreement_to_json(*outputs.agreement);
    outputs.agreement_csv = report_dir / "agreement.csv";
    outputs.agreement_svg = report_dir / "agreement.svg";
    write_text_file(*outputs.agreement_csv, agreement_csv(*outputs.agreement));
    write_text_file(*outputs.agreement_svg, agreement_svg(*outputs.agreement));
  } else {
    document["agreement"] = nullptr;
  }

  outputs.report_json = report_dir / "report.json";
  outputs.table_csv = report_dir / "table.csv";
  write_text_file(outputs.report_json, document.dump(2) + "\n");
  write_text_file(outputs.table_csv, table_csv(outputs.reports));

  record_artifact(outputs.report_json, "report");
  record_artifact(outputs.table_csv, "table");
  for (const auto& f : outputs.breakdown_csvs) record_artifact(f, "breakdown");
  if (outputs.agreement_csv) {
    record_artifact(*outputs.agreement_csv, "agreement");
    record_artifact(*outputs.agreement_svg, "heatmap");
  }
  return outputs;
}

void Pipeline::record_artifact(const std::filesystem::path& file, const std::string& kind) {
  const auto manifest_file = config_.paths.output / "manifest.json";
  nlohmann::ordered_json manifest;
  if (std::filesystem::exists(manifest_file)) {
    try {
      manifest = nlohmann::ordered_json::parse(read_file(manifest_file));
    } catch (const nlohmann::json::exception&) {
      spdlog::warn("rewriting unreadable manifest {}", manifest_file.string());
    }
  }
  const std::string now = utc_timestamp();
  if (!manifest.contains("created")) manifest["created"] = now;
  manifest["updated"] = now;
  manifest["config_hash"] = config_.hash();
  manifest["config"] = config_.canonical_json();
  manifest["versions"] = {{"ctrnli", kVersion},
                          {"model_runtime", model_runtime_available() ? "libtorch" : "none"}};
  if (!manifest.contains("artifacts")) manifest["artifacts"] = nlohmann::ordered_json::object();

  std::error_code ec;
  auto relative = std::filesystem::relative(file, config_.paths.output, ec);
  const std::string key =
      (ec || relative.empty() || relative.native().starts_with("..")) ? file.string()
                                                                      : relative.generic_string();
  manifest["artifacts"][key] = {{"kind", kind},
                                {"sha256", sha256_hex(read_file(file))},
                                {"recorded", now}};
  write_text_file(manifest_file, manifest.dump(2) + "\n");
}

}  // namespace ctrnli
