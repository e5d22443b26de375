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

#include "ctrnli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

#include "ctrnli/error.hpp"
#include "ctrnli/hash.hpp"

namespace ctrnli {
namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, key + ": " + what);
}

class Reader {
 public:
  Reader(const toml::table& table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {}

  Reader sub(const std::string& key) const {
    const toml::node* node = table_.get(key);
    if (node == nullptr) return Reader(empty_, name(key));
    if (!node->is_table()) bad(name(key), "expected a table");
    return Reader(*node->as_table(), name(key));
  }

  std::string string(const std::string& key, std::string fallback) const {
    const toml::node* node = table_.get(key);
    if (node == nullptr) return fallback;
    if (auto v = node->value<std::string>(); v && node->is_string()) return *v;
    bad(name(key), "expected a string");
  }

  double real(const std::string& key, double fallback) const {
    const toml::node* node = table_.get(key);
    if (node == nullptr) return fallback;
    if (node->is_floating_point() || node->is_integer()) return *node->value<double>();
    bad(name(key), "expected a number");
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    const toml::node* node = table_.get(key);
    if (node == nullptr) return fallback;
    if (!node->is_integer() || *node->value<std::int64_t>() < 0) {
      bad(name(key), "expected a non-negative integer");
    }
    return static_cast<std::uint64_t>(*node->value<std::int64_t>());
  }

  std::vector<std::size_t> counts(const std::string& key, std::vector<std::size_t> fallback) const {
    const toml::node* node = table_.get(key);
    if (node == nullptr) return fallback;
    if (!node->is_array()) bad(name(key), "expected an array of integers");
    std::vector<std::size_t> out;
    for (const auto& item : *node->as_array()) {
      if (!item.is_integer() || *item.value<std::int64_t>() <= 0) {
        bad(name(key), "expected positive integers");
      }
      out.push_back(static_cast<std::size_t>(*item.value<std::int64_t>()));
    }
    return out;
  }

 private:
  std::string name(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  static inline const toml::table empty_{};
  const toml::table& table_;
  std::string prefix_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  if (value.empty()) return {};
  std::filesystem::path p(value);
  return (p.is_absolute() ? p : base / p).lexically_normal();
}

std::string relative_to(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty()) return "";
  return p.lexically_relative(base).generic_string();
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
  }
  return "";
}

std::optional<Split> parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "dev") return Split::Dev;
  if (text == "test") return Split::Test;
  return std::nullopt;
}

const std::filesystem::path& RunPaths::instances(Split split) const {
  switch (split) {
    case Split::Train: return train;
    case Split::Dev: return dev;
    case Split::Test: return test;
  }
  return train;
}

void RunConfig::set_seed(std::uint64_t value) {
  seed = value;
  finetune.seed = value;
  classifier.seed = value;
}

nlohmann::json RunConfig::canonical_json() const {
  nlohmann::json out;
  out["name"] = name;
  out["seed"] = seed;
  out["paths"] = {{"corpus", relative_to(paths.corpus, base_dir)},
                  {"train", relative_to(paths.train, base_dir)},
                  {"dev", relative_to(paths.dev, base_dir)},
                  {"test", relative_to(paths.test, base_dir)},
                  {"output", relative_to(paths.output, base_dir)}};
  out["tokenizer"] = {{"vocab", relative_to(tokenizer.vocab, base_dir)},
                      {"max_vocab", tokenizer.max_vocab}};
  out["strategy"] = {{"name", strategy_name(strategy.kind)},
                     {"model_max", strategy.model_max},
                     {"reserve", strategy.reserve},
                     {"word_limit", strategy.word_limit}};
  out["summarizer"] = {{"model", summarizer.model_identifier},
                       {"prompt_prefix", summarizer.prompt_prefix},
                       {"max_source_tokens", summarizer.max_source_tokens},
                       {"max_summary_tokens", summarizer.max_summary_tokens},
                       {"beam_width", summarizer.beam_width},
                       {"checkpoint", relative_to(summarizer_checkpoint, base_dir)},
                       {"finetune",
                        {{"learning_rate", finetune.learning_rate},
                         {"weight_decay", finetune.weight_decay},
                         {"batch_size", finetune.batch_size},
                         {"epochs", finetune.epochs},
                         {"mode", finetune_mode == PremiseMode::Distinct ? "distinct" : "combined"}}}};
  out["classifier"] = {{"model", classifier.model_identifier},
                       {"max_sequence_tokens", classifier.max_sequence_tokens},
                       {"epochs", classifier.epochs},
                       {"learning_rate", classifier.learning_rate},
                       {"batch_size", classifier.batch_size}};
  return out;
}

std::string RunConfig::hash() const { return sha256_hex(canonical_json().dump()); }

std::filesystem::path RunConfig::cache_root() const {
  if (const char* env = std::getenv("CTRNLI_CACHE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return paths.output / "cache";
}

RunConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir) {
  toml::table table;
  try {
    table = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream where;
    where << e.source().begin;
    throw Error(ErrorCode::InvalidConfig, std::string(e.description()) + " at " + where.str());
  }

  const Reader root(table, "");
  RunConfig config;
  config.base_dir = base_dir;
  config.name = root.string("name", config.name);

  const Reader paths = root.sub("paths");
  config.paths.corpus = resolve(base_dir, paths.string("corpus", ""));
  config.paths.train = resolve(base_dir, paths.string("train", ""));
  config.paths.dev = resolve(base_dir, paths.string("dev", ""));
  config.paths.test = resolve(base_dir, paths.string("test", ""));
  config.paths.output = resolve(base_dir, paths.string("output", "runs/" + config.name));

  const Reader tokenizer = root.sub("tokenizer");
  config.tokenizer.vocab = resolve(base_dir, tokenizer.string("vocab", ""));
  config.tokenizer.max_vocab = tokenizer.count("max_vocab", config.tokenizer.max_vocab);

  const Reader strategy = root.sub("strategy");
  const std::string strategy_text = strategy.string("name", "truncate");
  auto kind = parse_strategy(strategy_text);
  if (!kind) bad("strategy.name", "unknown strategy '" + strategy_text + "'");
  config.strategy.kind = *kind;
  config.strategy.model_max = strategy.count("model_max", config.strategy.model_max);
  config.strategy.reserve = strategy.count("reserve", config.strategy.reserve);
  config.strategy.word_limit = strategy.count("word_limit", config.strategy.word_limit);

  const Reader summarizer = root.sub("summarizer");
  auto& s = config.summarizer;
  s.model_identifier = summarizer.string("model", s.model_identifier);
  s.prompt_prefix = summarizer.string("prompt_prefix", s.prompt_prefix);
  s.max_source_tokens = summarizer.count("max_source_tokens", s.max_source_tokens);
  s.max_summary_tokens = summarizer.count("max_summary_tokens", s.max_summary_tokens);
  s.beam_width = summarizer.count("beam_width", s.beam_width);
  config.summarizer_checkpoint = resolve(base_dir, summarizer.string("checkpoint", ""));

  const Reader finetune = summarizer.sub("finetune");
  auto& f = config.finetune;
  f.learning_rate = finetune.real("learning_rate", f.learning_rate);
  f.weight_decay = finetune.real("weight_decay", f.weight_decay);
  f.batch_size = finetune.count("batch_size", f.batch_size);
  f.epochs = finetune.counts("epochs", f.epochs);
  const std::string mode = finetune.string("mode", "distinct");
  if (mode == "distinct") {
    config.finetune_mode = PremiseMode::Distinct;
  } else if (mode == "combined") {
    config.finetune_mode = PremiseMode::Combined;
  } else {
    bad("summarizer.finetune.mode", "expected 'distinct' or 'combined'");
  }

  const Reader classifier = root.sub("classifier");
  auto& c = config.classifier;
  c.model_identifier = classifier.string("model", c.model_identifier);
  c.max_sequence_tokens = classifier.count("max_sequence_tokens", c.max_sequence_tokens);
  c.epochs = classifier.count("epochs", c.epochs);
  c.learning_rate = classifier.real("learning_rate", c.learning_rate);
  c.batch_size = classifier.count("batch_size", c.batch_size);

  config.set_seed(root.count("seed", 0));

  s.validate();
  f.validate();
  c.validate();
  if (config.strategy.reserve >= config.strategy.model_max) {
    bad("strategy.reserve", "must be below strategy.model_max");
  }
  if (config.strategy.model_max > c.max_sequence_tokens) {
    bad("strategy.model_max", "exceeds the classifier window");
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto base = std::filesystem::absolute(file).parent_path();
  return parse_config(buffer.str(), base);
}

std::vector<Diagnostic> check_paths(const RunConfig& config) {
  std::vector<Diagnostic> out;
  auto require = [&](const std::filesystem::path& p, const char* what, bool directory) {
    std::error_code ec;
    if (p.empty()) {
      out.push_back({ErrorCode::InvalidConfig, what, "path not configured"});
    } else if (directory ? !std::filesystem::is_directory(p, ec)
                         : !std::filesystem::is_regular_file(p, ec)) {
      out.push_back({ErrorCode::Io, p.string(), std::string(what) + " does not exist"});
    }
  };
  require(config.paths.corpus, "paths.corpus", true);
  require(config.paths.train, "paths.train", false);
  if (!config.paths.dev.empty()) require(config.paths.dev, "paths.dev", false);
  if (!config.paths.test.empty()) require(config.paths.test, "paths.test", false);
  if (!config.tokenizer.vocab.empty()) require(config.tokenizer.vocab, "tokenizer.vocab", false);
  return out;
}

}  // namespace ctrnli
