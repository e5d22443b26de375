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

#include <random>

#include "doctest.h"
#include "fixtures.hpp"

#include "ctrnli/error.hpp"
#include "ctrnli/nli.hpp"
#include "ctrnli/shortening.hpp"

using namespace ctrnli;
using ctrnli::testing::make_comparison;
using ctrnli::testing::make_single;
using ctrnli::testing::numbered_words;

namespace {

ShortenedPremise shortened(const std::string& id, const std::string& primary,
                           std::optional<std::string> secondary, const WordPieceTokenizer& tok) {
  ShortenedPremise out;
  out.instance_id = id;
  out.fingerprint = "test";
  out.primary_short = primary;
  out.primary_tokens = tok.count(primary);
  out.secondary_short = secondary;
  if (secondary) out.secondary_tokens = tok.count(*secondary);
  return out;
}

}  // namespace

TEST_CASE("assemble_input joins distinct comparison parts with markers") {
  const auto tok = testing::toy_tokenizer();
  const auto single = assemble_input(shortened("s", "P", std::nullopt, tok),
                                     make_single("s", "T", Label::Entailment, "S"), tok);
  CHECK(single.text_a == "P");
  CHECK(single.text_b == "S");
  CHECK(single.gold == Label::Entailment);
  CHECK_FALSE(single.premise_truncated);

  const auto pair = assemble_input(shortened("c", "A", "B", tok),
                                   make_comparison("c", "T", "U", Label::Contradiction, "S"), tok);
  CHECK(pair.text_a == "Primary trial: A Secondary trial: B");

  const auto combined = assemble_input(shortened("c", "AB", std::nullopt, tok),
                                       make_comparison("c", "T", "U", Label::Contradiction, "S"),
                                       tok);
  CHECK(combined.text_a == "AB");
}

TEST_CASE("assemble_input cuts an oversize premise to exactly fit") {
  const auto tok = testing::toy_tokenizer();
  const std::string statement = numbered_words(40);
  const std::string big = numbered_words(900);
  const auto single = assemble_input(shortened("s", big, std::nullopt, tok),
                                     make_single("s", "T", Label::Entailment, statement), tok);
  CHECK(single.premise_truncated);
  CHECK(single.text_b == statement);
  CHECK(assembled_length(single, tok) == 512);
  CHECK(big.starts_with(single.text_a));

  const auto pair = assemble_input(shortened("c", big, big, tok),
                                   make_comparison("c", "T", "U", Label::Entailment, statement), tok);
  CHECK(pair.premise_truncated);
  CHECK(assembled_length(pair, tok) <= 512);
  CHECK(assembled_length(pair, tok) >= 505);
  CHECK(pair.text_a.find("Secondary trial: ") != std::string::npos);
  CHECK(pair.text_b == statement);

  const std::string huge_statement = numbered_words(300);
  CHECK_THROWS_AS(assemble_input(shortened("s", "P", std::nullopt, tok),
                                 make_single("s", "T", Label::Entailment, huge_statement), tok),
                  Error);
}

TEST_CASE("assembled inputs never exceed 512 tokens") {
  const auto tok = testing::toy_tokenizer();
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::string statement = numbered_words(1 + rng() % 80, rng() % 50);
    const std::string a = numbered_words(rng() % 600, rng() % 100);
    const bool comparison = rng() % 2 == 0;
    const std::string b = numbered_words(rng() % 600, rng() % 100);
    const auto instance = comparison ? make_comparison("x", "T", "U", Label::Entailment, statement)
                                     : make_single("x", "T", Label::Entailment, statement);
    const auto input = assemble_input(
        shortened("x", a, comparison ? std::optional<std::string>(b) : std::nullopt, tok),
        instance, tok);
    CHECK(assembled_length(input, tok) <= 512);
    CHECK(input.text_b == statement);
  }
}

TEST_CASE("lexical overlap baseline") {
  CHECK(lexical_overlap_score("the a b c d", "a b") == 1.0);
  CHECK(lexical_overlap_score("x y", "a b") == 0.0);
  CHECK(lexical_overlap_score("a b x", "a b c d") == 0.5);
  CHECK(lexical_overlap_score("a", "") == 0.0);
  CHECK(label_for_score(0.5) == Label::Entailment);
  CHECK(label_for_score(0.4999) == Label::Contradiction);

  std::vector<NLIInputPair> pairs = {{"p1", "a b x", "a b c d", Label::Entailment, false},
                                     {"p2", "x y", "a b", Label::Contradiction, false}};
  const auto records = lexical_overlap_baseline(pairs);
  REQUIRE(records.size() == 2);
  CHECK(records[0].instance_id == "p1");
  CHECK(records[0].predicted == Label::Entailment);
  CHECK(records[1].predicted == Label::Contradiction);
  CHECK(records[0].model_tag == "lexical-overlap");
  CHECK(lexical_overlap_baseline(pairs) == records);
}

TEST_CASE("adding statement words to the premise never lowers the baseline score") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string premise = numbered_words(rng() % 10, rng() % 10);
    const std::string statement = numbered_words(1 + rng() % 6, rng() % 10);
    const double before = lexical_overlap_score(premise, statement);
    const double after = lexical_overlap_score(premise + " w" + std::to_string(rng() % 20), statement);
    const double with_statement = lexical_overlap_score(premise + " " + statement, statement);
    CHECK(after >= before);
    CHECK(with_statement == 1.0);
  }
}

TEST_CASE("predictions round-trip through JSONL") {
  testing::TempDir dir;
  std::vector<PredictionRecord> records = {{"a", Label::Entailment, 0.75, "m"},
                                           {"b", Label::Contradiction, 0.125, "m"}};
  write_predictions(dir / "p.jsonl", records);
  CHECK(read_predictions(dir / "p.jsonl") == records);
  const std::string text = testing::read_file(dir / "p.jsonl");
  CHECK(text.find("\"instance_id\"") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("classifier config pins the sequence length") {
  ClassifierConfig config;
  CHECK(config.epochs == 40);
  CHECK(config.learning_rate == 5e-5);
  CHECK_NOTHROW(config.validate());
  config.max_sequence_tokens = 256;
  CHECK_THROWS_AS(config.validate(), Error);
}
