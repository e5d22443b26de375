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
#include "ctrnli/text.hpp"
#include "ctrnli/tokenizer.hpp"

using namespace ctrnli;

namespace {

std::vector<std::string> sentence_strings(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& s : text::split_sentences(text)) {
    out.emplace_back(text.substr(s.begin, s.end - s.begin));
  }
  return out;
}

std::string random_text(std::mt19937& rng, std::size_t words) {
  static const std::vector<std::string> pool = {
      "the", "patients", "trial", "dose", "mg", "results", "were", "treated", "drug", "xylophone",
      "Overall", "42", "3.5", "(n=12)", "cohort,", "response;", "week-4", "primary", "zzqx", "!"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> gap(0, 5);
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (!out.empty()) out += gap(rng) == 0 ? "\n" : " ";
    out += pool[pick(rng)];
  }
  return out;
}

}  // namespace

TEST_CASE("word_tokens lowercases letter and digit runs") {
  CHECK(text::word_tokens("The 3 Patients, (n=12)!") ==
        std::vector<std::string>{"the", "3", "patients", "n", "12"});
  CHECK(text::word_tokens("").empty());
  CHECK(text::word_tokens("naïve") == std::vector<std::string>{"naïve"});
}

TEST_CASE("count_words counts whitespace separated words") {
  CHECK(text::count_words("") == 0);
  CHECK(text::count_words("  a  b\nc\t") == 3);
  CHECK(text::count_words("x, y.") == 2);
}

TEST_CASE("split_sentences splits at newlines and terminal punctuation") {
  CHECK(sentence_strings("First one. Second one? Third!\nFourth line\n\n  ") ==
        std::vector<std::string>{"First one.", "Second one?", "Third!", "Fourth line"});
  CHECK(sentence_strings("Dose 2.5 mg daily.") == std::vector<std::string>{"Dose 2.5 mg daily."});
  CHECK(sentence_strings("").empty());
}

TEST_CASE("tokenizer vocabulary starts with the special tokens") {
  const auto tok = testing::toy_tokenizer();
  CHECK(tok.token(WordPieceTokenizer::kPad) == "[PAD]");
  CHECK(tok.token(WordPieceTokenizer::kUnk) == "[UNK]");
  CHECK(tok.token(WordPieceTokenizer::kCls) == "[CLS]");
  CHECK(tok.token(WordPieceTokenizer::kSep) == "[SEP]");
  CHECK_THROWS_AS(WordPieceTokenizer(std::vector<std::string>{"a", "b"}), Error);
}

TEST_CASE("encode uses whole words and continuation pieces") {
  const auto tok = testing::toy_tokenizer();
  const auto tokens = tok.encode("patients xyz");
  REQUIRE(tokens.size() == 4);
  CHECK(tok.token(tokens[0].id) == "patients");
  CHECK(tok.token(tokens[1].id) == "x");
  CHECK(tok.token(tokens[2].id) == "##y");
  CHECK(tok.token(tokens[3].id) == "##z");
  CHECK(tokens[1].begin == 9);
  CHECK(tokens[3].end == 12);
  CHECK(tok.decode(tok.ids("patients xyz")) == "patients xyz");
  // A character outside the vocabulary turns the whole word into [UNK].
  const auto unk = tok.ids("ab\xe2\x82\xac");
  REQUIRE(unk.size() == 1);
  CHECK(unk[0] == WordPieceTokenizer::kUnk);
}

TEST_CASE("train respects max_vocab and reserved words") {
  std::vector<std::string> texts = {"alpha beta beta gamma gamma gamma"};
  std::vector<std::string> reserved = {"Primary trial:"};
  const auto tok = WordPieceTokenizer::train(texts, 1000, reserved);
  CHECK(tok.find("Primary").has_value());
  CHECK(tok.find("gamma").has_value());
  const auto small = WordPieceTokenizer::train(texts, 10);
  CHECK(small.vocab_size() >= WordPieceTokenizer::kNumSpecial);
  // Characters are always kept so nothing in the training text becomes [UNK].
  for (int id : small.ids(texts[0])) CHECK(id != WordPieceTokenizer::kUnk);
}

TEST_CASE("vocabulary files round-trip") {
  testing::TempDir dir;
  const auto tok = testing::toy_tokenizer();
  tok.save(dir / "vocab.txt");
  const auto loaded = WordPieceTokenizer::load(dir / "vocab.txt");
  CHECK(loaded.vocab_size() == tok.vocab_size());
  CHECK(loaded.fingerprint() == tok.fingerprint());
  CHECK(loaded.ids("the trial dose") == tok.ids("the trial dose"));
}

TEST_CASE("truncate keeps an exact token prefix") {
  const auto tok = testing::toy_tokenizer();
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string text = random_text(rng, 1 + rng() % 60);
    const auto full = tok.ids(text);
    const std::size_t n = rng() % (full.size() + 3);
    const std::string cut = tok.truncate(text, n);
    CHECK(text.starts_with(cut));
    const auto prefix = tok.ids(cut);
    REQUIRE(prefix.size() == std::min(n, full.size()));
    CHECK(std::equal(prefix.begin(), prefix.end(), full.begin()));
  }
  CHECK(tok.truncate("the trial", 0).empty());
  CHECK(tok.truncate("the trial", 5) == "the trial");
}
