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
#include "ctrnli/rouge.hpp"
#include "ctrnli/summarizer.hpp"

using namespace ctrnli;
using ctrnli::testing::make_comparison;
using ctrnli::testing::make_single;
using ctrnli::testing::make_trial;

TEST_CASE("rouge1 worked values") {
  const RougeScore same = rouge1("a b c", "a b c");
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.f1 == 1.0);

  const RougeScore partial = rouge1("a b c", "a b d");
  CHECK(partial.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(partial.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(partial.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  const RougeScore empty = rouge1("", "a b");
  CHECK(empty.precision == 0.0);
  CHECK(empty.recall == 0.0);
  CHECK(empty.f1 == 0.0);
}

TEST_CASE("rouge1 clips repeated unigrams and ignores case and punctuation") {
  const RougeScore r = rouge1("The the THE cat.", "the cat sat");
  CHECK(r.precision == doctest::Approx(2.0 / 4.0));
  CHECK(r.recall == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("rouge1 is bounded and symmetric in f1") {
  std::mt19937 rng(5);
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f"};
  auto sample = [&] {
    std::string s;
    const int n = static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) s += pool[rng() % pool.size()] + " ";
    return s;
  };
  for (int i = 0; i < 300; ++i) {
    const std::string x = sample();
    const std::string y = sample();
    const RougeScore xy = rouge1(x, y);
    const RougeScore yx = rouge1(y, x);
    for (double v : {xy.precision, xy.recall, xy.f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(xy.f1 == doctest::Approx(yx.f1).epsilon(1e-12));
    CHECK(xy.precision == doctest::Approx(yx.recall).epsilon(1e-12));
  }
}

TEST_CASE("build_finetune_dataset keeps Entailment instances only") {
  TrialCorpus corpus{{"A", make_trial("A", {"alpha"})}, {"B", make_trial("B", {"beta"})}};

  std::vector<NLIInstance> two = {make_single("e", "A", Label::Entailment, "yes"),
                                  make_single("c", "A", Label::Contradiction, "no")};
  const auto pairs = build_finetune_dataset(two, corpus, PremiseMode::Distinct);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].source == "summarize: alpha");
  CHECK(pairs[0].target == "yes");

  std::vector<NLIInstance> comparison = {make_comparison("x", "A", "B", Label::Entailment, "both")};
  const auto distinct = build_finetune_dataset(comparison, corpus, PremiseMode::Distinct);
  REQUIRE(distinct.size() == 2);
  CHECK(distinct[0].source == "summarize: alpha");
  CHECK(distinct[1].source == "summarize: beta");
  CHECK(distinct[0].target == distinct[1].target);
  const auto combined = build_finetune_dataset(comparison, corpus, PremiseMode::Combined);
  REQUIRE(combined.size() == 1);
  CHECK(combined[0].source == "summarize: alpha\nbeta");

  std::vector<NLIInstance> unlabeled = {make_single("u", "A", std::nullopt)};
  CHECK_THROWS_AS(build_finetune_dataset(unlabeled, corpus, PremiseMode::Distinct), Error);
}

TEST_CASE("build_finetune_dataset size matches a label count") {
  TrialCorpus corpus{{"A", make_trial("A", {"alpha"})}};
  std::mt19937 rng(9);
  std::vector<NLIInstance> instances;
  std::size_t expected = 0;
  for (int i = 0; i < 20; ++i) {
    const bool entails = i < 12;
    instances.push_back(make_single("i" + std::to_string(i), "A",
                                    entails ? Label::Entailment : Label::Contradiction));
    expected += entails;
  }
  std::shuffle(instances.begin(), instances.end(), rng);
  const auto pairs = build_finetune_dataset(instances, corpus, PremiseMode::Distinct);
  CHECK(pairs.size() == expected);
  CHECK(pairs.size() == 12);
  for (const auto& p : pairs) CHECK(p.source.starts_with("summarize: "));
}

TEST_CASE("best_checkpoint breaks ties toward fewer epochs") {
  const std::vector<CheckpointScore> scores = {{2, 0.3}, {5, 0.5}, {7, 0.5}, {10, 0.4}};
  CHECK(best_checkpoint(scores) == CheckpointScore{5, 0.5});
  CHECK(scores_from_json(scores_to_json(scores)) == scores);
}

TEST_CASE("configs reject nonsensical settings") {
  SummarizerConfig summarizer;
  CHECK_NOTHROW(summarizer.validate());
  summarizer.beam_width = 0;
  CHECK_THROWS_AS(summarizer.validate(), Error);

  FineTuneConfig finetune;
  CHECK(finetune.epochs == std::vector<std::size_t>{2, 5, 7, 10});
  CHECK_NOTHROW(finetune.validate());
  finetune.learning_rate = -1.0;
  CHECK_THROWS_AS(finetune.validate(), Error);
}
