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
#include "metrics_oracle.hpp"

#include "ctrnli/error.hpp"
#include "ctrnli/pipeline.hpp"

using namespace ctrnli;
using ctrnli::testing::TempDir;
using ctrnli::testing::read_file;

namespace {

const std::filesystem::path kMini = std::filesystem::path(CTRNLI_SOURCE_DIR) / "data" / "mini";

RunConfig mini_config(const TempDir& dir, const std::string& strategy,
                      const std::filesystem::path& data = kMini) {
  const std::string text = fmt::format(R"(
name = "mini-test"
seed = 3
[paths]
corpus = "{0}/trials"
train = "{0}/train.json"
dev = "{0}/dev.json"
test = "{0}/test.json"
output = "{1}"
[strategy]
name = "{2}"
)",
                                       data.string(), (dir / "out").string(), strategy);
  return parse_config(text, dir.path());
}

nlohmann::json read_json(const std::filesystem::path& file) {
  return nlohmann::json::parse(read_file(file));
}

}  // namespace

TEST_CASE("the bundled mini dataset validates") {
  TempDir dir;
  Pipeline pipeline(mini_config(dir, "truncate"));
  const auto problems = pipeline.validate();
  for (const auto& p : problems) MESSAGE(format_diagnostic(p));
  CHECK(problems.empty());
  CHECK(pipeline.instances(Split::Test).size() >= 15);
}

TEST_CASE("validate reports missing inputs and bad references") {
  TempDir dir;
  Pipeline missing(mini_config(dir, "truncate", dir / "nowhere"));
  const auto problems = missing.validate();
  REQUIRE_FALSE(problems.empty());
  CHECK(problems[0].file.find("nowhere") != std::string::npos);

  std::filesystem::copy(kMini, dir / "data", std::filesystem::copy_options::recursive);
  auto train = read_json(dir / "data/train.json");
  train.begin().value()["primary"] = "NCT-MISSING";
  testing::write_file(dir / "data/train.json", train.dump(2));
  Pipeline dangling(mini_config(dir, "truncate", dir / "data"));
  const auto found = dangling.validate();
  REQUIRE(found.size() == 1);
  CHECK(found[0].code == ErrorCode::DanglingTrialRef);
}

TEST_CASE("truncate shortening respects the budget and is idempotent") {
  TempDir dir;
  const RunConfig config = mini_config(dir, "truncate");
  ShortenStats first;
  {
    Pipeline pipeline(config);
    first = pipeline.shorten(Split::Test);
    CHECK(first.generated == pipeline.instances(Split::Test).size());
    CHECK(pipeline.calls().premises_shortened == first.generated);

    SummaryCache cache(first.cache_file, first.fingerprint);
    const auto& tok = *pipeline.tokenizer();
    for (const auto& instance : pipeline.instances(Split::Test)) {
      const ShortenedPremise* record = cache.find(instance.instance_id);
      REQUIRE(record != nullptr);
      const std::size_t budget = 512 - tok.count(instance.statement) - 10;
      if (instance.instance_type == InstanceType::Single) {
        CHECK(record->primary_tokens <= budget);
      } else {
        CHECK(record->primary_tokens <= budget / 2);
        CHECK(record->secondary_tokens.value() <= budget / 2);
      }
    }
  }
  Pipeline again(config);
  const auto second = again.shorten(Split::Test);
  CHECK(second.generated == 0);
  CHECK(second.reused == first.instances);
  CHECK(again.calls().premises_shortened == 0);
  CHECK(read_json(dir / "out/manifest.json")["config_hash"] == config.hash());
}

TEST_CASE("the extractive strategy records a train-fitted TF-IDF model") {
  TempDir dir;
  Pipeline pipeline(mini_config(dir, "extractive"));
  pipeline.shorten(Split::Dev);
  CHECK(read_json(dir / "out/tfidf/model.json")["fitted_on"] == "train");
  CHECK(pipeline.tfidf().fitted_on == "train");
}

TEST_CASE("the cache directory can be moved with CTRNLI_CACHE_DIR") {
  TempDir dir;
  ::setenv("CTRNLI_CACHE_DIR", (dir / "elsewhere").c_str(), 1);
  Pipeline pipeline(mini_config(dir, "truncate"));
  const auto stats = pipeline.shorten(Split::Dev);
  ::unsetenv("CTRNLI_CACHE_DIR");
  CHECK(stats.cache_file.parent_path() == dir / "elsewhere");
  CHECK(std::filesystem::exists(stats.cache_file));
}

TEST_CASE("lexical predictions and evaluation") {
  TempDir dir;
  Pipeline truncate(mini_config(dir, "truncate"));
  Pipeline extractive(mini_config(dir, "extractive"));
  const auto a = truncate.predict(Split::Test, true);
  const auto b = extractive.predict(Split::Test, true);
  const auto records_a = read_predictions(a);
  const auto records_b = read_predictions(b);
  CHECK(records_a.size() == truncate.instances(Split::Test).size());
  CHECK(records_a.front().model_tag == "lexical-overlap@truncate");
  CHECK(records_b.front().model_tag == "lexical-overlap@extractive");
  CHECK(a != b);

  const auto outputs = truncate.evaluate(Split::Test, {a, b});
  REQUIRE(outputs.reports.size() == 2);
  REQUIRE(outputs.agreement.has_value());
  CHECK(outputs.agreement->matrix[0][1] == outputs.agreement->matrix[1][0]);
  CHECK(std::filesystem::exists(*outputs.agreement_svg));
  CHECK(outputs.breakdown_csvs.size() == 4);

  // Contrast metrics equal a direct enumeration over the split.
  oracle::ContrastSet set{truncate.instances(Split::Test), records_a};
  const auto expected = oracle::faithfulness(set).value();
  REQUIRE(expected.has_value());
  REQUIRE(outputs.reports[0].faithfulness.has_value());
  CHECK(*outputs.reports[0].faithfulness == doctest::Approx(*expected).epsilon(1e-12));
  CHECK(*outputs.reports[0].consistency ==
        doctest::Approx(*oracle::consistency(set).value()).epsilon(1e-12));

  const auto report = read_json(outputs.report_json);
  CHECK(report["models"].size() == 2);
  CHECK(report["config_hash"] == truncate.config().hash());
  CHECK(report.dump().find("recorded") == std::string::npos);

  // Extractive shortening keeps the finding sentences that truncation drops.
  CHECK(outputs.reports[1].scores.macro_f1 > outputs.reports[0].scores.macro_f1);
}

TEST_CASE("evaluation without contrast links leaves contrast metrics undefined") {
  TempDir dir;
  Pipeline pipeline(mini_config(dir, "truncate"));
  const auto file = pipeline.predict(Split::Train, true);
  const auto outputs = pipeline.evaluate(Split::Train, {file});
  REQUIRE(outputs.reports.size() == 1);
  CHECK_FALSE(outputs.reports[0].faithfulness.has_value());
  CHECK_FALSE(outputs.reports[0].consistency.has_value());
  CHECK_FALSE(outputs.agreement.has_value());
  CHECK(read_json(outputs.report_json)["models"][0]["faithfulness"] == "undefined");

  std::filesystem::copy_file(file, dir / "copy.jsonl");
  const auto twice = pipeline.evaluate(Split::Train, {file, dir / "copy.jsonl"});
  CHECK(twice.agreement->matrix[0][1] == 1.0);
}

TEST_CASE("evaluation rejects incomplete prediction files") {
  TempDir dir;
  Pipeline pipeline(mini_config(dir, "truncate"));
  const auto file = pipeline.predict(Split::Test, true);
  auto records = read_predictions(file);
  records.pop_back();
  write_predictions(dir / "short.jsonl", records);
  CHECK_THROWS_AS(pipeline.evaluate(Split::Test, {dir / "short.jsonl"}), Error);
  CHECK_THROWS_AS(pipeline.evaluate(Split::Test, {}), Error);
}

TEST_CASE("predicting with an untrained classifier names the missing checkpoint") {
  TempDir dir;
  Pipeline pipeline(mini_config(dir, "truncate"));
  try {
    pipeline.predict(Split::Test, false);
    FAIL("expected MissingCheckpoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingCheckpoint);
  }
}

TEST_CASE("strategy errors carry the instance id") {
  TempDir dir;
  std::filesystem::copy(kMini, dir / "data", std::filesystem::copy_options::recursive);
  auto test = read_json(dir / "data/test.json");
  std::string statement;
  for (int i = 0; i < 600; ++i) statement += "word ";
  const std::string id = test.begin().key();
  test.begin().value()["statement"] = statement;
  testing::write_file(dir / "data/test.json", test.dump(2));
  Pipeline pipeline(mini_config(dir, "truncate", dir / "data"));
  try {
    pipeline.shorten(Split::Test);
    FAIL("expected StatementTooLong");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StatementTooLong);
    CHECK(std::string(e.what()).find(id) != std::string::npos);
  }
}

TEST_CASE("identical runs produce identical predictions and reports") {
  TempDir dir;
  const RunConfig config = mini_config(dir, "extractive");
  std::string predictions[2];
  std::string reports[2];
  for (int run = 0; run < 2; ++run) {
    std::filesystem::remove_all(dir / "out");
    Pipeline pipeline(config);
    const auto file = pipeline.predict(Split::Test, true);
    predictions[run] = read_file(file);
    reports[run] = read_file(pipeline.evaluate(Split::Test, {file}).report_json);
  }
  CHECK(predictions[0] == predictions[1]);
  CHECK(reports[0] == reports[1]);
}
