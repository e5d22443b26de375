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

#ifndef CTRNLI_TESTS_METRICS_ORACLE_HPP_
#define CTRNLI_TESTS_METRICS_ORACLE_HPP_

// Reference implementations of the evaluation metrics written as plain
// enumerations over integer counts. They share no code with src/metrics.cpp
// and are used to cross-check it on random inputs.

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ctrnli/nli.hpp"
#include "ctrnli/types.hpp"

namespace ctrnli::oracle {

struct Scores {
  double macro_f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

inline Scores macro_scores(const std::vector<int>& golds, const std::vector<int>& preds) {
  Scores out;
  for (int c = 0; c <= 1; ++c) {
    long tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      if (preds[i] == c) ++predicted;
      if (golds[i] == c) ++actual;
      if (preds[i] == c && golds[i] == c) ++tp;
    }
    const double p = predicted ? static_cast<double>(tp) / predicted : 0.0;
    const double r = actual ? static_cast<double>(tp) / actual : 0.0;
    // 2PR/(P+R) reduces to 2tp/(predicted+actual) whenever tp > 0.
    const double f = tp ? 2.0 * tp / static_cast<double>(predicted + actual) : 0.0;
    out.precision += p / 2.0;
    out.recall += r / 2.0;
    out.macro_f1 += f / 2.0;
  }
  return out;
}

// A synthetic evaluation set: instances with contrast links and one
// prediction per instance.
struct ContrastSet {
  std::vector<NLIInstance> instances;
  std::vector<PredictionRecord> predictions;
};

inline ContrastSet random_contrast_set(std::mt19937_64& rng, std::size_t size) {
  ContrastSet set;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < size; ++i) {
    NLIInstance instance;
    instance.instance_id = "id" + std::to_string(rng() % 1000000) + "-" + std::to_string(i);
    instance.primary_trial = "T";
    instance.statement = "s";
    instance.label = coin(rng) ? Label::Entailment : Label::Contradiction;
    // Roughly two thirds of the later instances perturb an earlier one.
    if (i > 0 && rng() % 3 != 0) {
      const auto& original = set.instances[rng() % i];
      const bool altering = coin(rng);
      instance.contrast = ContrastLink{original.instance_id,
                                       altering ? Intervention::Altering : Intervention::Preserving};
      const Label flipped = *original.label == Label::Entailment ? Label::Contradiction
                                                                 : Label::Entailment;
      instance.label = altering ? flipped : *original.label;
    }
    set.instances.push_back(instance);
    const double score = static_cast<double>(rng() % 1001) / 1000.0;
    set.predictions.push_back({instance.instance_id, label_for_score(score), score, "m"});
  }
  return set;
}

struct Ratio {
  long numerator = 0;
  long denominator = 0;
  std::optional<double> value() const {
    if (denominator == 0) return std::nullopt;
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

inline Ratio faithfulness(const ContrastSet& set) {
  std::map<std::string, int> gold, pred;
  for (const auto& x : set.instances) gold[x.instance_id] = label_value(*x.label);
  for (const auto& p : set.predictions) pred[p.instance_id] = label_value(p.predicted);
  Ratio r;
  for (const auto& x : set.instances) {
    if (!x.contrast || x.contrast->intervention != Intervention::Altering) continue;
    const std::string& y = x.contrast->original_id;
    if (pred[y] != gold[y]) continue;
    ++r.denominator;
    if (pred[y] != pred[x.instance_id]) ++r.numerator;
  }
  return r;
}

inline Ratio consistency(const ContrastSet& set) {
  std::map<std::string, int> pred;
  for (const auto& p : set.predictions) pred[p.instance_id] = label_value(p.predicted);
  Ratio r;
  for (const auto& x : set.instances) {
    if (!x.contrast || x.contrast->intervention != Intervention::Preserving) continue;
    ++r.denominator;
    if (pred[x.contrast->original_id] == pred[x.instance_id]) ++r.numerator;
  }
  return r;
}

}  // namespace ctrnli::oracle

#endif  // CTRNLI_TESTS_METRICS_ORACLE_HPP_
