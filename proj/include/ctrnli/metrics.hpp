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

#ifndef CTRNLI_METRICS_HPP_
#define CTRNLI_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctrnli/nli.hpp"
#include "ctrnli/types.hpp"

namespace ctrnli {

struct ClassificationScores {
  double macro_f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Per-class precision/recall/F1 over {Entailment, Contradiction}, each 0 when
// its denominator is 0, then the unweighted mean over the two classes.
ClassificationScores macro_f1(std::span<const Label> golds, std::span<const Label> preds);

struct ContrastSide {
  std::string instance_id;
  Label gold = Label::Contradiction;
  Label predicted = Label::Contradiction;
  std::string model_tag;
};

struct ContrastPair {
  ContrastSide original;   // y_i
  ContrastSide perturbed;  // x_i
  Intervention intervention = Intervention::Preserving;
};

struct ContrastCounts {
  std::size_t altering = 0;
  std::size_t altering_eligible = 0;  // original predicted correctly
  std::size_t preserving = 0;
};

ContrastCounts contrast_counts(std::span<const ContrastPair> pairs);

// Mean |f(y) - f(x)| over Altering pairs whose original is predicted
// correctly; nullopt when no pair qualifies.
std::optional<double> faithfulness(std::span<const ContrastPair> pairs);

// Mean 1 - |f(y) - f(x)| over Preserving pairs, regardless of correctness;
// nullopt when there are none.
std::optional<double> consistency(std::span<const ContrastPair> pairs);

// Joins contrast-linked instances with their predictions. Instances without
// a contrast link are ignored. Both sides need gold labels.
std::vector<ContrastPair> build_contrast_pairs(std::span<const NLIInstance> instances,
                                               std::span<const PredictionRecord> predictions);

enum class GroupBy { Section, Type };

struct LengthStats {
  double premise = 0.0;
  double premise_entailment = 0.0;
  double premise_contradiction = 0.0;
};

struct BreakdownItem {
  SectionId section = SectionId::Eligibility;
  InstanceType type = InstanceType::Single;
  Label gold = Label::Contradiction;
  Label predicted = Label::Contradiction;
  std::size_t original_premise_tokens = 0;
  std::optional<std::size_t> shortened_premise_tokens;
  std::size_t statement_tokens = 0;
};

struct BreakdownRow {
  std::string slice;
  std::size_t count = 0;
  double macro_f1 = 0.0;
  // Premise lengths in the reported convention (see breakdown()).
  LengthStats premise;
  LengthStats original_premise;
  std::optional<LengthStats> shortened_premise;
  double avg_statement_tokens = 0.0;
};

// One row per non-empty slice, in enum order. `premise` uses shortened
// lengths when `report_shortened` is set and every item has one, otherwise
// the original lengths.
std::vector<BreakdownRow> breakdown(std::span<const BreakdownItem> items, GroupBy group_by,
                                    bool report_shortened);

struct AgreementMatrix {
  std::vector<std::string> model_tags;
  std::vector<std::vector<double>> matrix;
  std::size_t common_ids = 0;
};

// Entry (i, j) is the fraction of the instance ids shared by every set on
// which sets i and j predict the same label.
AgreementMatrix agreement_matrix(
    std::span<const std::pair<std::string, std::vector<PredictionRecord>>> prediction_sets);

}  // namespace ctrnli

#endif  // CTRNLI_METRICS_HPP_
