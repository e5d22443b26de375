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

#include "ctrnli/metrics.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <unordered_map>

#include "ctrnli/error.hpp"

namespace ctrnli {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_single_model(std::span<const ContrastPair> pairs) {
  if (pairs.empty()) return;
  const std::string& tag = pairs.front().original.model_tag;
  for (const auto& p : pairs) {
    if (p.original.model_tag != tag || p.perturbed.model_tag != tag) {
      throw Error(ErrorCode::MixedModelTags,
                  "contrast pairs mix predictions from '" + tag + "' and '" +
                      (p.original.model_tag != tag ? p.original.model_tag : p.perturbed.model_tag) +
                      "'");
    }
  }
}

int flip(const ContrastPair& p) {
  return std::abs(label_value(p.original.predicted) - label_value(p.perturbed.predicted));
}

}  // namespace

ClassificationScores macro_f1(std::span<const Label> golds, std::span<const Label> preds) {
  if (golds.size() != preds.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(golds.size()) + " golds vs " +
                                               std::to_string(preds.size()) + " predictions");
  }
  if (golds.empty()) throw Error(ErrorCode::EmptyInput, "macro F1 of an empty set");

  ClassificationScores out;
  for (Label cls : {Label::Entailment, Label::Contradiction}) {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      const bool gold = golds[i] == cls;
      const bool pred = preds[i] == cls;
      tp += (gold && pred) ? 1 : 0;
      fp += (!gold && pred) ? 1 : 0;
      fn += (gold && !pred) ? 1 : 0;
    }
    const double p = ratio(tp, tp + fp);
    const double r = ratio(tp, tp + fn);
    const double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    out.precision += p / 2.0;
    out.recall += r / 2.0;
    out.macro_f1 += f / 2.0;
  }
  return out;
}

ContrastCounts contrast_counts(std::span<const ContrastPair> pairs) {
  ContrastCounts counts;
  for (const auto& p : pairs) {
    if (p.intervention == Intervention::Preserving) {
      ++counts.preserving;
    } else {
      ++counts.altering;
      if (p.original.predicted == p.original.gold) ++counts.altering_eligible;
    }
  }
  return counts;
}

std::optional<double> faithfulness(std::span<const ContrastPair> pairs) {
  check_single_model(pairs);
  std::size_t eligible = 0;
  std::size_t flipped = 0;
  for (const auto& p : pairs) {
    if (p.intervention != Intervention::Altering) continue;
    if (p.original.predicted != p.original.gold) continue;
    ++eligible;
    flipped += static_cast<std::size_t>(flip(p));
  }
  if (eligible == 0) return std::nullopt;
  return ratio(flipped, eligible);
}

std::optional<double> consistency(std::span<const ContrastPair> pairs) {
  check_single_model(pairs);
  std::size_t eligible = 0;
  std::size_t kept = 0;
  for (const auto& p : pairs) {
    if (p.intervention != Intervention::Preserving) continue;
    ++eligible;
    kept += static_cast<std::size_t>(1 - flip(p));
  }
  if (eligible == 0) return std::nullopt;
  return ratio(kept, eligible);
}

std::vector<ContrastPair> build_contrast_pairs(std::span<const NLIInstance> instances,
                                               std::span<const PredictionRecord> predictions) {
  std::unordered_map<std::string, const NLIInstance*> by_id;
  for (const auto& instance : instances) by_id.emplace(instance.instance_id, &instance);
  std::unordered_map<std::string, const PredictionRecord*> predicted;
  for (const auto& record : predictions) predicted.emplace(record.instance_id, &record);

  auto side = [&](const NLIInstance& instance) {
    if (!instance.label) {
      throw Error(ErrorCode::UnlabeledInstance,
                  "contrast metrics need a gold label for " + instance.instance_id);
    }
    auto it = predicted.find(instance.instance_id);
    if (it == predicted.end()) {
      throw Error(ErrorCode::MissingPredictions, "no prediction for " + instance.instance_id);
    }
    return ContrastSide{instance.instance_id, *instance.label, it->second->predicted,
                        it->second->model_tag};
  };

  std::vector<ContrastPair> pairs;
  for (const auto& instance : instances) {
    if (!instance.contrast) continue;
    auto it = by_id.find(instance.contrast->original_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::DanglingContrastRef,
                  instance.instance_id + " contrasts with unknown " + instance.contrast->original_id);
    }
    pairs.push_back({side(*it->second), side(instance), instance.contrast->intervention});
  }
  return pairs;
}

std::vector<BreakdownRow> breakdown(std::span<const BreakdownItem> items, GroupBy group_by,
                                    bool report_shortened) {
  std::map<int, std::vector<const BreakdownItem*>> slices;
  for (const auto& item : items) {
    const int key = group_by == GroupBy::Section ? static_cast<int>(item.section)
                                                 : static_cast<int>(item.type);
    slices[key].push_back(&item);
  }

  std::vector<BreakdownRow> rows;
  for (const auto& [key, members] : slices) {
    BreakdownRow row;
    row.slice = group_by == GroupBy::Section
                    ? std::string(section_name(static_cast<SectionId>(key)))
                    : std::string(instance_type_name(static_cast<InstanceType>(key)));
    row.count = members.size();

    std::vector<Label> golds;
    std::vector<Label> preds;
    double statement_sum = 0.0;
    bool all_shortened = true;
    for (const auto* item : members) {
      golds.push_back(item->gold);
      preds.push_back(item->predicted);
      statement_sum += static_cast<double>(item->statement_tokens);
      all_shortened = all_shortened && item->shortened_premise_tokens.has_value();
    }
    row.macro_f1 = macro_f1(golds, preds).macro_f1;
    row.avg_statement_tokens = statement_sum / static_cast<double>(members.size());

    auto stats = [&](auto length_of) {
      LengthStats s;
      double sum[3] = {0, 0, 0};
      std::size_t n[3] = {0, 0, 0};
      for (const auto* item : members) {
        const double len = static_cast<double>(length_of(*item));
        const int cls = item->gold == Label::Entailment ? 1 : 2;
        sum[0] += len;
        ++n[0];
        sum[cls] += len;
        ++n[cls];
      }
      s.premise = n[0] ? sum[0] / static_cast<double>(n[0]) : 0.0;
      s.premise_entailment = n[1] ? sum[1] / static_cast<double>(n[1]) : 0.0;
      s.premise_contradiction = n[2] ? sum[2] / static_cast<double>(n[2]) : 0.0;
      return s;
    };
    row.original_premise = stats([](const BreakdownItem& i) { return i.original_premise_tokens; });
    if (all_shortened) {
      row.shortened_premise =
          stats([](const BreakdownItem& i) { return *i.shortened_premise_tokens; });
    }
    row.premise = (report_shortened && row.shortened_premise) ? *row.shortened_premise
                                                               : row.original_premise;
    rows.push_back(std::move(row));
  }
  return rows;
}

AgreementMatrix agreement_matrix(
    std::span<const std::pair<std::string, std::vector<PredictionRecord>>> prediction_sets) {
  if (prediction_sets.empty()) throw Error(ErrorCode::EmptyInput, "no prediction sets");

  std::vector<std::map<std::string, Label>> maps;
  for (const auto& [tag, records] : prediction_sets) {
    std::map<std::string, Label> m;
    for (const auto& r : records) m.emplace(r.instance_id, r.predicted);
    maps.push_back(std::move(m));
  }
  std::vector<std::string> common;
  for (const auto& [id, label] : maps.front()) {
    bool everywhere = true;
    for (std::size_t k = 1; k < maps.size() && everywhere; ++k) everywhere = maps[k].contains(id);
    if (everywhere) common.push_back(id);
  }
  if (common.empty()) {
    throw Error(ErrorCode::DisjointIdSets, "prediction sets share no instance id");
  }

  AgreementMatrix out;
  out.common_ids = common.size();
  const std::size_t n = maps.size();
  out.matrix.assign(n, std::vector<double>(n, 1.0));
  for (const auto& [tag, records] : prediction_sets) out.model_tags.push_back(tag);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t same = 0;
      for (const auto& id : common) same += maps[i].at(id) == maps[j].at(id) ? 1 : 0;
      out.matrix[i][j] = out.matrix[j][i] = ratio(same, common.size());
    }
  }
  return out;
}

}  // namespace ctrnli
