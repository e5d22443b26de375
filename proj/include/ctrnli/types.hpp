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

#ifndef CTRNLI_TYPES_HPP_
#define CTRNLI_TYPES_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctrnli {

enum class SectionId { Eligibility = 0, Intervention = 1, Results = 2, AdverseEvents = 3 };
inline constexpr std::array<SectionId, 4> kAllSections = {
    SectionId::Eligibility, SectionId::Intervention, SectionId::Results,
    SectionId::AdverseEvents};

// Canonical display names ("Adverse Events") and file keys ("adverse_events").
std::string_view section_name(SectionId section);
std::string_view section_key(SectionId section);
// Case-insensitive; spaces, underscores and hyphens are ignored, so
// "Adverse Events", "adverse_events" and "ADVERSEEVENTS" all parse.
std::optional<SectionId> parse_section(std::string_view text);

enum class Label { Contradiction = 0, Entailment = 1 };
std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view text);
inline constexpr int label_value(Label label) { return label == Label::Entailment ? 1 : 0; }
inline constexpr Label label_from_value(int value) {
  return value != 0 ? Label::Entailment : Label::Contradiction;
}

enum class InstanceType { Single, Comparison };
std::string_view instance_type_name(InstanceType type);
std::optional<InstanceType> parse_instance_type(std::string_view text);

enum class Intervention { Preserving, Altering };
std::string_view intervention_name(Intervention intervention);
std::optional<Intervention> parse_intervention(std::string_view text);

struct ContrastLink {
  std::string original_id;
  Intervention intervention = Intervention::Preserving;

  bool operator==(const ContrastLink&) const = default;
};

struct ClinicalTrialReport {
  std::string trial_id;
  std::array<std::vector<std::string>, 4> sections;

  const std::vector<std::string>& section(SectionId id) const {
    return sections[static_cast<std::size_t>(id)];
  }
  std::vector<std::string>& section(SectionId id) {
    return sections[static_cast<std::size_t>(id)];
  }

  bool operator==(const ClinicalTrialReport&) const = default;
};

using TrialCorpus = std::map<std::string, ClinicalTrialReport>;

struct NLIInstance {
  std::string instance_id;
  InstanceType instance_type = InstanceType::Single;
  SectionId section = SectionId::Eligibility;
  std::string primary_trial;
  std::optional<std::string> secondary_trial;
  std::string statement;
  std::optional<Label> label;
  std::optional<ContrastLink> contrast;

  bool operator==(const NLIInstance&) const = default;
};

}  // namespace ctrnli

#endif  // CTRNLI_TYPES_HPP_
