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

#include "ctrnli/types.hpp"

#include <cctype>

namespace ctrnli {
namespace {

// Lowercase and drop separators so enum parsing tolerates layout variants.
std::string normalize_key(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view section_name(SectionId section) {
  switch (section) {
    case SectionId::Eligibility: return "Eligibility";
    case SectionId::Intervention: return "Intervention";
    case SectionId::Results: return "Results";
    case SectionId::AdverseEvents: return "Adverse Events";
  }
  return "";
}

std::string_view section_key(SectionId section) {
  switch (section) {
    case SectionId::Eligibility: return "eligibility";
    case SectionId::Intervention: return "intervention";
    case SectionId::Results: return "results";
    case SectionId::AdverseEvents: return "adverse_events";
  }
  return "";
}

std::optional<SectionId> parse_section(std::string_view text) {
  const std::string key = normalize_key(text);
  if (key == "eligibility") return SectionId::Eligibility;
  if (key == "intervention" || key == "interventions") return SectionId::Intervention;
  if (key == "results") return SectionId::Results;
  if (key == "adverseevents") return SectionId::AdverseEvents;
  return std::nullopt;
}

std::string_view label_name(Label label) {
  return label == Label::Entailment ? "Entailment" : "Contradiction";
}

std::optional<Label> parse_label(std::string_view text) {
  const std::string key = normalize_key(text);
  if (key == "entailment") return Label::Entailment;
  if (key == "contradiction") return Label::Contradiction;
  return std::nullopt;
}

std::string_view instance_type_name(InstanceType type) {
  return type == InstanceType::Single ? "Single" : "Comparison";
}

std::optional<InstanceType> parse_instance_type(std::string_view text) {
  const std::string key = normalize_key(text);
  if (key == "single") return InstanceType::Single;
  if (key == "comparison") return InstanceType::Comparison;
  return std::nullopt;
}

std::string_view intervention_name(Intervention intervention) {
  return intervention == Intervention::Preserving ? "Preserving" : "Altering";
}

std::optional<Intervention> parse_intervention(std::string_view text) {
  const std::string key = normalize_key(text);
  if (key == "preserving") return Intervention::Preserving;
  if (key == "altering") return Intervention::Altering;
  return std::nullopt;
}

}  // namespace ctrnli
