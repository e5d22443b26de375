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

#include "ctrnli/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

namespace ctrnli {
namespace {

using ordered_json = nlohmann::ordered_json;

// Instance-file keys in the canonical layout and the NLI4CT release layout.
const ordered_json* find_field(const ordered_json& body,
                               std::initializer_list<const char*> names) {
  for (const char* name : names) {
    auto it = body.find(name);
    if (it != body.end()) return &*it;
  }
  return nullptr;
}

std::optional<std::string> optional_string(const ordered_json* value,
                                           const std::string& what) {
  if (value == nullptr || value->is_null()) return std::nullopt;
  if (!value->is_string()) {
    throw Error(ErrorCode::MalformedDocument, what + " must be a string or null");
  }
  return value->get<std::string>();
}

std::string required_string(const ordered_json* value, const std::string& what) {
  auto text = optional_string(value, what);
  if (!text) throw Error(ErrorCode::MalformedDocument, "missing field " + what);
  return *text;
}

ordered_json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
}

}  // namespace

std::string format_diagnostic(const Diagnostic& diagnostic) {
  std::string out = diagnostic.file;
  out += ": ";
  out += to_string(diagnostic.code);
  out += ": ";
  out += diagnostic.message;
  return out;
}

ClinicalTrialReport parse_trial(const ordered_json& document) {
  if (!document.is_object()) {
    throw Error(ErrorCode::MalformedDocument, "trial document must be a JSON object");
  }
  ClinicalTrialReport trial;
  std::array<bool, 4> seen{};
  for (const auto& [key, value] : document.items()) {
    if (key == "trial_id" || key == "Clinical Trial ID") {
      trial.trial_id = required_string(&value, key);
      continue;
    }
    auto section = parse_section(key);
    if (!section) continue;
    if (!value.is_array()) {
      throw Error(ErrorCode::MalformedDocument, "section '" + key + "' must be a list");
    }
    auto& lines = trial.section(*section);
    for (const auto& line : value) {
      if (!line.is_string()) {
        throw Error(ErrorCode::MalformedDocument,
                    "section '" + key + "' must contain only strings");
      }
      lines.push_back(line.get<std::string>());
    }
    seen[static_cast<std::size_t>(*section)] = true;
  }
  if (trial.trial_id.empty()) {
    throw Error(ErrorCode::MalformedDocument, "missing or empty trial_id");
  }
  for (SectionId id : kAllSections) {
    if (!seen[static_cast<std::size_t>(id)]) {
      throw Error(ErrorCode::MissingSection,
                  "trial " + trial.trial_id + " lacks section " + std::string(section_key(id)));
    }
  }
  return trial;
}

NLIInstance parse_instance(const std::string& instance_id, const ordered_json& body) {
  if (!body.is_object()) {
    throw Error(ErrorCode::MalformedDocument, "instance " + instance_id + " must be an object");
  }
  NLIInstance instance;
  instance.instance_id = instance_id;

  const std::string type_text = required_string(find_field(body, {"type", "Type"}), "type");
  auto type = parse_instance_type(type_text);
  if (!type) throw Error(ErrorCode::MalformedDocument, "unknown instance type '" + type_text + "'");
  instance.instance_type = *type;

  const std::string section_text =
      required_string(find_field(body, {"section", "Section_id"}), "section");
  auto section = parse_section(section_text);
  if (!section) throw Error(ErrorCode::MalformedDocument, "unknown section '" + section_text + "'");
  instance.section = *section;

  instance.primary_trial = required_string(find_field(body, {"primary", "Primary_id"}), "primary");
  instance.secondary_trial = optional_string(find_field(body, {"secondary", "Secondary_id"}),
                                             "secondary");
  instance.statement = required_string(find_field(body, {"statement", "Statement"}), "statement");

  if (auto label_text = optional_string(find_field(body, {"label", "Label"}), "label")) {
    auto label = parse_label(*label_text);
    if (!label) throw Error(ErrorCode::MalformedDocument, "unknown label '" + *label_text + "'");
    instance.label = *label;
  }

  if (const ordered_json* contrast = find_field(body, {"contrast"});
      contrast != nullptr && !contrast->is_null()) {
    if (!contrast->is_object()) {
      throw Error(ErrorCode::MalformedDocument, "contrast must be an object or null");
    }
    ContrastLink link;
    link.original_id = required_string(find_field(*contrast, {"original_id"}), "contrast.original_id");
    const std::string kind =
        required_string(find_field(*contrast, {"intervention"}), "contrast.intervention");
    auto intervention = parse_intervention(kind);
    if (!intervention) throw Error(ErrorCode::MalformedDocument, "unknown intervention '" + kind + "'");
    link.intervention = *intervention;
    instance.contrast = link;
  }

  const bool has_secondary = instance.secondary_trial.has_value();
  if ((instance.instance_type == InstanceType::Comparison) != has_secondary) {
    throw Error(ErrorCode::TypeFieldMismatch,
                "instance " + instance_id + " is " +
                    std::string(instance_type_name(instance.instance_type)) +
                    (has_secondary ? " but names a secondary trial" : " without a secondary trial"));
  }
  return instance;
}

CorpusLoad load_corpus(const std::filesystem::path& directory) {
  CorpusLoad result;
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec)) {
    result.errors.push_back({ErrorCode::Io, directory.string(), "corpus directory does not exist"});
    return result;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::unordered_map<std::string, std::string> owner;
  for (const auto& file : files) {
    try {
      ClinicalTrialReport trial = parse_trial(read_json_file(file));
      auto [it, inserted] = owner.emplace(trial.trial_id, file.string());
      if (!inserted) {
        result.errors.push_back({ErrorCode::DuplicateTrialId, file.string(),
                                 "trial id " + trial.trial_id + " already defined by " + it->second});
        continue;
      }
      std::string id = trial.trial_id;
      result.trials.emplace(std::move(id), std::move(trial));
    } catch (const Error& e) {
      result.errors.push_back({e.code(), file.string(), e.what()});
    }
  }
  return result;
}

InstanceLoad load_instances(const std::filesystem::path& file, const TrialCorpus& corpus) {
  InstanceLoad result;
  ordered_json document;
  try {
    document = read_json_file(file);
  } catch (const Error& e) {
    result.errors.push_back({e.code(), file.string(), e.what()});
    return result;
  }
  if (!document.is_object()) {
    result.errors.push_back({ErrorCode::MalformedDocument, file.string(),
                             "instance file must map instance ids to objects"});
    return result;
  }

  std::vector<NLIInstance> parsed;
  for (const auto& [id, body] : document.items()) {
    try {
      NLIInstance instance = parse_instance(id, body);
      for (const auto* trial : {&instance.primary_trial,
                                instance.secondary_trial ? &*instance.secondary_trial : nullptr}) {
        if (trial != nullptr && !corpus.contains(*trial)) {
          throw Error(ErrorCode::DanglingTrialRef,
                      "instance " + id + " references unknown trial " + *trial);
        }
      }
      parsed.push_back(std::move(instance));
    } catch (const Error& e) {
      result.errors.push_back({e.code(), file.string(), e.what()});
    }
  }

  std::unordered_map<std::string, const NLIInstance*> by_id;
  for (const auto& instance : parsed) by_id.emplace(instance.instance_id, &instance);

  for (auto& instance : parsed) {
    if (instance.contrast) {
      auto it = by_id.find(instance.contrast->original_id);
      if (it == by_id.end()) {
        result.errors.push_back({ErrorCode::DanglingContrastRef, file.string(),
                                 "instance " + instance.instance_id +
                                     " contrasts with unknown instance " +
                                     instance.contrast->original_id});
        continue;
      }
      const NLIInstance& original = *it->second;
      if (instance.label && original.label) {
        const bool differ = *instance.label != *original.label;
        const bool altering = instance.contrast->intervention == Intervention::Altering;
        if (differ != altering) {
          result.errors.push_back(
              {ErrorCode::ContrastLabelViolation, file.string(),
               "instance " + instance.instance_id + " is " +
                   std::string(intervention_name(instance.contrast->intervention)) +
                   " but its label " + (differ ? "differs from" : "equals") + " the original's"});
          continue;
        }
      }
    }
    result.instances.push_back(instance);
  }
  return result;
}

TrialCorpus load_corpus_or_throw(const std::filesystem::path& directory) {
  CorpusLoad load = load_corpus(directory);
  if (!load.errors.empty()) {
    throw Error(load.errors.front().code, format_diagnostic(load.errors.front()));
  }
  return std::move(load.trials);
}

std::vector<NLIInstance> load_instances_or_throw(const std::filesystem::path& file,
                                                 const TrialCorpus& corpus) {
  InstanceLoad load = load_instances(file, corpus);
  if (!load.errors.empty()) {
    throw Error(load.errors.front().code, format_diagnostic(load.errors.front()));
  }
  return std::move(load.instances);
}

ordered_json trial_to_json(const ClinicalTrialReport& trial) {
  ordered_json out;
  out["trial_id"] = trial.trial_id;
  for (SectionId id : kAllSections) out[std::string(section_key(id))] = trial.section(id);
  return out;
}

ordered_json instances_to_json(std::span<const NLIInstance> instances) {
  ordered_json out = ordered_json::object();
  for (const auto& instance : instances) {
    ordered_json body;
    body["type"] = instance_type_name(instance.instance_type);
    body["section"] = section_name(instance.section);
    body["primary"] = instance.primary_trial;
    body["secondary"] = instance.secondary_trial ? ordered_json(*instance.secondary_trial)
                                                 : ordered_json(nullptr);
    body["statement"] = instance.statement;
    body["label"] = instance.label ? ordered_json(label_name(*instance.label))
                                   : ordered_json(nullptr);
    if (instance.contrast) {
      body["contrast"] = {{"original_id", instance.contrast->original_id},
                          {"intervention", intervention_name(instance.contrast->intervention)}};
    } else {
      body["contrast"] = nullptr;
    }
    out[instance.instance_id] = std::move(body);
  }
  return out;
}

std::string section_text(const ClinicalTrialReport& trial, SectionId section) {
  std::string text;
  const auto& lines = trial.section(section);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) text.push_back('\n');
    text += lines[i];
  }
  return text;
}

ResolvedPremises resolve_premises(const NLIInstance& instance, const TrialCorpus& corpus) {
  auto lookup = [&](const std::string& trial_id) -> std::string {
    auto it = corpus.find(trial_id);
    if (it == corpus.end()) {
      throw Error(ErrorCode::DanglingTrialRef,
                  "instance " + instance.instance_id + " references unknown trial " + trial_id);
    }
    if (it->second.section(instance.section).empty()) {
      spdlog::warn("instance {}: trial {} has an empty {} section", instance.instance_id,
                   trial_id, section_name(instance.section));
    }
    return section_text(it->second, instance.section);
  };
  ResolvedPremises premises;
  premises.primary_text = lookup(instance.primary_trial);
  if (instance.secondary_trial) premises.secondary_text = lookup(*instance.secondary_trial);
  return premises;
}

std::vector<NLIInstance> filter_entailment(std::span<const NLIInstance> instances) {
  std::vector<NLIInstance> out;
  for (const auto& instance : instances) {
    if (!instance.label) {
      throw Error(ErrorCode::UnlabeledInstance, "instance " + instance.instance_id + " has no label");
    }
    if (*instance.label == Label::Entailment) out.push_back(instance);
  }
  return out;
}

}  // namespace ctrnli
