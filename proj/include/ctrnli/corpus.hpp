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

#ifndef CTRNLI_CORPUS_HPP_
#define CTRNLI_CORPUS_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctrnli/error.hpp"
#include "ctrnli/types.hpp"
#include "json.hpp"

namespace ctrnli {

// One load problem, tied to the file (and, for instances, the id) at fault.
struct Diagnostic {
  ErrorCode code;
  std::string file;
  std::string message;
};

std::string format_diagnostic(const Diagnostic& diagnostic);

struct CorpusLoad {
  TrialCorpus trials;
  std::vector<Diagnostic> errors;
};

struct InstanceLoad {
  std::vector<NLIInstance> instances;
  std::vector<Diagnostic> errors;
};

// Parses every *.json file in `directory` (sorted by name). Files that fail
// are reported in `errors` and skipped; the first file to claim a trial id
// keeps it. Accepts the canonical layout and the NLI4CT release layout
// ("Clinical Trial ID", "Adverse Events", ...).
CorpusLoad load_corpus(const std::filesystem::path& directory);

// Loads an instance file and validates it against `corpus`. Invalid
// instances are dropped and reported.
InstanceLoad load_instances(const std::filesystem::path& file, const TrialCorpus& corpus);

// Throwing variants: raise the first collected diagnostic.
TrialCorpus load_corpus_or_throw(const std::filesystem::path& directory);
std::vector<NLIInstance> load_instances_or_throw(const std::filesystem::path& file,
                                                 const TrialCorpus& corpus);

ClinicalTrialReport parse_trial(const nlohmann::ordered_json& document);
NLIInstance parse_instance(const std::string& instance_id, const nlohmann::ordered_json& body);

nlohmann::ordered_json trial_to_json(const ClinicalTrialReport& trial);
nlohmann::ordered_json instances_to_json(std::span<const NLIInstance> instances);

struct ResolvedPremises {
  std::string primary_text;
  std::optional<std::string> secondary_text;

  bool operator==(const ResolvedPremises&) const = default;
};

// Joins the instance's section lines with '\n'. An empty section yields ""
// and a logged warning.
ResolvedPremises resolve_premises(const NLIInstance& instance, const TrialCorpus& corpus);

std::string section_text(const ClinicalTrialReport& trial, SectionId section);

// Entailment-labeled subset in input order; unlabeled input is an error.
std::vector<NLIInstance> filter_entailment(std::span<const NLIInstance> instances);

}  // namespace ctrnli

#endif  // CTRNLI_CORPUS_HPP_
