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

#include "ctrnli/error.hpp"

namespace ctrnli {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingSection: return "MissingSection";
    case ErrorCode::DuplicateTrialId: return "DuplicateTrialId";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::DanglingTrialRef: return "DanglingTrialRef";
    case ErrorCode::DanglingContrastRef: return "DanglingContrastRef";
    case ErrorCode::TypeFieldMismatch: return "TypeFieldMismatch";
    case ErrorCode::ContrastLabelViolation: return "ContrastLabelViolation";
    case ErrorCode::UnlabeledInstance: return "UnlabeledInstance";
    case ErrorCode::StatementTooLong: return "StatementTooLong";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::CacheCorruption: return "CacheCorruption";
    case ErrorCode::RuntimeUnavailable: return "RuntimeUnavailable";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::MissingCheckpoint: return "MissingCheckpoint";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MixedModelTags: return "MixedModelTags";
    case ErrorCode::MissingPredictions: return "MissingPredictions";
    case ErrorCode::DisjointIdSets: return "DisjointIdSets";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ctrnli
