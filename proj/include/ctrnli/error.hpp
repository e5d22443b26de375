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

#ifndef CTRNLI_ERROR_HPP_
#define CTRNLI_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctrnli {

enum class ErrorCode {
  // corpus
  MissingSection,
  DuplicateTrialId,
  MalformedDocument,
  DanglingTrialRef,
  DanglingContrastRef,
  TypeFieldMismatch,
  ContrastLabelViolation,
  UnlabeledInstance,
  // shortening
  StatementTooLong,
  EmptyCorpus,
  CacheCorruption,
  // models
  RuntimeUnavailable,
  EmptyTrainingSet,
  MissingCheckpoint,
  // metrics
  LengthMismatch,
  EmptyInput,
  MixedModelTags,
  MissingPredictions,
  DisjointIdSets,
  // orchestration
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code so the CLI can map it
// onto an exit status and tests can assert on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ctrnli

#endif  // CTRNLI_ERROR_HPP_
