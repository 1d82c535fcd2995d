// Copyright 2026 The fdc Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fdc {

enum class ErrorCode {
  InvalidInput,
  EigenvalueHit,
  IllPosedLoop,
  DivergedLoop,
  DegenerateBin,
  InconsistentPast,
  EvaluationFailed,
  Infeasible,
  MaxIterations,
  NumericalFailure,
  DegenerateData,
  ControlFailure,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type for every failure surfaced by the library. The code is
/// stable and machine readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::EigenvalueHit: return "EigenvalueHit";
    case ErrorCode::IllPosedLoop: return "IllPosedLoop";
    case ErrorCode::DivergedLoop: return "DivergedLoop";
    case ErrorCode::DegenerateBin: return "DegenerateBin";
    case ErrorCode::InconsistentPast: return "InconsistentPast";
    case ErrorCode::EvaluationFailed: return "EvaluationFailed";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::ControlFailure: return "ControlFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace fdc
