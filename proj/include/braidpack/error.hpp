// Copyright 2026 The braidpack Authors
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

namespace braidpack {

enum class ErrorCode {
  InvalidInstance,
  CyclicOrder,
  IncompleteWireOrder,
  UnknownGateId,
  InvalidPermutation,
  EmptyPacking,
  CapExceeded,
  InvalidN,
  InvalidConfig,
  SyntaxError,
  UnknownVariable,
  ArityError,
  InvalidDrawing,
  RoutingFailure,
  IncompleteAssignment,
  NonCanonicalLevel,
  InvalidPacking,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::CyclicOrder: return "CyclicOrder";
    case ErrorCode::IncompleteWireOrder: return "IncompleteWireOrder";
    case ErrorCode::UnknownGateId: return "UnknownGateId";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::EmptyPacking: return "EmptyPacking";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::InvalidDrawing: return "InvalidDrawing";
    case ErrorCode::RoutingFailure: return "RoutingFailure";
    case ErrorCode::IncompleteAssignment: return "IncompleteAssignment";
    case ErrorCode::NonCanonicalLevel: return "NonCanonicalLevel";
    case ErrorCode::InvalidPacking: return "InvalidPacking";
  }
  return "Unknown";
}

/// All library failures are reported through this type; `code()` identifies
/// the failure class so callers (and the CLI) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace braidpack
