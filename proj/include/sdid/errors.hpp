// Copyright 2026 The sdid Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdid {

enum class ErrorCode {
  kParse,
  kSchema,
  kNotRegular,
  kNotSdid,
  kNotSmooth,
  kNotSmoothable,
  kMalformedSections,
  kCycleWouldForm,
  kNotRandom,
  kFrameMismatch,
  kPolicyArityMismatch,
  kTooLarge,
  kMalformedCondensation,
  kProvenanceMismatch,
  kUnsupportedQuery,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kNotRegular: return "NotRegular";
    case ErrorCode::kNotSdid: return "NotSDID";
    case ErrorCode::kNotSmooth: return "NotSmooth";
    case ErrorCode::kNotSmoothable: return "NotSmoothable";
    case ErrorCode::kMalformedSections: return "MalformedSections";
    case ErrorCode::kCycleWouldForm: return "CycleWouldForm";
    case ErrorCode::kNotRandom: return "NotRandom";
    case ErrorCode::kFrameMismatch: return "FrameMismatch";
    case ErrorCode::kPolicyArityMismatch: return "PolicyArityMismatch";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kMalformedCondensation: return "MalformedCondensation";
    case ErrorCode::kProvenanceMismatch: return "ProvenanceMismatch";
    case ErrorCode::kUnsupportedQuery: return "UnsupportedQuery";
  }
  return "Error";
}

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorCode::kParse, "line " + std::to_string(line) + ", column " +
                                     std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string node, const std::string& what)
      : Error(ErrorCode::kSchema, "node '" + node + "': " + what),
        node_(std::move(node)) {}

  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

}  // namespace sdid
