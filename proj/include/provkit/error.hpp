// Copyright 2026 The provkit Authors
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
#include <string_view>

namespace provkit {

enum class ErrorCode {
  // options
  SyntaxError,
  NonFiniteFloat,
  MalformedKey,
  HeterogeneousList,
  InvalidUtf8,
  // core / services
  UnknownComponent,
  DuplicateComponent,
  UnknownProperty,
  KindMismatch,
  InvalidValue,
  ReservedNamespace,
  AlgorithmFailure,
  WriteFailure,
  UnknownTool,
  // provenance
  NotCollected,
  UnrenderableValue,
  // container
  IoFailure,
  DuplicateBlock,
  ReservedNameMisuse,
  BadMagic,
  UnsupportedVersion,
  ChecksumMismatch,
  UnknownBlock,
  CorruptFile,
  MissingInfo,
  // replay
  LineageMissing,
  LineageMismatch,
  ReplayMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string const& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column,
             std::string const& message)
      : Error(code, "line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace provkit
