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

#include "provkit/error.hpp"

namespace provkit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NonFiniteFloat: return "NonFiniteFloat";
    case ErrorCode::MalformedKey: return "MalformedKey";
    case ErrorCode::HeterogeneousList: return "HeterogeneousList";
    case ErrorCode::InvalidUtf8: return "InvalidUtf8";
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::DuplicateComponent: return "DuplicateComponent";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::ReservedNamespace: return "ReservedNamespace";
    case ErrorCode::AlgorithmFailure: return "AlgorithmFailure";
    case ErrorCode::WriteFailure: return "WriteFailure";
    case ErrorCode::UnknownTool: return "UnknownTool";
    case ErrorCode::NotCollected: return "NotCollected";
    case ErrorCode::UnrenderableValue: return "UnrenderableValue";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::DuplicateBlock: return "DuplicateBlock";
    case ErrorCode::ReservedNameMisuse: return "ReservedNameMisuse";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::UnknownBlock: return "UnknownBlock";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::MissingInfo: return "MissingInfo";
    case ErrorCode::LineageMissing: return "LineageMissing";
    case ErrorCode::LineageMismatch: return "LineageMismatch";
    case ErrorCode::ReplayMismatch: return "ReplayMismatch";
  }
  return "Unknown";
}

}  // namespace provkit
