// Copyright (c) 2026 The hprm Authors
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

#include "hprm/error.h"

namespace hprm {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyPhonemeSequence: return "EmptyPhonemeSequence";
    case ErrorCode::kIllegalSyllable: return "IllegalSyllable";
    case ErrorCode::kBadLexicon: return "BadLexicon";
    case ErrorCode::kUnknownPhoneme: return "UnknownPhoneme";
    case ErrorCode::kEmptyBank: return "EmptyBank";
    case ErrorCode::kCorruptBank: return "CorruptBank";
    case ErrorCode::kVocabMismatch: return "VocabMismatch";
    case ErrorCode::kCorruptModel: return "CorruptModel";
    case ErrorCode::kZeroVectorRow: return "ZeroVectorRow";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kTargetUnreachable: return "TargetUnreachable";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInsufficientDistractors: return "InsufficientDistractors";
    case ErrorCode::kBadInput: return "BadInput";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace hprm
