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

#ifndef HPRM_ERROR_H_
#define HPRM_ERROR_H_

#include <stdexcept>
#include <string>

namespace hprm {

enum class ErrorCode {
  kEmptyPhonemeSequence,
  kIllegalSyllable,
  kBadLexicon,
  kUnknownPhoneme,
  kEmptyBank,
  kCorruptBank,
  kVocabMismatch,
  kCorruptModel,
  kZeroVectorRow,
  kShapeMismatch,
  kNonFiniteLoss,
  kTargetUnreachable,
  kLengthMismatch,
  kInsufficientDistractors,
  kBadInput,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// All recoverable failures in the library are reported with this type. The
// code is stable and can be switched on; the message is for humans.
class HprmError : public std::runtime_error {
 public:
  HprmError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hprm

#endif  // HPRM_ERROR_H_
