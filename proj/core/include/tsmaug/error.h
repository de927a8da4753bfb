// core/include/tsmaug/error.h
//
// Copyright 2026  The tsmaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TSMAUG_ERROR_H_
#define TSMAUG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsmaug {

enum class ErrorCode {
  kIoFailure,
  kMalformedHeader,
  kUnsupportedFormat,
  kDuplicateUttId,
  kMalformedLine,
  kInvalidArgument,
  kInvalidLength,
  kSignalTooShort,
  kFftSizeTooSmall,
  kEmptyInput,
  kOutOfRange,
  kBadIterations,
  kLengthMismatch,
  kInvalidConfig,
  kEmptyManifest,
  kUnknownLabel,
  kInvalidRates,
  kSampleRateMismatch,
  kSilentNoise,
  kEmptyRir,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map them to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tsmaug

#endif  // TSMAUG_ERROR_H_
