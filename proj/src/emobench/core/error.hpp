/*
  Copyright 2026 The emobench Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef EMOBENCH_CORE_ERROR_HPP
#define EMOBENCH_CORE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace emobench {

// Every failure the library reports carries one of these codes. The category
// (usage / data / analysis) drives the C API status and the CLI exit code.
enum class Errc {
  // usage: caller supplied something malformed
  InvalidArgument,
  InvalidBand,
  InvalidSpec,
  UpsamplingNotSupported,
  IrrationalRatio,
  DimensionMismatch,
  ShapeMismatch,
  // data: inputs on disk or in memory do not satisfy a precondition
  WindowOutOfBounds,
  MissingModality,
  MissingBaseline,
  MissingMontage,
  MissingFeature,
  MissingEmotion,
  TooFewChannels,
  AllChannelsBad,
  ChecksumMismatch,
  UnsupportedVersion,
  MalformedManifest,
  UnlabeledTrial,
  Io,
  // analysis: numerical procedure could not produce a result
  DegenerateVariance,
  DegenerateGroup,
  NoPeaksFound,
  TooFewIntervals,
  InsufficientPulses,
  SegmentTooShort,
  TooFewSubjects,
  EmptyAdjacency,
  EmptyEventSet,
  InsufficientData,
  NonFiniteLoss,
};

enum class ErrorCategory { Usage, Data, Analysis };

std::string_view errc_name(Errc code) noexcept;
ErrorCategory errc_category(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return errc_category(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace emobench

#endif
