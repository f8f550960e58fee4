#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sras {

enum class ErrorCode {
  // input parsing
  MalformedLine,
  NonPositiveBox,
  ScoreOutOfRange,
  NonPositiveId,
  UnsortedInput,
  BadDate,
  DuplicateKey,
  // numerics / preconditions
  InvalidArgument,
  NonPositiveSize,
  SingularInnovation,
  SingularTransform,
  NonFiniteCost,
  InvalidThresholds,
  NonMonotonicFrame,
  UnsortedRecords,
  EmptyHeatMap,
  NoGroundTruth,
  EmptyGroundTruth,
  LengthMismatch,
  ZeroActualInMAPE,
  ConstantActualInR2,
  ZeroBaseline,
  SingularSystem,
  ShapeMismatch,
  InsufficientData,
  InsufficientHistory,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `line()` is 1-based and 0 when the
// error is not tied to a position in an input stream.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace sras
