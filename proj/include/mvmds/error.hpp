#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvmds {

enum class ErrorCode {
  NonSquare,
  AsymmetryExceedsTolerance,
  NegativeEntry,
  NonFiniteEntry,
  MaskShapeMismatch,
  InvalidMask,
  DimensionMismatch,
  InvalidWeights,
  InvalidConfig,
  GammaBelowOne,
  NegativeStress,
  SingularUpdate,
  EigenFailure,
  AllPairsMissing,
  KOutOfRange,
  SingletonClass,
  LengthMismatch,
  FileNotFound,
  ParseError,
  IoError,
  WrongDimension,
  EmptyInput,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code identifies the failure
// class, the message carries the detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mvmds
