#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qmap {

enum class ErrorCode {
  NotInvolution,
  NotPermutation,
  Disconnected,
  NotOneFace,
  BadWord,
  RootLabelNonzero,
  EdgeJumpTooLarge,
  MalformedContour,
  Unreachable,
  OutOfRange,
  GenusZero,
  IncompatibleQuadruple,
  NotBipartiteQuadrangulation,
  NonDominantScheme,
  NotIntertwined,
  InvalidOpeningSequence,
  InvalidTriples,
  TooLarge,
  GenusOutOfRange,
  InsufficientSizes,
  CovarianceNotPSD,
  BadInput,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Result of a structural check: empty when the object is valid.
using Violation = std::optional<Error>;

}  // namespace qmap
