#include "qmap/error.hpp"

namespace qmap {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotInvolution: return "NotInvolution";
    case ErrorCode::NotPermutation: return "NotPermutation";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NotOneFace: return "NotOneFace";
    case ErrorCode::BadWord: return "BadWord";
    case ErrorCode::RootLabelNonzero: return "RootLabelNonzero";
    case ErrorCode::EdgeJumpTooLarge: return "EdgeJumpTooLarge";
    case ErrorCode::MalformedContour: return "MalformedContour";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::GenusZero: return "GenusZero";
    case ErrorCode::IncompatibleQuadruple: return "IncompatibleQuadruple";
    case ErrorCode::NotBipartiteQuadrangulation: return "NotBipartiteQuadrangulation";
    case ErrorCode::NonDominantScheme: return "NonDominantScheme";
    case ErrorCode::NotIntertwined: return "NotIntertwined";
    case ErrorCode::InvalidOpeningSequence: return "InvalidOpeningSequence";
    case ErrorCode::InvalidTriples: return "InvalidTriples";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::GenusOutOfRange: return "GenusOutOfRange";
    case ErrorCode::InsufficientSizes: return "InsufficientSizes";
    case ErrorCode::CovarianceNotPSD: return "CovarianceNotPSD";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code) {}

}  // namespace qmap
