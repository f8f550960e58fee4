#include "sras/error.hpp"

namespace sras {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::NonPositiveBox: return "NonPositiveBox";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::NonPositiveId: return "NonPositiveId";
    case ErrorCode::UnsortedInput: return "UnsortedInput";
    case ErrorCode::BadDate: return "BadDate";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveSize: return "NonPositiveSize";
    case ErrorCode::SingularInnovation: return "SingularInnovation";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::NonFiniteCost: return "NonFiniteCost";
    case ErrorCode::InvalidThresholds: return "InvalidThresholds";
    case ErrorCode::NonMonotonicFrame: return "NonMonotonicFrame";
    case ErrorCode::UnsortedRecords: return "UnsortedRecords";
    case ErrorCode::EmptyHeatMap: return "EmptyHeatMap";
    case ErrorCode::NoGroundTruth: return "NoGroundTruth";
    case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroActualInMAPE: return "ZeroActualInMAPE";
    case ErrorCode::ConstantActualInR2: return "ConstantActualInR2";
    case ErrorCode::ZeroBaseline: return "ZeroBaseline";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::size_t line) {
  std::string out(to_string(code));
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::size_t line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace sras
