#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbt {

enum class ErrorCode {
  InvalidPolygon,
  InvalidConfig,
  InvalidSegment,
  ParseError,
  DuplicateFrame,
  TooFewPoints,
  AllCollinear,
  TooFewSegments,
  TooFewDetectedEdges,
  ZeroArea,
  EmptyMask,
  EmptyList,
  PolygonEscapesFrame,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidSegment: return "InvalidSegment";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateFrame: return "DuplicateFrame";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::AllCollinear: return "AllCollinear";
    case ErrorCode::TooFewSegments: return "TooFewSegments";
    case ErrorCode::TooFewDetectedEdges: return "TooFewDetectedEdges";
    case ErrorCode::ZeroArea: return "ZeroArea";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::PolygonEscapesFrame: return "PolygonEscapesFrame";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

// All library failures surface as this exception; code() identifies the
// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cbt
