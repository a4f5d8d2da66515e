#include "outerdim/error.hpp"

namespace outerdim {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::RangeEscape: return "RangeEscape";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::NonDyadicScale: return "NonDyadicScale";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::NotInCarrier: return "NotInCarrier";
    case ErrorCode::UnboundedPiece: return "UnboundedPiece";
    case ErrorCode::ConstantNotOne: return "ConstantNotOne";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::DegenerateLadder: return "DegenerateLadder";
    case ErrorCode::WindowMissing: return "WindowMissing";
    case ErrorCode::ExponentOrder: return "ExponentOrder";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::UncoveredPoint: return "UncoveredPoint";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_infeasible_construction(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidK:
    case ErrorCode::InvalidRatio:
    case ErrorCode::ExponentOrder:
    case ErrorCode::Infeasible:
    case ErrorCode::ConstantNotOne:
    case ErrorCode::UnboundedPiece:
    case ErrorCode::UncoveredPoint:
    case ErrorCode::NonDyadicScale:
      return true;
    default:
      return false;
  }
}

}  // namespace outerdim
