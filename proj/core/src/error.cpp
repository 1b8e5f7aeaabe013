#include "delaystab/error.hpp"

namespace delaystab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidPlant: return "InvalidPlant";
    case ErrorCode::CommonFactor: return "CommonFactor";
    case ErrorCode::ZeroOnImaginaryAxis: return "ZeroOnImaginaryAxis";
    case ErrorCode::NoRealBranch: return "NoRealBranch";
    case ErrorCode::ExistenceFail: return "ExistenceFail";
    case ErrorCode::ImaginarySlope: return "ImaginarySlope";
    case ErrorCode::MultipleRootSuspected: return "MultipleRootSuspected";
    case ErrorCode::EndpointIsRoot: return "EndpointIsRoot";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::EmptyInterval: return "EmptyInterval";
    case ErrorCode::ContourHitsZero: return "ContourHitsZero";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace delaystab
