#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace delaystab {

enum class ErrorCode {
  InvalidPlant,
  CommonFactor,
  ZeroOnImaginaryAxis,
  NoRealBranch,
  ExistenceFail,
  ImaginarySlope,
  MultipleRootSuspected,
  EndpointIsRoot,
  OrderViolation,
  Degenerate,
  EmptyInterval,
  ContourHitsZero,
  InvalidArgument,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the engine carries one of the codes above so the
/// interface layer can map it onto exit codes and HTTP statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace delaystab
