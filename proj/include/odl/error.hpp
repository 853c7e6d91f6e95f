#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace odl {

enum class Errc {
  EmptySet,
  ResolutionTooLarge,
  DepthPrecisionExceeded,
  SizeBudgetExceeded,
  RequiresExact,
  DepthUnreachable,
  OutOfDomain,
  NonReturn,
  DimensionMismatch,
  BudgetExceeded,
  NotCommuting,
  NotErgodic,
  LeafMismatch,
  ZeroFrequency,
  GridTooCoarse,
  AliasingRisk,
  InadmissibleSequence,
  InvalidArgument,
  ConfigError,
  OracleBudgetExceeded,
  Unsupported,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

  /// True for the resource-limit family (exit status 3 in the CLI).
  bool is_budget_error() const noexcept;

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace odl
