#include "odl/error.hpp"

namespace odl {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptySet: return "EmptySet";
    case Errc::ResolutionTooLarge: return "ResolutionTooLarge";
    case Errc::DepthPrecisionExceeded: return "DepthPrecisionExceeded";
    case Errc::SizeBudgetExceeded: return "SizeBudgetExceeded";
    case Errc::RequiresExact: return "RequiresExact";
    case Errc::DepthUnreachable: return "DepthUnreachable";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::NonReturn: return "NonReturn";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NotCommuting: return "NotCommuting";
    case Errc::NotErgodic: return "NotErgodic";
    case Errc::LeafMismatch: return "LeafMismatch";
    case Errc::ZeroFrequency: return "ZeroFrequency";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::AliasingRisk: return "AliasingRisk";
    case Errc::InadmissibleSequence: return "InadmissibleSequence";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigError: return "ConfigError";
    case Errc::OracleBudgetExceeded: return "OracleBudgetExceeded";
    case Errc::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool Error::is_budget_error() const noexcept {
  switch (code_) {
    case Errc::ResolutionTooLarge:
    case Errc::SizeBudgetExceeded:
    case Errc::BudgetExceeded:
    case Errc::OracleBudgetExceeded:
    case Errc::DepthUnreachable:
      return true;
    default:
      return false;
  }
}

void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace odl
