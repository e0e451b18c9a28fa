#include "lvattract/error.hpp"

namespace lv {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::NotZMatrix: return "NotZMatrix";
    case Errc::NotPMatrix: return "NotPMatrix";
    case Errc::NoSupportFound: return "NoSupportFound";
    case Errc::InvalidInitialData: return "InvalidInitialData";
    case Errc::PositivityViolation: return "PositivityViolation";
    case Errc::NonFiniteState: return "NonFiniteState";
    case Errc::NoCrossing: return "NoCrossing";
    case Errc::InvalidRegime: return "InvalidRegime";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace lv
