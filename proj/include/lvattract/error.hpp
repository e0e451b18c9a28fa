#pragma once

#include <stdexcept>
#include <string>

namespace lv {

enum class Errc {
  InvalidArgument,
  DimensionMismatch,
  DimensionTooLarge,
  NotZMatrix,
  NotPMatrix,
  NoSupportFound,
  InvalidInitialData,
  PositivityViolation,
  NonFiniteState,
  NoCrossing,
  InvalidRegime,
  Parse,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lv
