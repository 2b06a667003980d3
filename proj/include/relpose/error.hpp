#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relpose {

enum class Errc {
  PreconditionViolation,
  DegenerateAxis,
  ZeroTranslation,
  AllCheiralityFailed,
  RankDeficient,
  DegenerateInput,
  NoRealSolutions,
  NullVectorAmbiguous,
  ZeroScrewDirection,
  ZeroScrewDelta,
  NotEnoughPoints,
  NoModelFound,
  EmptySolutionSet,
  ParseError,
};

std::string_view to_string(Errc code);

// All recoverable failures in the library are reported through this type;
// `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

inline void require(bool condition, const char* what) {
  if (!condition) fail(Errc::PreconditionViolation, what);
}

}  // namespace relpose
