#include "relpose/error.hpp"

namespace relpose {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::PreconditionViolation: return "PreconditionViolation";
    case Errc::DegenerateAxis: return "DegenerateAxis";
    case Errc::ZeroTranslation: return "ZeroTranslation";
    case Errc::AllCheiralityFailed: return "AllCheiralityFailed";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NoRealSolutions: return "NoRealSolutions";
    case Errc::NullVectorAmbiguous: return "NullVectorAmbiguous";
    case Errc::ZeroScrewDirection: return "ZeroScrewDirection";
    case Errc::ZeroScrewDelta: return "ZeroScrewDelta";
    case Errc::NotEnoughPoints: return "NotEnoughPoints";
    case Errc::NoModelFound: return "NoModelFound";
    case Errc::EmptySolutionSet: return "EmptySolutionSet";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace relpose
