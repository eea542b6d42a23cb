#include "ppk/error.hpp"

namespace ppk {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonMonic: return "NonMonic";
    case Errc::NonIntegralLevel: return "NonIntegralLevel";
    case Errc::SingularCurve: return "SingularCurve";
    case Errc::BadReduction: return "BadReduction";
    case Errc::UnclassifiableParity: return "UnclassifiableParity";
    case Errc::NonIntegralModel: return "NonIntegralModel";
    case Errc::NormalizationViolated: return "NormalizationViolated";
    case Errc::AmbiguousBranch: return "AmbiguousBranch";
    case Errc::LevelNotAvailable: return "LevelNotAvailable";
    case Errc::RemoteSchemaMismatch: return "RemoteSchemaMismatch";
    case Errc::CacheCorrupt: return "CacheCorrupt";
    case Errc::ValidationFailed: return "ValidationFailed";
    case Errc::MissingEigenvalue: return "MissingEigenvalue";
    case Errc::NoDegreeOnePrime: return "NoDegreeOnePrime";
    case Errc::InsufficientEigenvalues: return "InsufficientEigenvalues";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::UnsupportedShape: return "UnsupportedShape";
    case Errc::BranchOpen: return "BranchOpen";
    case Errc::ParseError: return "ParseError";
    case Errc::NetworkError: return "NetworkError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace ppk
