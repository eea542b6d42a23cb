#pragma once

#include <stdexcept>
#include <string>

namespace ppk {

enum class Errc {
  InvalidArgument,
  NonMonic,
  NonIntegralLevel,
  SingularCurve,
  BadReduction,
  UnclassifiableParity,
  NonIntegralModel,
  NormalizationViolated,
  AmbiguousBranch,
  LevelNotAvailable,
  RemoteSchemaMismatch,
  CacheCorrupt,
  ValidationFailed,
  MissingEigenvalue,
  NoDegreeOnePrime,
  InsufficientEigenvalues,
  InvalidParams,
  UnsupportedShape,
  BranchOpen,
  ParseError,
  NetworkError,
};

const char* to_string(Errc code) noexcept;

/// Every failure in the library surfaces as this exception; `code()` names
/// the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ppk
