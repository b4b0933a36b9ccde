#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace poisson {

enum class ErrorCode {
  SingularB,
  OddRank,
  RankExceedsDimension,
  DimensionMismatch,
  FactorVanishes,
  IndexOutOfRange,
  OutOfDomain,
  OutOfValidity,
  OutOfRange,
  QuadratureFailure,
  NoConvergence,
  EmptyDomainSample,
  CertificationFailure,
  DomainExit,
  MaxNewtonIters,
  ParameterMismatch,
  InvalidN,
  InvalidRank,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Base exception for the library. Every error carries a stable code so the
/// CLI can report a machine-readable failure reason.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by spec construction when a factor is zero somewhere on its
/// projected interval. `witness` is a value y with |phi(y)| at or below the
/// vanish tolerance (or an endpoint outside the factor's validity interval).
class FactorVanishes : public Error {
 public:
  FactorVanishes(int factor_index, double witness, const std::string& what)
      : Error(ErrorCode::FactorVanishes, what),
        factor_index_(factor_index),
        witness_(witness) {}

  /// 1-based factor index.
  int factor_index() const noexcept { return factor_index_; }
  double witness() const noexcept { return witness_; }

 private:
  int factor_index_;
  double witness_;
};

}  // namespace poisson
