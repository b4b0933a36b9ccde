#include "poisson/errors.hpp"

namespace poisson {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularB: return "SingularB";
    case ErrorCode::OddRank: return "OddRank";
    case ErrorCode::RankExceedsDimension: return "RankExceedsDimension";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FactorVanishes: return "FactorVanishes";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OutOfValidity: return "OutOfValidity";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyDomainSample: return "EmptyDomainSample";
    case ErrorCode::CertificationFailure: return "CertificationFailure";
    case ErrorCode::DomainExit: return "DomainExit";
    case ErrorCode::MaxNewtonIters: return "MaxNewtonIters";
    case ErrorCode::ParameterMismatch: return "ParameterMismatch";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace poisson
