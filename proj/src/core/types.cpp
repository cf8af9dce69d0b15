#include "core/types.hpp"

namespace maslov {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotIsotropic: return "NotIsotropic";
    case ErrorCode::InconsistentIndex: return "InconsistentIndex";
    case ErrorCode::EmptyKernel: return "EmptyKernel";
    case ErrorCode::NonRegularCrossing: return "NonRegularCrossing";
    case ErrorCode::DegenerateEndpoint: return "DegenerateEndpoint";
    case ErrorCode::SingularP: return "SingularP";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::NoDecay: return "NoDecay";
    case ErrorCode::IntegratorFailure: return "IntegratorFailure";
    case ErrorCode::IsotropyLoss: return "IsotropyLoss";
    case ErrorCode::UnresolvedCluster: return "UnresolvedCluster";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::PlateauFailure: return "PlateauFailure";
    case ErrorCode::UnstableCount: return "UnstableCount";
    case ErrorCode::NotInBundle: return "NotInBundle";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::PhaseConditionSingular: return "PhaseConditionSingular";
    case ErrorCode::NotEquilibrium: return "NotEquilibrium";
    case ErrorCode::TangentialZero: return "TangentialZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace maslov
