#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace maslov {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class ErrorCode {
  DimensionMismatch,
  RankDeficient,
  NotIsotropic,
  InconsistentIndex,
  EmptyKernel,
  NonRegularCrossing,
  DegenerateEndpoint,
  SingularP,
  NotHyperbolic,
  NoDecay,
  IntegratorFailure,
  IsotropyLoss,
  UnresolvedCluster,
  HypothesisViolation,
  PlateauFailure,
  UnstableCount,
  NotInBundle,
  NewtonDivergence,
  PhaseConditionSingular,
  NotEquilibrium,
  TangentialZero,
  ParseError,
  IoError,
  InvalidArgument,
  Internal,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool cond, ErrorCode c, const std::string& msg) {
  if (!cond) fail(c, msg);
}

struct Inertia {
  int positive = 0;
  int zero = 0;
  int negative = 0;
  bool operator==(const Inertia&) const = default;
};

}  // namespace maslov
