#pragma once

#include <stdexcept>
#include <string>

namespace nbw {

enum class ErrorKind {
  // edge-list parsing / graph construction
  SelfLoop,
  MultiEdge,
  Malformed,
  Empty,
  MinDegree,
  // generators
  Infeasible,
  GenerationFailure,
  // weights
  WeightMismatch,
  // spectral preconditions
  Disconnected,
  Bipartite,
  DegreeTooSmall,
  HypothesesNotMet,
  NotMeanZero,
  // green / determinants
  NotInUpperHalfPlane,
  NonConvergence,
  NotATree,
  SingularMatrix,
  Inconsistent,
  NotRegular,
  SampleAtPole,
  // cli
  BadInput,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace nbw
