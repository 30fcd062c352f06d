#pragma once

#include <stdexcept>
#include <string>

namespace neurocactus {

enum class Errc {
  DuplicateEdge,
  SelfLoop,
  WeightOutOfBounds,
  BadControlNode,
  BadArgument,
  BadInterval,
  DimensionMismatch,
  StepMismatch,
  ConditionViolated,
  InfeasibleSize,
  NotStabilizable,
  IllConditioned,
  NumericalFailure,
  SchemaError,
  DanglingReference,
  IoError,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace neurocactus
