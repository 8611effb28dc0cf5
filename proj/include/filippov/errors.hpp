#pragma once

#include <stdexcept>
#include <string>

namespace filippov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FILIPPOV_ERROR(Name)                 \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

FILIPPOV_ERROR(MaxOrderExceeded);
FILIPPOV_ERROR(NonIsolatedEquilibria);
FILIPPOV_ERROR(DegenerateSwitching);
FILIPPOV_ERROR(DegenerateA12);
FILIPPOV_ERROR(HypothesisViolation);
FILIPPOV_ERROR(NotSlidingOrEscaping);
FILIPPOV_ERROR(StiffnessFailure);
FILIPPOV_ERROR(DeadEnd);
FILIPPOV_ERROR(BudgetExceeded);
FILIPPOV_ERROR(NotChaoticConfiguration);
FILIPPOV_ERROR(ProbeBudgetExceeded);
FILIPPOV_ERROR(ParseError);
FILIPPOV_ERROR(SchemaError);
FILIPPOV_ERROR(ConfigError);
FILIPPOV_ERROR(UnknownScenario);
FILIPPOV_ERROR(IoError);

#undef FILIPPOV_ERROR

}  // namespace filippov
