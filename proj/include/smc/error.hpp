#pragma once

#include <stdexcept>
#include <string>

namespace smc {

// Root of every error raised by the library. The CLI maps subclasses to
// exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SMC_DECLARE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

SMC_DECLARE_ERROR(ParseError);
SMC_DECLARE_ERROR(ArityMismatch);
SMC_DECLARE_ERROR(MalformedDiagram);
SMC_DECLARE_ERROR(CapacityExceeded);
SMC_DECLARE_ERROR(StaleRedex);
SMC_DECLARE_ERROR(BudgetExhausted);
SMC_DECLARE_ERROR(NotJoinable);
SMC_DECLARE_ERROR(ShapeMismatch);
SMC_DECLARE_ERROR(NotParallel);
SMC_DECLARE_ERROR(UnknownPeak);
SMC_DECLARE_ERROR(NonLinearTerm);
SMC_DECLARE_ERROR(UnknownVariable);
SMC_DECLARE_ERROR(CompositionMismatch);
SMC_DECLARE_ERROR(DimensionMismatch);

#undef SMC_DECLARE_ERROR

}  // namespace smc
