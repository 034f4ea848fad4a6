#ifndef MONOPRO_ERRORS_HPP_
#define MONOPRO_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace monopro {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define MONOPRO_DEFINE_ERROR(NAME)                         \
  struct NAME : Error {                                    \
    explicit NAME(const std::string& what = "")            \
        : Error(std::string(#NAME) +                       \
                (what.empty() ? "" : ": " + what)) {}      \
  }

MONOPRO_DEFINE_ERROR(DimensionMismatch);
MONOPRO_DEFINE_ERROR(NonHermitian);
MONOPRO_DEFINE_ERROR(NonzeroConstantTerm);
MONOPRO_DEFINE_ERROR(SingularConstantTerm);
MONOPRO_DEFINE_ERROR(SingularLinearTerm);
MONOPRO_DEFINE_ERROR(SpecMismatch);
MONOPRO_DEFINE_ERROR(ModeError);
MONOPRO_DEFINE_ERROR(DepthBudgetExceeded);
MONOPRO_DEFINE_ERROR(SizeLimit);
MONOPRO_DEFINE_ERROR(OddSize);
MONOPRO_DEFINE_ERROR(CrossingPartition);
MONOPRO_DEFINE_ERROR(OrderExceeded);
MONOPRO_DEFINE_ERROR(WrongAlgebra);
MONOPRO_DEFINE_ERROR(NonPositiveInput);
MONOPRO_DEFINE_ERROR(ConfigError);

#undef MONOPRO_DEFINE_ERROR

}  // namespace monopro

#endif  // MONOPRO_ERRORS_HPP_
