#pragma once

#include <stdexcept>
#include <string>

namespace steerqkd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed files, out-of-range parameters, illegal states.
/// The CLI maps these to exit code 2.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A computation that cannot proceed on otherwise valid input.
/// The CLI maps these to exit code 3.
class NumericalError : public Error {
  public:
    using Error::Error;
};

#define STEERQKD_DEFINE_ERROR(Name, Base)                                      \
    class Name : public Base {                                                 \
      public:                                                                  \
        explicit Name(const std::string &what) : Base(#Name ": " + what) {}    \
    }

STEERQKD_DEFINE_ERROR(InvalidState, ValidationError);
STEERQKD_DEFINE_ERROR(NotAState, ValidationError);
STEERQKD_DEFINE_ERROR(InvalidDirection, ValidationError);
STEERQKD_DEFINE_ERROR(BadWeights, ValidationError);
STEERQKD_DEFINE_ERROR(BadParam, ValidationError);
STEERQKD_DEFINE_ERROR(BadViolation, ValidationError);
STEERQKD_DEFINE_ERROR(BadQber, ValidationError);
STEERQKD_DEFINE_ERROR(BadRange, ValidationError);
STEERQKD_DEFINE_ERROR(ParseError, ValidationError);
STEERQKD_DEFINE_ERROR(DegenerateConfig, ValidationError);
STEERQKD_DEFINE_ERROR(FilterAnnihilates, NumericalError);

#undef STEERQKD_DEFINE_ERROR

} // namespace steerqkd
