#pragma once

#include <stdexcept>
#include <string>

namespace vestokes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define VESTOKES_DEFINE_ERROR(Name)            \
    class Name : public Error {                \
    public:                                    \
        using Error::Error;                    \
    }

VESTOKES_DEFINE_ERROR(SingularTensor);
VESTOKES_DEFINE_ERROR(NotUnimodular);
VESTOKES_DEFINE_ERROR(DomainError);
VESTOKES_DEFINE_ERROR(NonDifferentiableField);
VESTOKES_DEFINE_ERROR(NonDifferentiableExpression);
VESTOKES_DEFINE_ERROR(ParseError);
VESTOKES_DEFINE_ERROR(DegenerateQuadratic);
VESTOKES_DEFINE_ERROR(NotAdmissible);
VESTOKES_DEFINE_ERROR(NotSPD);
VESTOKES_DEFINE_ERROR(InvalidDimensions);
VESTOKES_DEFINE_ERROR(NotElliptic);
VESTOKES_DEFINE_ERROR(BCViolation);
VESTOKES_DEFINE_ERROR(FactorizationFailure);
VESTOKES_DEFINE_ERROR(ResidualTooLarge);
VESTOKES_DEFINE_ERROR(MaxIterations);
VESTOKES_DEFINE_ERROR(MissingNormInput);
VESTOKES_DEFINE_ERROR(ConfigError);

#undef VESTOKES_DEFINE_ERROR

}  // namespace vestokes
