#pragma once

#include <stdexcept>
#include <string>

namespace eqlab {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct EmptySetError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};
struct InvalidArgumentError : Error {
    using Error::Error;
};
struct EmptyCommitteeError : Error {
    using Error::Error;
};
struct TooFewExamplesError : Error {
    using Error::Error;
};
struct EmptyScoreVectorError : Error {
    using Error::Error;
};
struct EmptyGridError : Error {
    using Error::Error;
};
struct UnsupportedPriorError : Error {
    using Error::Error;
};
struct UnsupportedProblemError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct NonNumericCovariateError : ParseError {
    using ParseError::ParseError;
};
struct MissingLabelColumnError : ParseError {
    using ParseError::ParseError;
};
struct LengthMismatchError : Error {
    using Error::Error;
};
struct ZeroVarianceError : Error {
    using Error::Error;
};
struct DegenerateWeightsError : Error {
    using Error::Error;
};
struct WrongLossKindError : Error {
    using Error::Error;
};
struct ShapeMismatchError : Error {
    using Error::Error;
};
struct NotEnoughDataError : Error {
    using Error::Error;
};
struct ClassCoverageError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct TrainingError : Error {
    using Error::Error;
};

}  // namespace eqlab
