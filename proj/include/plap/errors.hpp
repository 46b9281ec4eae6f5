#pragma once

#include <stdexcept>
#include <string>

namespace plap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

struct InvalidBracket : Error {
    using Error::Error;
};

struct BracketFailure : Error {
    using Error::Error;
};

struct StepSizeUnderflow : Error {
    using Error::Error;
};

struct EventNotReached : Error {
    using Error::Error;
};

struct ZeroDenominator : Error {
    using Error::Error;
};

} // namespace plap
