#pragma once

#include <stdexcept>
#include <string>

namespace mtpoly {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exact division left a remainder. Inside the factor engine this means
/// the factorization theory was violated and is treated as an internal error.
class NonzeroRemainder : public Error {
public:
    using Error::Error;
};

/// A family index exceeded the configured order cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

class InvalidIndex : public Error {
public:
    using Error::Error;
};

/// Closed-form counts disagree with the degree identity.
class BudgetMismatch : public Error {
public:
    using Error::Error;
};

/// The root solver hit its precision escalation cap.
class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mtpoly
