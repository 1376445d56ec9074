#pragma once

#include <stdexcept>
#include <string>

namespace deadcore {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the arguments of an operation does not hold.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A closed form or field was evaluated outside the region where it is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A requested cylinder, radius or stencil is not resolved by the stored data.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Time stepping failed (non-finite data, dt underflow).
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace deadcore
