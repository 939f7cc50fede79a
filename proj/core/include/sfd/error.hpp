#pragma once

#include <stdexcept>
#include <string>

namespace sfd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (alpha outside (0,1],
/// |x| > 1, kappa <= 2, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not reach its stated accuracy. Raised instead of
/// returning a value that may be silently wrong.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// File-system failure; the message always carries the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed user input: configuration keys, too few rows for a fit, etc.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace sfd
