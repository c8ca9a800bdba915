#pragma once

#include <stdexcept>
#include <string>

namespace ptsmc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (bad gains, malformed config file, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The derivative factor was requested at a point where its limit is unbounded.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (e.g. tabulated lookup out of range).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace ptsmc
