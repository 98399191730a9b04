#pragma once

#include <stdexcept>
#include <string>

namespace invevo {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument: wrong axis/order, mismatched grids, invalid enum value.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Periodic Poisson problem without a zero-mean right-hand side.
class SolvabilityError : public Error {
public:
    using Error::Error;
};

/// An explicit inverse step produced non-finite values.
class InstabilityError : public Error {
public:
    InstabilityError(const std::string& what, double norm) : Error(what), norm_(norm) {}
    double norm() const noexcept { return norm_; }

private:
    double norm_;
};

/// Solver configuration that cannot run (e.g. explicit step above the stability bound).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Forward integration produced non-finite state.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double time_reached)
        : Error(what), time_reached_(time_reached) {}
    double time_reached() const noexcept { return time_reached_; }

private:
    double time_reached_;
};

/// Augmentation pipeline could not produce the requested number of pairs.
class GenerationError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class CorruptionError : public Error {
public:
    using Error::Error;
};

class VersionError : public Error {
public:
    using Error::Error;
};

} // namespace invevo
