#pragma once

#include <stdexcept>
#include <string>

namespace vnfprof {

/// Base class for all profiler errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A value fell outside its configured bounds.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A resource value does not lie on its allocation grid.
class GridError : public Error {
public:
    using Error::Error;
};

/// No configuration satisfies the requested constraints.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// The surrogate model could not be fitted to its anchors.
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// An input collection is too small for the requested operation.
class SizeError : public Error {
public:
    using Error::Error;
};

/// A config or CSV file could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A parsed config violates an invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace vnfprof
