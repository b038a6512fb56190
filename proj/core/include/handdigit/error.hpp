#pragma once

#include <stdexcept>
#include <string>

namespace handdigit {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or truncated input data (image files, CSV, JSON).
class DecodeError : public Error {
public:
    explicit DecodeError(const std::string& what) : Error(what) {}
};

/// Out-of-range or inconsistent parameter values.
class ParamError : public Error {
public:
    explicit ParamError(const std::string& what) : Error(what) {}
};

/// Degenerate geometry (too few points, collinear input, empty mask).
class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& what) : Error(what) {}
};

}  // namespace handdigit
