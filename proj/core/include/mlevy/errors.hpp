#pragma once

#include <stdexcept>
#include <string>

namespace mlevy {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A coordinate left the safe region of its chart.
class ChartDomainError : public Error {
public:
    using Error::Error;
};

// No chart in the atlas covers the current point.
class ChartCoverageError : public Error {
public:
    using Error::Error;
};

// Requested transition between charts does not exist.
class NoTransitionError : public Error {
public:
    using Error::Error;
};

// Coordinates or frame determinant left the configured bounds.
class ExplosionError : public Error {
public:
    using Error::Error;
};

class SingularGroupElementError : public Error {
public:
    using Error::Error;
};

class UnsupportedMeasureError : public Error {
public:
    using Error::Error;
};

class UnknownManifoldError : public Error {
public:
    using Error::Error;
};

// Driver triplet fails the holonomy invariance check.
class InvarianceError : public Error {
public:
    using Error::Error;
};

// Jump data is inconsistent with the path it claims to describe.
class JumpMismatchError : public Error {
public:
    using Error::Error;
};

class SymmetryPreconditionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace mlevy
