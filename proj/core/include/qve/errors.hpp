#pragma once

#include <stdexcept>
#include <string>

namespace qve {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad caller input: dimension mismatches, malformed files, invalid flags.
class InputError : public Error {
public:
    using Error::Error;
};

/// A numerical routine gave up: eigensolver or SVD non-convergence,
/// singular linear systems, failed Perron normalization.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Structural preconditions violated: reducible matrix where an
/// irreducible one is required, reduction applied where it cannot be.
class StructureError : public Error {
public:
    using Error::Error;
};

/// An iteration finished outside its admissible region.
class NoConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace qve
