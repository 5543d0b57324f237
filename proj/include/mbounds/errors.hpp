#pragma once

#include <stdexcept>
#include <string>

namespace mbounds {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exponent pair violates the requested regime (lower: p >= 1, 0 < q <= p;
// upper: 0 < p <= 1, q >= p).
struct RegimeViolation : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct SizeError : Error {
    using Error::Error;
};

// Requested a weight sequence from a family that has none (tail kinds).
struct KindError : Error {
    using Error::Error;
};

struct DivergentSeries : Error {
    using Error::Error;
};

struct UnknownInequality : Error {
    using Error::Error;
};

struct ZeroVector : Error {
    using Error::Error;
};

// Malformed external input (CSV matrix files, CLI arguments).
struct InputError : Error {
    using Error::Error;
};

} // namespace mbounds
