#pragma once

#include <stdexcept>
#include <string>

namespace partq {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid mathematical input (value outside a precondition's domain).
struct DomainError : Error {
    using Error::Error;
};

/// A queried point coincides with a partition endpoint, so its cell is
/// undefined at the requested depth.
struct EndpointHit : Error {
    using Error::Error;
};

/// A continued-fraction expansion does not carry enough partial quotients
/// for the requested depth (rational point, or truncated generation).
struct InsufficientDepth : Error {
    using Error::Error;
};

/// The rotation parameter degenerates at the requested depth (rational
/// alpha whose orbit revisits 0 within the first n steps).
struct DegenerateAlpha : Error {
    using Error::Error;
};

/// Certified evaluation could not separate or certify the result at the
/// maximum allowed precision.
struct PrecisionError : Error {
    using Error::Error;
};

/// A configurable resource cap (bit size, cell count, ...) was exceeded.
struct ResourceError : Error {
    using Error::Error;
};

/// An index search reached its cap with the predicate still satisfied.
struct CapExceeded : Error {
    using Error::Error;
};

/// Operation requires a self-refining family and the argument is not one.
struct NotSelfRefining : Error {
    using Error::Error;
};

/// Invalid user-facing configuration (CLI arguments, spec strings).
struct ConfigError : Error {
    using Error::Error;
};

/// An internal cross-check failed; indicates a bug, never silent.
struct InvariantViolation : Error {
    using Error::Error;
};

} // namespace partq
