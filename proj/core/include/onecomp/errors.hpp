#pragma once

#include <stdexcept>
#include <string>

namespace onecomp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input failed a constructor or precondition check.
struct ValidationError : Error {
    using Error::Error;
};

/// The certified tail bound cannot reach the requested tolerance
/// within the sequence generator's index budget.
struct TruncationBudgetExceeded : Error {
    using Error::Error;
};

/// A boundary operation was queried at (or too close to) a spectrum point.
struct SpectrumHit : Error {
    using Error::Error;
};

/// The operation is not defined for this spec shape
/// (e.g. boundary derivatives of an infinite Blaschke product).
struct UnsupportedSpec : Error {
    using Error::Error;
};

/// A radial-only classifier was applied to a non-radial sequence.
struct NotRadial : Error {
    using Error::Error;
};

struct EtaOutOfRange : Error {
    using Error::Error;
};

/// |u'| vanished where the calculus guarantees it cannot; flags a bug.
struct DerivativeVanishes : Error {
    using Error::Error;
};

}  // namespace onecomp
