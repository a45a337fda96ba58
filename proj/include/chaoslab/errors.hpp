// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace chaoslab {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A multi-index tuple contains a repeated entry (coefficients vanish on diagonals).
struct RepeatedIndex : Error {
    using Error::Error;
};

// Two input tuples canonicalize to the same key.
struct DuplicateKey : Error {
    using Error::Error;
};

// Tuple length does not match the kernel level.
struct BadLevel : Error {
    using Error::Error;
};

// Normalization of an identically-zero coefficient set.
struct ZeroKernel : Error {
    using Error::Error;
};

// Contraction order outside [0, min(m, n)].
struct BadContractionOrder : Error {
    using Error::Error;
};

// Enumeration would exceed the configured size guard.
struct TooLarge : Error {
    using Error::Error;
};

struct TooFewSamples : Error {
    using Error::Error;
};

// Evaluation point does not cover the kernel support.
struct SupportMismatch : Error {
    using Error::Error;
};

// Splitting triple (z, r, eps) fails admissibility (no density, negative
// residual, or eps*m_r > 1).
struct InvalidDoeblin : Error {
    using Error::Error;
};

// Kernel file violates the JSON schema; message carries a JSON pointer.
struct SchemaError : Error {
    using Error::Error;
};

// Fourth-order smooth bound requires vanishing third moments.
struct ThirdMomentNonzero : Error {
    using Error::Error;
};

// Bound requires the unit second-moment normalization.
struct NotNormalized : Error {
    using Error::Error;
};

}  // namespace chaoslab
