#pragma once

#include <stdexcept>
#include <string>

namespace levymmm {

// Evaluation outside the finiteness domain of the Laplace exponent.
using DomainError = std::domain_error;

// Operation requested for a model class it does not apply to
// (e.g. a spectrally one-sided formula on a two-sided model).
struct ApplicabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Root bracketing failed: psi stays negative up to the domain boundary.
struct NoRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// E X(1) >= 0: the process does not drift to -infinity.
struct NotDriftingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive horizon doubling hit its cap without an acceptable path.
struct HorizonExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientSampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace levymmm
