#pragma once

#include <stdexcept>
#include <string>

namespace omtk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter / configuration problems
struct ConfigError : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct InvalidDetuning : Error { using Error::Error; };

// Numerical failures
struct NonConvergent : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularJacobian : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct DivergenceDetected : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct UnstableFilter : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };

// Domain-specific conditions
struct AliasWarning : Error { using Error::Error; };
struct NoCancellation : Error { using Error::Error; };
struct InsufficientSlices : Error { using Error::Error; };
struct ToneNotFound : Error { using Error::Error; };
struct PeakNotFound : Error { using Error::Error; };
struct UnwrapFailure : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace omtk
