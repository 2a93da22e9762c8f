#pragma once

#include <stdexcept>

namespace merodde {

// Exit codes shared by the CLI and the acceptance tooling.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitDegenerate = 3,
  kExitNumerical = 4,
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// configuration / input problems
struct ConfigError : Error { using Error::Error; };

// mathematical degeneracies
struct DegenerateLambda : Error { using Error::Error; };  // mu == 0
struct DegenerateShift : Error { using Error::Error; };   // step congruent to a lattice symmetry
struct PolePoint : Error { using Error::Error; };         // evaluation at a pole
struct LatticePoint : Error { using Error::Error; };

// numerical failures
struct AsymptoticDivergence : Error { using Error::Error; };
struct OutOfRegion : Error { using Error::Error; };
struct NearPole : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };
struct NewtonStall : Error { using Error::Error; };
struct NonIntegerN : Error { using Error::Error; };
struct ContourCrossesPole : Error { using Error::Error; };
struct RayHitsPole : Error { using Error::Error; };
struct NonconvergentTail : Error { using Error::Error; };
struct TailBoundExceeded : Error { using Error::Error; };
struct KernelGrowth : Error { using Error::Error; };
struct NoContraction : Error { using Error::Error; };
struct OutsideSigma : Error { using Error::Error; };

}  // namespace merodde
