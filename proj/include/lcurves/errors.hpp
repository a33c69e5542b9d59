#pragma once

#include <stdexcept>
#include <string>

namespace lcurves {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateJet : Error { using Error::Error; };
struct NotARotation : Error { using Error::Error; };
struct StepTooCoarse : Error { using Error::Error; };
struct NonPositiveSpeed : Error { using Error::Error; };
struct NotClosed : Error { using Error::Error; };
struct NotImmersed : Error { using Error::Error; };
struct BreakpointMismatch : Error { using Error::Error; };
struct FlowerOnPath : Error { using Error::Error; };
struct NotLocallyConvex : Error { using Error::Error; };
struct TangentialCrossing : Error { using Error::Error; };
struct WrongCrossingCount : Error { using Error::Error; };
struct NonIntegerDegree : Error { using Error::Error; };
struct MaskBoundaryZero : Error { using Error::Error; };
struct IncompatibleEndpoint : Error { using Error::Error; };
struct GapTooWide : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct BadInput : Error { using Error::Error; };

}  // namespace lcurves
