#pragma once

#include <vector>

#include "lcurves/curve.hpp"
#include "lcurves/geometry.hpp"

namespace lcurves {

/// Q from the factorization (p|v|a) = Q R, R upper triangular with positive
/// diagonal; column 1 of Q is p. Throws DegenerateJet when the columns are
/// numerically dependent (smallest singular value below 1e-10).
Mat3 frenet_frame(const CurveJet& jet);

/// Frame (p | v/|v| | p x v/|v|) needing only an immersion. Coincides with
/// frenet_frame when det(p,v,a) > 0. Throws NotImmersed when |v| < 1e-8.
Mat3 frame_immersed(const CurveJet& jet);

/// min over N+1 uniform samples of det(p, v, a). A negative value is data.
double local_convexity_margin(const Curve& c, int n_samples);

/// Uniform lift of the frame path to unit quaternions, base value 1.
struct SampledLift {
    int n = 0;                // q has n+1 entries at t_i = i/n
    std::vector<Quat> q;

    const Quat& endpoint() const { return q.back(); }
};

/// Lift at exactly N steps. Throws StepTooCoarse if consecutive quaternions
/// are >= 0.5 apart in R^4; propagates DegenerateJet.
SampledLift lift_frames(const Curve& c, int n);

/// Lift at >= n_min steps, doubling (up to 65536) until the step check
/// passes. The returned resolution is n_min times a power of two.
SampledLift lift_frames_auto(const Curve& c, int n_min = 2048);

/// Endpoint of the auto-refined lift.
Quat lift_endpoint(const Curve& c, int n_min = 2048);

/// Frames at t = 0 and 1 within 1e-6 of the identity and both endpoints
/// within 1e-8 of e1.
bool check_closed_in_L(const Curve& c);

inline constexpr int kDefaultSamples = 2048;
inline constexpr int kMaxLiftSamples = 65536;

}  // namespace lcurves
