#include "lcurves/frame.hpp"

#include <cmath>

#include "lcurves/errors.hpp"
#include "lcurves/parallel.hpp"

namespace lcurves {

Mat3 frenet_frame(const CurveJet& jet) {
    if (jet.v.norm() < 1e-12 || smallest_singular_value(jet.p, jet.v, jet.a) < 1e-10)
        throw DegenerateJet("frenet_frame: jet columns are numerically dependent");

    // Modified Gram-Schmidt is exactly the QR with positive-diagonal R here.
    Vec3 q1 = jet.p.normalized();
    Vec3 q2 = jet.v - q1 * dot(q1, jet.v);
    q2 = q2.normalized();
    Vec3 q3 = jet.a - q1 * dot(q1, jet.a) - q2 * dot(q2, jet.a);
    q3 = q3.normalized();
    return Mat3::from_columns(q1, q2, q3);
}

Mat3 frame_immersed(const CurveJet& jet) {
    double s = jet.v.norm();
    if (s < 1e-8) throw NotImmersed("frame_immersed: |v| < 1e-8");
    Vec3 t = jet.v / s;
    Vec3 tt = t - jet.p * dot(jet.p, t);
    tt = tt.normalized();
    return Mat3::from_columns(jet.p, tt, cross(jet.p, tt));
}

double local_convexity_margin(const Curve& c, int n_samples) {
    std::vector<double> mins(static_cast<size_t>(n_samples) + 1);
    parallel_for(0, n_samples + 1, [&](int i) {
        CurveJet j = c(static_cast<double>(i) / n_samples);
        mins[static_cast<size_t>(i)] = det3(j.p, j.v, j.a);
    });
    double m = mins[0];
    for (double d : mins) m = std::min(m, d);
    return m;
}

SampledLift lift_frames(const Curve& c, int n) {
    SampledLift lift;
    lift.n = n;
    lift.q.resize(static_cast<size_t>(n) + 1);

    std::vector<Quat> raw(static_cast<size_t>(n) + 1);
    parallel_for(0, n + 1, [&](int i) {
        raw[static_cast<size_t>(i)] = rot_to_quat(frenet_frame(c(static_cast<double>(i) / n)));
    });

    // The lift is defined for based curves: frame at t = 0 is the identity.
    if (quat_distance(raw[0], Quat{1, 0, 0, 0}) > 1e-6)
        throw DomainError("lift_frames: frame at t=0 is not the identity");
    lift.q[0] = Quat{1, 0, 0, 0};
    for (int i = 1; i <= n; ++i) {
        Quat cand = raw[static_cast<size_t>(i)];
        Quat prev = lift.q[static_cast<size_t>(i - 1)];
        if (quat_distance(cand, prev) > quat_distance(-cand, prev)) cand = -cand;
        if (quat_distance(cand, prev) >= 0.5)
            throw StepTooCoarse("lift_frames: consecutive quaternion distance >= 0.5 at step " +
                                std::to_string(i) + "/" + std::to_string(n));
        lift.q[static_cast<size_t>(i)] = cand;
    }
    return lift;
}

SampledLift lift_frames_auto(const Curve& c, int n_min) {
    int n = n_min;
    while (true) {
        try {
            return lift_frames(c, n);
        } catch (const StepTooCoarse&) {
            if (n * 2 > kMaxLiftSamples) throw;
            n *= 2;
        }
    }
}

Quat lift_endpoint(const Curve& c, int n_min) { return lift_frames_auto(c, n_min).endpoint(); }

bool check_closed_in_L(const Curve& c) {
    CurveJet j0 = c(0.0), j1 = c(1.0);
    if (distance(j0.p, e1) >= 1e-8 || distance(j1.p, e1) >= 1e-8) return false;
    try {
        Mat3 f0 = frenet_frame(j0), f1 = frenet_frame(j1);
        Mat3 id = Mat3::identity();
        return (f0 - id).max_abs() < 1e-6 && (f1 - id).max_abs() < 1e-6;
    } catch (const DegenerateJet&) {
        return false;
    }
}

}  // namespace lcurves
