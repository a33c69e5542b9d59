#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lcurves/geometry.hpp"

namespace lcurves {

/// Position, velocity and acceleration of a spherical curve at one parameter.
struct CurveJet {
    Vec3 p;  // on the unit sphere
    Vec3 v;  // d/dt, units 1/parameter
    Vec3 a;  // d^2/dt^2, units 1/parameter^2
};

struct CurveMeta {
    bool closed_in_L = false;  // based at e1 with identity frames at both ends
    std::string source;        // family tag + parameters, "" for ad-hoc curves
};

/// Evaluator-backed curve [0,1] -> S^2. Immutable after construction; cheap to
/// copy and safe to share between threads.
class Curve {
  public:
    using Eval = std::function<CurveJet(double)>;

    Curve() = default;
    Curve(Eval eval, CurveMeta meta) : eval_(std::move(eval)), meta_(std::move(meta)) {}

    CurveJet operator()(double t) const { return eval_(t); }
    Vec3 point(double t) const { return eval_(t).p; }
    const CurveMeta& meta() const { return meta_; }
    bool closed_in_L() const { return meta_.closed_in_L; }

  private:
    Eval eval_;
    CurveMeta meta_;
};

/// Rigid image R . c, jets rotated columnwise.
Curve rotate_curve(const Mat3& R, const Curve& c, std::string source = "");

/// c(lo + (hi-lo) t) with chain-rule jets.
Curve affine_reparam(const Curve& c, double lo, double hi, CurveMeta meta);

/// c(sigma(t)) for a smooth map given with two derivatives.
Curve reparam(const Curve& c, std::function<void(double, double&, double&, double&)> sigma,
              CurveMeta meta);

/// Curve through uniform samples on the sphere; jets from local degree-4
/// Lagrange interpolation (matches the order-4 centered differences at nodes).
/// Samples are normalized; rejects any triple whose norm is off by > 1e-3.
Curve curve_from_samples(const std::vector<Vec3>& samples, bool periodic);

/// Parse the "samples N" text format and build a curve.
Curve curve_from_stream(std::istream& in);

}  // namespace lcurves
