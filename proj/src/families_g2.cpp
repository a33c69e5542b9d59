#include <cmath>
#include <memory>

#include "lcurves/errors.hpp"
#include "lcurves/families.hpp"

namespace lcurves::families {

namespace {

void alpha_jet(double s, double t, Mat3& a, Mat3& at, Mat3& att) {
    double sp = std::sin(kPi * s), cp = std::cos(kPi * s);
    double C = std::cos(kTwoPi * t), S = std::sin(kTwoPi * t);
    a = Mat3::from_columns({sp * C, sp * S, cp}, {-S, C, 0.0}, {-cp * C, -cp * S, sp});
    double w = kTwoPi;
    at = Mat3::from_columns({-w * sp * S, w * sp * C, 0.0}, {-w * C, -w * S, 0.0},
                            {w * cp * S, -w * cp * C, 0.0});
    double w2 = w * w;
    att = Mat3::from_columns({-w2 * sp * C, -w2 * sp * S, 0.0}, {w2 * S, -w2 * C, 0.0},
                             {w2 * cp * C, w2 * cp * S, 0.0});
}

CurveJet gamma_jet(double s, double t) {
    Mat3 a, at, att;
    alpha_jet(s, t, a, at, att);
    double u = 6.0 * kPi * t;
    Vec3 w{1.0, std::cos(u), std::sin(u)};
    double du = 6.0 * kPi;
    Vec3 dw{0.0, -du * std::sin(u), du * std::cos(u)};
    Vec3 ddw{0.0, -du * du * std::cos(u), -du * du * std::sin(u)};
    double r = kSqrt2 / 2.0;
    return CurveJet{(a * w) * r,
                    (at * w + a * dw) * r,
                    (att * w + (at * dw) * 2.0 + a * ddw) * r};
}

}  // namespace

Mat3 alpha_rot(double s, double t) {
    Mat3 a, at, att;
    alpha_jet(s, t, a, at, att);
    return a;
}

Curve gamma_s(double s) {
    CurveMeta meta;
    meta.source = "gamma_s s=" + std::to_string(s);
    meta.closed_in_L = false;  // closed but not based at the identity frame
    return Curve([s](double t) { return gamma_jet(s, t); }, meta);
}

Mat3 Gamma(double s, double t) { return frenet_frame(gamma_jet(s, t)); }

Curve g_plus_2(double s1, double s2) {
    Mat3 m = Gamma(s2, s1 / 3.0).transpose();
    CurveMeta meta;
    meta.closed_in_L = true;
    meta.source = "g_plus_2 s1=" + std::to_string(s1) + " s2=" + std::to_string(s2);
    double shift = s1 / 3.0;
    return Curve([m, s2, shift](double t) {
        CurveJet j = gamma_jet(s2, t + shift);
        return CurveJet{m * j.p, m * j.v, m * j.a};
    }, meta);
}

ChartPoint disk_wrap(double r, double theta) {
    double s1 = theta / kTwoPi;
    s1 -= std::floor(s1);
    return ChartPoint{s1, 1.0 - r};
}

Quat h_map(double s) { return lift_nu1(4.0 - 2.0 * s); }

Curve h0_lift(double px, double py, double s) {
    double r = std::hypot(px, py);
    if (r > 1.0 + 1e-9) throw DomainError("h0_lift: point outside the closed disk");
    if (std::abs(s) < 1e-12) {
        double theta = std::atan2(py, px);
        ChartPoint q = disk_wrap(std::min(r, 1.0), theta);
        return g_plus_2(q.s1, q.s2);
    }
    if (std::abs(r - 1.0) <= 1e-9) return nu(4.0 - 2.0 * s);
    throw DomainError("h0_lift: (p, s) lies outside X2");
}

Curve complete_with_arc(const Curve& c, double s) {
    if (s < 0.0 || s > 1.0) throw DomainError("complete_with_arc: s must lie in [0,1]");
    if (s < 1e-15) return c;
    Quat end = lift_endpoint(c);
    Quat want = h_map(s);
    if (quat_distance(end, want) > 1e-4)
        throw IncompatibleEndpoint("complete_with_arc: lift endpoint does not continue nu(4)");
    Curve tail = nu(4);
    double cut = 1.0 - s / 2.0;
    CurveMeta meta;
    meta.closed_in_L = true;
    meta.source = "complete(" + c.meta().source + ", s=" + std::to_string(s) + ")";
    return Curve([c, tail, cut](double t) {
        if (t <= cut) {
            double k = 1.0 / cut;
            CurveJet j = c(t * k);
            return CurveJet{j.p, j.v * k, j.a * (k * k)};
        }
        return tail(t);
    }, meta);
}

namespace {

// Square [0,1]^2 onto the g_plus_2 chart sphere, the whole boundary to the
// nu(2) pole. ccw flips the angular orientation so the two halves of the
// glued sphere can carry opposite degrees.
ChartPoint square_wrap(double u, double v, bool ccw) {
    double du = u - 0.5, dv = v - 0.5;
    double rho = 2.0 * std::max(std::abs(du), std::abs(dv));
    rho = std::min(rho, 1.0);
    double ang = std::atan2(dv, du);
    double s1 = (ccw ? ang : -ang) / kTwoPi;
    s1 -= std::floor(s1);
    return ChartPoint{s1, rho};
}

}  // namespace

Curve g_2(double x, double y) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
        throw DomainError("g_2: chart point outside [0,1]^2");
    if (x <= 0.5) {
        ChartPoint q = square_wrap(2.0 * x, y, false);
        return g_plus_2(q.s1, q.s2);
    }
    double r_in = std::max(2.0 * std::abs(x - 0.75), std::abs(y - 0.5));
    if (r_in <= 0.25) {
        ChartPoint q = square_wrap(4.0 * x - 2.5, 2.0 * y - 0.5, true);
        return concat(nu(2), g_plus_2(q.s1, q.s2));
    }
    double r = std::min(r_in, 0.5);
    return path_alpha(2.0 - 4.0 * r);
}

FamilyGrid family_g_plus_2(int m1, int m2) {
    FamilyGrid g;
    g.m1 = m1;
    g.m2 = m2;
    g.at = [](double s1, double s2) { return g_plus_2(s1, s2); };
    g.seam_s1 = true;
    g.poles_s2 = true;
    g.name = "g_plus_2";
    return g;
}

FamilyGrid family_g_2(int m1, int m2) {
    FamilyGrid g;
    g.m1 = m1;
    g.m2 = m2;
    g.at = [](double x, double y) { return g_2(x, y); };
    g.seam_s1 = false;
    g.poles_s2 = false;  // whole outer boundary identified to nu(2) instead
    g.name = "g_2";
    return g;
}

FamilyGrid family_disk_g_plus_2(int m_theta, int m_r) {
    FamilyGrid g;
    g.m1 = m_theta;
    g.m2 = m_r;
    // Chart (theta fraction, 1 - r): ordered so the chart orientation agrees
    // with the disk's own (x, y) orientation.
    g.at = [](double s1, double s2) {
        ChartPoint q = disk_wrap(1.0 - s2, kTwoPi * s1);
        return g_plus_2(q.s1, q.s2);
    };
    g.seam_s1 = true;
    g.poles_s2 = true;
    g.name = "g_plus_2 o disk_wrap";
    return g;
}

}  // namespace lcurves::families
