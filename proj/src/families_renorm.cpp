#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "lcurves/errors.hpp"
#include "lcurves/families.hpp"

namespace lcurves::families {

Mat3 shear_matrix(double a, double b) {
    return Mat3::from_columns({1.0 / a, 0.0, 0.0}, {b / a, 1.0, 0.0},
                              {b * b / (2.0 * a), b, a});
}

namespace {

void frenet_nu1_jet(double c, Mat3& f, Mat3& fp, Mat3& fpp) {
    double C = std::cos(kTwoPi * c), S = std::sin(kTwoPi * c);
    double r2 = kSqrt2;
    f = Mat3::from_columns({0.5 * (1 + C), 0.5 * r2 * S, 0.5 * (1 - C)},
                           {-0.5 * r2 * S, C, 0.5 * r2 * S},
                           {0.5 * (1 - C), -0.5 * r2 * S, 0.5 * (1 + C)});
    double p = kPi;
    fp = Mat3::from_columns({-p * S, r2 * p * C, p * S},
                            {-r2 * p * C, -2 * p * S, r2 * p * C},
                            {p * S, -r2 * p * C, -p * S});
    double p2 = 2 * kPi * kPi;
    fpp = Mat3::from_columns({-p2 * C, -r2 * p2 * S, p2 * C},
                             {r2 * p2 * S, -2 * p2 * C, -r2 * p2 * S},
                             {p2 * C, r2 * p2 * S, -p2 * C});
}

CurveJet renorm_jet(const Mat3& m, const CurveJet& j) {
    Vec3 al = m * j.p, alv = m * j.v, ala = m * j.a;
    double n2 = al.norm2(), n = std::sqrt(n2);
    double d1 = dot(al, alv);
    double n3 = n2 * n, n5 = n2 * n3;
    Vec3 u = al / n;
    Vec3 du = alv / n - al * (d1 / n3);
    Vec3 ddu = ala / n - (alv * (2.0 * d1) + al * (alv.norm2() + dot(al, ala))) / n3 +
               al * (3.0 * d1 * d1 / n5);
    return CurveJet{u, du, ddu};
}

Curve renorm_by(const Curve& c, const Mat3& m, std::string source) {
    CurveMeta meta = c.meta();
    if (!source.empty()) meta.source = std::move(source);
    return Curve([c, m](double t) { return renorm_jet(m, c(t)); }, meta);
}

// Cubic Hermite h(x) on [0,1] with h(0)=0, h(1)=1 and endpoint slopes a, b.
struct Hermite {
    double a = 1.0, b = 1.0;
    void eval(double x, double& h, double& dh, double& ddh) const {
        double c2 = 3.0 - 2.0 * a - b, c3 = a + b - 2.0;
        h = x * (a + x * (c2 + x * c3));
        dh = a + x * (2.0 * c2 + 3.0 * c3 * x);
        ddh = 2.0 * c2 + 6.0 * c3 * x;
    }
    bool monotone(int n = 512) const {
        for (int i = 0; i <= n; ++i) {
            double h, dh, ddh;
            eval(static_cast<double>(i) / n, h, dh, ddh);
            if (dh <= 0.0) return false;
        }
        return true;
    }
};

// Frame rotation rate of a locally convex jet: the Frenet frame solves
// F' = F L with L built from a = |v| and b = det(p,v,a)/|v|^2, spinning at
// sqrt(a^2 + b^2) radians per unit parameter. nu(1) spins at 2 pi.
double rotation_rate(const CurveJet& j) {
    double a = j.v.norm();
    double b = det3(j.p, j.v, j.a) / (a * a);
    return std::sqrt(a * a + b * b);
}

constexpr double kArcFraction = 1.0 / 16.0;  // nu(1)-arc kept exact at each end
constexpr double kHeadSpeed = 4.0 * kArcFraction;  // d(arc parameter)/dt on the head

// Insert preparation: exact nu(1) arcs at both ends, the closed insert in the
// middle carried by a slowly turning frame that absorbs the missing piece of
// the circle (backward by arc_in + arc_out, which is the identity in SO(3)
// composed with the forward arcs). C1 throughout, margin empirically intact.
Curve prepare_insert(const Curve& insert) {
    if (!insert.closed_in_L()) throw NotClosed("splice: insert must be closed in L");
    const double ea = kArcFraction, eb = kArcFraction;
    const double twist = ea + eb;

    auto mid_raw = [insert, ea, twist](double tau, bool with_second, CurveJet& out) {
        Mat3 f, fp, fpp;
        frenet_nu1_jet(ea - twist * tau, f, fp, fpp);
        CurveJet j = insert(tau);
        out.p = f * j.p;
        out.v = f * j.v - (fp * j.p) * twist;
        if (with_second)
            out.a = f * j.a - (fp * j.v) * (2.0 * twist) + (fpp * j.p) * (twist * twist);
    };

    CurveJet j0, j1;
    mid_raw(0.0, false, j0);
    mid_raw(1.0, false, j1);
    double head_end_speed = kHeadSpeed * kSqrt2 * kPi;
    Hermite remap{head_end_speed / (2.0 * j0.v.norm()), head_end_speed / (2.0 * j1.v.norm())};
    if (!remap.monotone()) throw GapTooWide("splice: insert speed profile defeats the remap");

    Curve circle = nu(1);
    CurveMeta meta;
    meta.closed_in_L = true;
    meta.source = "prepared(" + insert.meta().source + ")";
    return Curve([circle, mid_raw, remap, ea, eb](double t) {
        if (t <= 0.25) {
            double k = 4.0 * ea;
            CurveJet j = circle(k * t);
            return CurveJet{j.p, j.v * k, j.a * (k * k)};
        }
        if (t >= 0.75) {
            double k = 4.0 * eb;
            CurveJet j = circle(1.0 - eb + k * (t - 0.75));
            return CurveJet{j.p, j.v * k, j.a * (k * k)};
        }
        double x = 2.0 * (t - 0.25);
        double h, dh, ddh;
        remap.eval(x, h, dh, ddh);
        CurveJet j;
        mid_raw(h, true, j);
        double du = 2.0 * dh, ddu = 4.0 * ddh;
        return CurveJet{j.p, j.v * du, j.a * (du * du) + j.v * ddu};
    }, meta);
}

// Moebius action of the forward shear on the C0 angle.
double image_angle(double phi, double A, double B) {
    double u = std::cos(0.5 * phi), v = std::sin(0.5 * phi);
    double up = u + B * v / kSqrt2, vp = A * v;
    double out = 2.0 * std::atan2(vp, up);
    out -= kTwoPi * std::floor(out / kTwoPi);
    return out;
}

double preimage_angle(double phi_img, double A, double B) {
    double up = std::cos(0.5 * phi_img), vp = std::sin(0.5 * phi_img);
    double v = vp / A, u = up - B * v / kSqrt2;
    double out = 2.0 * std::atan2(v, u);
    out -= kTwoPi * std::floor(out / kTwoPi);
    return out;
}

struct FitData {
    double A = 0.0, B = 0.0;
    double theta_enter = 0.0, theta_exit = 0.0;
    double u0 = 0.0, u1 = 0.0;
};

FitData find_fit(const IntervalSupport& I) {
    if (!(0.0 < I.lo && I.lo < I.hi && I.hi < 1.0))
        throw BadInput("splice: interval must satisfy 0 < lo < hi < 1");
    const double target_lo = kTwoPi * I.lo, target_hi = kTwoPi * I.hi;
    const double phi_head_end = kTwoPi * kArcFraction;
    const double phi_tail_start = kTwoPi * (1.0 - kArcFraction);
    const double guard = 0.02;

    for (int ae = 1; ae <= 14; ++ae) {
        double A = std::ldexp(1.0, ae);
        for (int kb = 0; kb < 64; ++kb) {
            // One grid point per attracting-fixed-point position.
            double phi_star = kTwoPi * (kb + 0.5) / 64.0;
            double tan_half = std::tan(0.5 * phi_star);
            if (std::abs(tan_half) < 1e-9) continue;
            double B = kSqrt2 * (A - 1.0) / tan_half;

            double theta_a = image_angle(phi_head_end, A, B);
            double theta_b = image_angle(phi_tail_start, A, B);
            if (!(theta_a > target_lo + guard && theta_b < target_hi - guard &&
                  theta_a < theta_b))
                continue;

            FitData fit;
            fit.A = A;
            fit.B = B;
            fit.theta_enter = theta_a;
            fit.theta_exit = theta_b;
            double phi_u0 = preimage_angle(target_lo, A, B);
            if (!(phi_u0 > 0.0 && phi_u0 < phi_head_end)) continue;
            fit.u0 = phi_u0 / (kTwoPi * kHeadSpeed);
            double phi_u1 = preimage_angle(target_hi, A, B);
            if (!(phi_u1 > phi_tail_start && phi_u1 < kTwoPi)) continue;
            fit.u1 = 0.75 + (phi_u1 / kTwoPi - (1.0 - kArcFraction)) / kHeadSpeed;
            return fit;
        }
    }
    throw GapTooWide("splice: no shear in the search range confines the insert to the interval");
}

const FitData& cached_fit(const IntervalSupport& I) {
    static std::map<std::pair<double, double>, FitData> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(I.lo, I.hi);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, find_fit(I)).first;
    return it->second;
}

}  // namespace

Curve renorm(const Curve& c, double a, double b) {
    if (a <= 0.0) throw BadInput("renorm: a must be positive");
    if (local_convexity_margin(c, kDefaultSamples) <= 0.0)
        throw NotLocallyConvex("renorm: input margin not positive");
    Mat3 m = shear_matrix(1.0 / a, -b / a);  // R(a,b)^{-1}
    return renorm_by(c, m,
                     "renorm(" + c.meta().source + ", a=" + std::to_string(a) +
                         ", b=" + std::to_string(b) + ")");
}

SpliceFit splice_fit(const Curve& insert, const IntervalSupport& I) {
    (void)insert;
    const FitData& fit = cached_fit(I);
    return SpliceFit{fit.A, fit.B, fit.theta_enter, fit.theta_exit};
}

namespace {

// The squeezed insert is traversed proportionally to frame rotation, with a
// smooth bump taking the rate from 2 pi at the junctions (where the curve is
// on the circle with unit geodesic curvature, so the spatial speed matches
// nu(1) exactly) through whatever the interior content requires. This keeps
// the lift resolvable no matter how hard the shear compresses the insert.
struct SpliceData {
    Curve squeezed;
    double lo = 0.0, hi = 0.0, u0 = 0.0, u1 = 0.0;
    double rate_mid = 0.0;  // bump peak c
    std::vector<double> u_grid, rate, omega;  // cumulative rotation table

    double total() const { return omega.back(); }

    void build(int n) {
        u_grid.resize(static_cast<size_t>(n) + 1);
        rate.resize(static_cast<size_t>(n) + 1);
        omega.resize(static_cast<size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            double u = u0 + (u1 - u0) * i / n;
            u_grid[static_cast<size_t>(i)] = u;
            rate[static_cast<size_t>(i)] = rotation_rate(squeezed(u));
        }
        omega[0] = 0.0;
        double h = (u1 - u0) / n;
        for (int i = 1; i <= n; ++i)
            omega[static_cast<size_t>(i)] = omega[static_cast<size_t>(i - 1)] +
                                            0.5 * h * (rate[static_cast<size_t>(i - 1)] +
                                                       rate[static_cast<size_t>(i)]);
        double span = hi - lo;
        rate_mid = kTwoPi + 2.0 * (total() / span - kTwoPi);
        if (rate_mid <= 0.0) throw GapTooWide("splice: rotation budget too small for the bump");
    }

    // Rotation length consumed by time t, closed form of the bump integral.
    void ell(double t, double& l, double& w, double& dw) const {
        double span = hi - lo;
        double x = (t - lo) / span;
        double beta = std::sin(kPi * x);
        beta *= beta;
        double ibeta = 0.5 * x - std::sin(2.0 * kPi * x) / (4.0 * kPi);
        w = kTwoPi + (rate_mid - kTwoPi) * beta;
        dw = (rate_mid - kTwoPi) * kPi * std::sin(2.0 * kPi * x) / span;
        l = span * (kTwoPi * x + (rate_mid - kTwoPi) * ibeta);
    }

    double invert(double l) const {
        auto it = std::upper_bound(omega.begin(), omega.end(), l);
        size_t k = it == omega.begin() ? 0 : static_cast<size_t>(it - omega.begin() - 1);
        if (k >= omega.size() - 1) k = omega.size() - 2;
        double h = u_grid[k + 1] - u_grid[k];
        double r0 = rate[k], r1 = rate[k + 1];
        double need = l - omega[k];
        // Solve need = r0 d + (r1 - r0) d^2 / (2h) for d in [0, h].
        double d;
        double slope = (r1 - r0) / h;
        if (std::abs(slope) < 1e-12 * std::max(r0, 1.0)) {
            d = need / r0;
        } else {
            double disc = r0 * r0 + 2.0 * slope * need;
            d = (std::sqrt(std::max(disc, 0.0)) - r0) / slope;
        }
        d = std::min(std::max(d, 0.0), h);
        return u_grid[k] + d;
    }

    CurveJet eval(double t) const {
        double l, w, dw;
        ell(t, l, w, dw);
        double u = invert(std::min(std::max(l, 0.0), total()));
        CurveJet j = squeezed(u);
        double rho = rotation_rate(j);
        // d rho / du by a centered difference; third derivatives are not
        // carried by jets.
        double hu = 1e-6 * (u1 - u0);
        double um = std::max(u - hu, u0), up = std::min(u + hu, u1);
        double drho = (rotation_rate(squeezed(up)) - rotation_rate(squeezed(um))) / (up - um);
        double du = w / rho;
        double ddu = dw / rho - w * w * drho / (rho * rho * rho);
        return CurveJet{j.p, j.v * du, j.a * (du * du) + j.v * ddu};
    }
};

}  // namespace

Curve splice(const Curve& insert, const IntervalSupport& I) {
    const FitData& fit = cached_fit(I);
    Curve prepared = prepare_insert(insert);
    auto data = std::make_shared<SpliceData>();
    data->squeezed = renorm_by(prepared, shear_matrix(fit.A, fit.B), "");
    data->lo = I.lo;
    data->hi = I.hi;
    data->u0 = fit.u0;
    data->u1 = fit.u1;
    data->build(16384);

    Curve circle = nu(1);
    CurveMeta meta;
    meta.closed_in_L = true;
    meta.source = "splice(" + insert.meta().source + ", [" + std::to_string(I.lo) + "," +
                  std::to_string(I.hi) + "])";
    double lo = I.lo, hi = I.hi;
    return Curve([circle, data, lo, hi](double t) {
        if (t <= lo || t >= hi) return circle(t);
        return data->eval(t);
    }, meta);
}

Curve g_plus_2k_point(int k, double p1x, double p1y, const std::vector<double>& p2) {
    if (k < 2) throw BadInput("g_plus_2k_point: k must be >= 2");
    if (static_cast<int>(p2.size()) != 2 * (k - 1))
        throw BadInput("g_plus_2k_point: p2 must carry 2(k-1) coordinates");

    double r = std::hypot(p1x, p1y);
    if (r > 1.0 + 1e-9) throw DomainError("g_plus_2k_point: p1 outside the closed disk");
    ChartPoint q1 = disk_wrap(std::min(r, 1.0), std::atan2(p1y, p1x));
    Curve insert1 = g_plus_2(q1.s1, q1.s2);

    Curve insert2;
    if (k == 2) {
        insert2 = g_plus_2(p2[0], p2[1]);
    } else {
        std::vector<double> rest(p2.begin() + 2, p2.end());
        insert2 = g_plus_2k_point(k - 1, p2[0], p2[1], rest);
    }

    Curve f1 = splice(insert1, kInterval1);
    Curve f2 = splice(insert2, kInterval2);
    Curve circle = nu(1);
    CurveMeta meta;
    meta.closed_in_L = true;
    meta.source = "g_plus_2k k=" + std::to_string(k);
    IntervalSupport i1 = kInterval1, i2 = kInterval2;
    return Curve([f1, f2, circle, i1, i2](double t) {
        if (t > i1.lo && t < i1.hi) return f1(t);
        if (t > i2.lo && t < i2.hi) return f2(t);
        return circle(t);
    }, meta);
}

}  // namespace lcurves::families
