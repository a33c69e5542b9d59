#include <cmath>
#include <memory>
#include <random>

#include "lcurves/errors.hpp"
#include "lcurves/families.hpp"
#include "lcurves/parallel.hpp"

namespace lcurves::families {

double distance_to_c0(const Vec3& p) {
    Vec3 w = p - kC0Center;
    Vec3 in_plane = w - kC0Axis * dot(w, kC0Axis);
    double n = in_plane.norm();
    if (n < 1e-300) {
        // On the circle's axis: every circle point is equidistant.
        double off = dot(w, kC0Axis);
        return std::sqrt(kC0Radius * kC0Radius + off * off);
    }
    Vec3 nearest = kC0Center + in_plane * (kC0Radius / n);
    return distance(p, nearest);
}

double angle_on_c0(const Vec3& p) {
    // In-plane basis: ea points from the center to e1, eb = e2.
    Vec3 w = p - kC0Center;
    const Vec3 ea{1.0 / std::sqrt(2.0), 0.0, -1.0 / std::sqrt(2.0)};
    double a = std::atan2(dot(w, e2), dot(w, ea));
    if (a < 0) a += kTwoPi;
    return a;
}

Curve nu(double c) {
    if (c <= 0.0) throw NonPositiveSpeed("nu: speed must be positive");
    CurveMeta meta;
    meta.source = "nu c=" + std::to_string(c);
    double nearest_int = std::round(c);
    meta.closed_in_L = std::abs(c - nearest_int) < 1e-12 && nearest_int > 0.5;
    return Curve([c](double t) {
        double th = kTwoPi * c * t;
        double co = std::cos(th), si = std::sin(th);
        double w = kTwoPi * c;
        return CurveJet{{0.5 * (1 + co), 0.5 * kSqrt2 * si, 0.5 * (1 - co)},
                        {-0.5 * w * si, 0.5 * kSqrt2 * w * co, 0.5 * w * si},
                        {-0.5 * w * w * co, -0.5 * kSqrt2 * w * w * si, 0.5 * w * w * co}};
    }, meta);
}

Mat3 frenet_nu1(double c) {
    double co = std::cos(kTwoPi * c), si = std::sin(kTwoPi * c);
    return Mat3::from_columns({0.5 * (1 + co), 0.5 * kSqrt2 * si, 0.5 * (1 - co)},
                              {-0.5 * kSqrt2 * si, co, 0.5 * kSqrt2 * si},
                              {0.5 * (1 - co), -0.5 * kSqrt2 * si, 0.5 * (1 + co)});
}

Quat lift_nu1(double c) {
    // Rotation by 2 pi c about the C0 axis, lifted continuously from 1.
    double h = kPi * c;
    return Quat{std::cos(h), std::sin(h) / kSqrt2, 0.0, std::sin(h) / kSqrt2};
}

Curve concat(const Curve& c1, const Curve& c2) {
    if (!c1.closed_in_L() || !c2.closed_in_L())
        throw NotClosed("concat: both factors must be closed in L");
    CurveMeta meta;
    meta.closed_in_L = true;
    meta.source = "concat(" + c1.meta().source + ", " + c2.meta().source + ")";
    return Curve([c1, c2](double t) {
        CurveJet j = (t <= 0.5) ? c1(2.0 * t) : c2(2.0 * t - 1.0);
        return CurveJet{j.p, j.v * 2.0, j.a * 4.0};
    }, meta);
}

namespace {

// Frame path of an immersed curve with wrapped (closed) or shifted (open)
// centered-difference stencils.
struct FramePath {
    Curve c;
    bool periodic;
    double h;

    Mat3 frame(double t) const {
        if (periodic) {
            t -= std::floor(t);
            return frame_immersed(c(t));
        }
        return frame_immersed(c(std::min(std::max(t, 0.0), 1.0)));
    }
    void derivatives(double t, Mat3& f, Mat3& df, Mat3& ddf) const {
        double t0 = t;
        if (!periodic) t0 = std::min(std::max(t, h), 1.0 - h);
        Mat3 fm = frame(t0 - h), f0 = frame(t0), fp = frame(t0 + h);
        f = frame(t);
        double inv = 1.0 / (2.0 * h), inv2 = 1.0 / (h * h);
        for (int k = 0; k < 3; ++k) {
            df.col[k] = (fp.col[k] - fm.col[k]) * inv;
            ddf.col[k] = (fp.col[k] - f0.col[k] * 2.0 + fm.col[k]) * inv2;
        }
    }
};

}  // namespace

Curve loop_add(const Curve& c, int n) {
    Curve loop = nu(n);
    auto path = std::make_shared<FramePath>(FramePath{c, c.closed_in_L(), 1.0 / (8.0 * 2048.0)});
    // Immersion check happens lazily inside frame_immersed; probe the ends now.
    path->frame(0.0);
    path->frame(1.0);
    CurveMeta meta;
    meta.closed_in_L = c.closed_in_L() && loop.closed_in_L();
    meta.source = "loop_add(" + c.meta().source + ", n=" + std::to_string(n) + ")";
    return Curve([path, loop](double t) {
        Mat3 f, df, ddf;
        path->derivatives(t, f, df, ddf);
        CurveJet nj = loop(t);
        return CurveJet{f * nj.p,
                        df * nj.p + f * nj.v,
                        ddf * nj.p + (df * nj.v) * 2.0 + f * nj.a};
    }, meta);
}

LoopBoundData loop_bound_data(const FamilyGrid& f, std::uint64_t seed) {
    LoopBoundData out;

    // C: bound on |F'| and |F''| over the family (Frobenius, sampled).
    const int nt = 512;
    std::vector<double> maxima(static_cast<size_t>((f.m1 + 1) * (f.m2 + 1)), 0.0);
    parallel_for(0, (f.m1 + 1) * (f.m2 + 1), [&](int idx) {
        int i = idx % (f.m1 + 1), j = idx / (f.m1 + 1);
        Curve c = f.cell(i, j);
        FramePath path{c, c.closed_in_L(), 1.0 / (8.0 * 2048.0)};
        double m = 0.0;
        for (int k = 0; k <= nt; ++k) {
            Mat3 fr, dfr, ddfr;
            path.derivatives(static_cast<double>(k) / nt, fr, dfr, ddfr);
            m = std::max({m, dfr.frobenius(), ddfr.frobenius()});
        }
        maxima[static_cast<size_t>(idx)] = m;
    });
    double c_bound = 1.0;
    for (double m : maxima) c_bound = std::max(c_bound, m);
    out.frame_bound = c_bound;

    // eps: largest dyadic level whose random perturbations of (nu1', nu1'')
    // keep the convexity determinant positive along a 1024-sample probe.
    Curve base = nu(1);
    const int n_probe = 1024, n_dirs = 1024;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double eps = 0.0;
    for (int level = 1; level <= 20; ++level) {
        double cand = std::ldexp(1.0, -level);
        bool ok = true;
        for (int d = 0; d < n_dirs && ok; ++d) {
            Vec3 dv{gauss(rng), gauss(rng), gauss(rng)};
            Vec3 da{gauss(rng), gauss(rng), gauss(rng)};
            dv = dv.normalized() * cand;
            da = da.normalized() * cand;
            for (int k = 0; k <= n_probe; ++k) {
                CurveJet j = base(static_cast<double>(k) / n_probe);
                if (det3(j.p, j.v + dv, j.a + da) <= 0.0) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            eps = cand;
            break;
        }
    }
    if (eps == 0.0) throw Error("loop_bound: no dyadic perturbation level survived");
    out.epsilon = eps;

    double raw = 20.0 * c_bound / eps;
    int bound = static_cast<int>(std::floor(raw)) + 1;
    if (bound % 2 != 0) ++bound;
    out.bound = bound;
    return out;
}

int loop_bound(const FamilyGrid& f, std::uint64_t seed) { return loop_bound_data(f, seed).bound; }

Curve homotopy_H1(const Curve& c, int n, double s) {
    if (n <= 0 || n % 2 != 0) throw BadInput("homotopy_H1: n must be a positive even integer");
    Curve loop = nu(2 * n);
    auto path = std::make_shared<FramePath>(FramePath{c, c.closed_in_L(), 1.0 / (8.0 * 2048.0)});
    path->frame(0.0);
    CurveMeta meta;
    meta.closed_in_L = c.closed_in_L();
    meta.source = "H1(" + c.meta().source + ", n=" + std::to_string(n) +
                  ", s=" + std::to_string(s) + ")";
    return Curve([path, loop, s](double t) {
        CurveJet nj = loop(t);
        if (t <= s / 2.0) return nj;
        double u = (2.0 * t - s) / (2.0 - s), du = 2.0 / (2.0 - s);
        Mat3 f, df, ddf;
        path->derivatives(u, f, df, ddf);
        // d/dt F(u(t)) = F'(u) u'; u is affine so no u'' term.
        Mat3 dft, ddft;
        for (int k = 0; k < 3; ++k) {
            dft.col[k] = df.col[k] * du;
            ddft.col[k] = ddf.col[k] * (du * du);
        }
        return CurveJet{f * nj.p,
                        dft * nj.p + f * nj.v,
                        ddft * nj.p + (dft * nj.v) * 2.0 + f * nj.a};
    }, meta);
}

Curve homotopy_H2(const Curve& c, int n, double s) {
    if (n <= 0 || n % 2 != 0) throw BadInput("homotopy_H2: n must be a positive even integer");
    Curve loop = nu(2 * n);
    auto path = std::make_shared<FramePath>(FramePath{c, c.closed_in_L(), 1.0 / (8.0 * 2048.0)});
    path->frame(0.0);
    Curve base = c;
    CurveMeta meta;
    meta.closed_in_L = c.closed_in_L();
    meta.source = "H2(" + c.meta().source + ", n=" + std::to_string(n) +
                  ", s=" + std::to_string(s) + ")";
    return Curve([path, loop, base, s](double t) {
        double w = 2.0 / (2.0 - s);
        if (t >= 1.0 - s / 2.0) {
            CurveJet j = base(2.0 * t - 1.0);
            return CurveJet{j.p, j.v * 2.0, j.a * 4.0};
        }
        CurveJet nj = loop(w * t);
        nj.v = nj.v * w;
        nj.a = nj.a * (w * w);
        if (t <= 0.5) return nj;
        double u = 2.0 * t - 1.0, du = 2.0;
        Mat3 f, df, ddf;
        path->derivatives(u, f, df, ddf);
        Mat3 dft, ddft;
        for (int k = 0; k < 3; ++k) {
            dft.col[k] = df.col[k] * du;
            ddft.col[k] = ddf.col[k] * (du * du);
        }
        return CurveJet{f * nj.p,
                        dft * nj.p + f * nj.v,
                        ddft * nj.p + (dft * nj.v) * 2.0 + f * nj.a};
    }, meta);
}

FamilyGrid family_constant(const Curve& c, int m1, int m2) {
    FamilyGrid g;
    g.m1 = m1;
    g.m2 = m2;
    g.at = [c](double, double) { return c; };
    g.seam_s1 = true;
    g.poles_s2 = true;
    g.name = "constant(" + c.meta().source + ")";
    return g;
}

FamilyGrid family_nu2_concat(const FamilyGrid& f) {
    FamilyGrid g = f;
    Curve two = nu(2);
    auto inner = f.at;
    g.at = [two, inner](double s1, double s2) { return concat(two, inner(s1, s2)); };
    g.name = "nu2*" + f.name;
    return g;
}

double family_identification_error(const FamilyGrid& f, int n_samples) {
    double err = 0.0;
    auto gap = [&](const Curve& a, const Curve& b) {
        double m = 0.0;
        for (int k = 0; k <= n_samples; ++k) {
            double t = static_cast<double>(k) / n_samples;
            m = std::max(m, distance(a.point(t), b.point(t)));
        }
        return m;
    };
    if (f.seam_s1)
        for (int j = 0; j <= f.m2; ++j) {
            double s2 = static_cast<double>(j) / f.m2;
            err = std::max(err, gap(f.at(0.0, s2), f.at(1.0, s2)));
        }
    if (f.poles_s2)
        for (int i = 0; i < f.m1; ++i) {
            double a = static_cast<double>(i) / f.m1, b = static_cast<double>(i + 1) / f.m1;
            err = std::max(err, gap(f.at(a, 0.0), f.at(b, 0.0)));
            err = std::max(err, gap(f.at(a, 1.0), f.at(b, 1.0)));
        }
    return err;
}

}  // namespace lcurves::families
