#include "lcurves/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "lcurves/errors.hpp"
#include "lcurves/parallel.hpp"

namespace lcurves::invariants {

std::string to_string(ComponentClass c) {
    switch (c) {
        case ComponentClass::MinusConvex: return "MinusConvex";
        case ComponentClass::Plus: return "Plus";
        case ComponentClass::MinusNonConvex: return "MinusNonConvex";
    }
    return "?";
}

ComponentClass classify(const Curve& c) {
    if (!check_closed_in_L(c)) throw NotClosed("classify: curve is not closed in L");
    if (local_convexity_margin(c, kDefaultSamples) <= 1e-9)
        throw NotLocallyConvex("classify: margin at or below 1e-9");
    Quat end = lift_endpoint(c);
    Quat one{1, 0, 0, 0};
    double d_plus = quat_distance(end, one), d_minus = quat_distance(end, -one);
    if (std::min(d_plus, d_minus) > 1e-5)
        throw NotClosed("classify: lift endpoint is not near +-1");
    if (d_plus < d_minus) return ComponentClass::Plus;
    return is_convex(c) ? ComponentClass::MinusConvex : ComponentClass::MinusNonConvex;
}

bool is_convex(const Curve& c, int n_coarse, int n_fine) {
    // Cache points of the fine probe once.
    std::vector<Vec3> pts(static_cast<size_t>(n_fine) + 1);
    parallel_for(0, n_fine + 1, [&](int i) {
        pts[static_cast<size_t>(i)] = c.point(static_cast<double>(i) / n_fine);
    });
    std::vector<char> ok(static_cast<size_t>(n_coarse), 1);
    parallel_for(0, n_coarse, [&](int k) {
        double t0 = static_cast<double>(k) / n_coarse;
        Vec3 n = frenet_frame(c(t0)).col[2];
        for (int i = 0; i <= n_fine; ++i) {
            double eta = dot(pts[static_cast<size_t>(i)], n);
            if (eta <= -1e-7) {
                ok[static_cast<size_t>(k)] = 0;
                return;
            }
            if (eta <= 1e-7) {
                double t = static_cast<double>(i) / n_fine;
                double d = std::abs(t - t0);
                d = std::min(d, 1.0 - d);
                if (d >= 0.01) {
                    ok[static_cast<size_t>(k)] = 0;
                    return;
                }
            }
        }
    });
    return std::all_of(ok.begin(), ok.end(), [](char v) { return v != 0; });
}

namespace {

double seg_seg_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1, const Vec3& q2) {
    Vec3 d1 = p2 - p1, d2 = q2 - q1, r = p1 - q1;
    double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    double s, t;
    constexpr double kTiny = 1e-30;
    if (a <= kTiny && e <= kTiny) return r.norm();
    if (a <= kTiny) {
        s = 0.0;
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        double cc = dot(d1, r);
        if (e <= kTiny) {
            t = 0.0;
            s = std::clamp(-cc / a, 0.0, 1.0);
        } else {
            double b = dot(d1, d2), denom = a * e - b * b;
            s = denom > kTiny ? std::clamp((b * f - cc * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-cc / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - cc) / a, 0.0, 1.0);
            }
        }
    }
    return (p1 + d1 * s - q1 - d2 * t).norm();
}

// Segment pairs far apart in parameter that come within tol of intersecting.
// exclude_near_e1 skips pairs whose segments both sit inside the e1 ball.
bool polyline_has_crossing(const std::vector<Vec3>& pts, bool wrap, double min_sep, double tol,
                           bool exclude_near_e1, double e1_ball) {
    int n = static_cast<int>(pts.size()) - 1;  // segments 0..n-1
    double h = 1.0 / n;
    std::vector<char> hit(static_cast<size_t>(n), 0);
    parallel_for(0, n, [&](int i) {
        for (int j = i + 1; j < n; ++j) {
            double sep = (j - i) * h;
            if (wrap) sep = std::min(sep, 1.0 - sep);
            if (sep <= min_sep) continue;
            if (exclude_near_e1) {
                bool a_near = distance(pts[static_cast<size_t>(i)], e1) < e1_ball &&
                              distance(pts[static_cast<size_t>(i + 1)], e1) < e1_ball;
                bool b_near = distance(pts[static_cast<size_t>(j)], e1) < e1_ball &&
                              distance(pts[static_cast<size_t>(j + 1)], e1) < e1_ball;
                if (a_near || b_near) continue;
            }
            double d = seg_seg_distance(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(i + 1)],
                                        pts[static_cast<size_t>(j)], pts[static_cast<size_t>(j + 1)]);
            if (d < tol) {
                hit[static_cast<size_t>(i)] = 1;
                return;
            }
        }
    });
    return std::any_of(hit.begin(), hit.end(), [](char v) { return v != 0; });
}

}  // namespace

bool is_simple(const Curve& c, int n_samples) {
    if (!check_closed_in_L(c)) throw NotClosed("is_simple: curve is not closed in L");
    std::vector<Vec3> pts(static_cast<size_t>(n_samples) + 1);
    parallel_for(0, n_samples + 1, [&](int i) {
        pts[static_cast<size_t>(i)] = c.point(static_cast<double>(i) / n_samples);
    });
    return !polyline_has_crossing(pts, true, 0.01, 1e-5, false, 0.0);
}

CrossingTimes flower_times(const Curve& c, int n_scan) {
    auto z_of = [&](double t) { return c.point(t).z; };

    CrossingTimes out;
    std::vector<double> z(static_cast<size_t>(n_scan) + 1);
    parallel_for(0, n_scan + 1, [&](int i) {
        z[static_cast<size_t>(i)] = z_of(static_cast<double>(i) / n_scan);
    });

    auto bisect = [&](double lo, double hi) {
        double zlo = z_of(lo);
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            double zm = z_of(mid);
            if ((zm <= 0) == (zlo <= 0)) {
                lo = mid;
                zlo = zm;
            } else {
                hi = mid;
            }
            if (hi - lo < 1e-13) break;
        }
        return 0.5 * (lo + hi);
    };

    double h = 1.0 / n_scan;
    for (int i = 1; i < n_scan; ++i) {
        double zi = z[static_cast<size_t>(i)], zn = z[static_cast<size_t>(i + 1)];
        double ti = i * h;
        if (zi == 0.0 || (zi < 0) != (zn < 0)) {
            double t_hat = (zi == 0.0) ? ti : bisect(ti, ti + h);
            if (t_hat <= 1e-9 || t_hat >= 1.0 - 1e-9) continue;
            CurveJet j = c(t_hat);
            if (distance(j.p, e1) >= 0.1) continue;
            if (std::abs(j.v.z) < 1e-6) {
                if (distance(j.p, e1) < 1e-6) {
                    out.times.push_back(t_hat);
                    out.at_e1.push_back(true);
                    continue;
                }
                throw TangentialCrossing("flower_times: tangential plane crossing away from e1");
            }
            out.times.push_back(t_hat);
            out.at_e1.push_back(false);
        } else if (i >= 2) {
            // Tangential touch: a local |z| minimum hugging zero without a
            // sign change counts only when it happens at e1 itself.
            double zp = z[static_cast<size_t>(i - 1)];
            bool positive_dip = zp > zi && zn > zi && zi > 0.0 && zi < 1e-4;
            bool negative_dip = zp < zi && zn < zi && zi < 0.0 && zi > -1e-4;
            if (!positive_dip && !negative_dip) continue;
            double lo = ti - h, hi = ti + h;
            for (int it = 0; it < 100; ++it) {
                double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                double f1 = std::abs(z_of(m1)), f2 = std::abs(z_of(m2));
                if (f1 < f2) hi = m2;
                else lo = m1;
                if (hi - lo < 1e-13) break;
            }
            double t_hat = 0.5 * (lo + hi);
            if (t_hat <= 1e-9 || t_hat >= 1.0 - 1e-9) continue;
            Vec3 p = c.point(t_hat);
            if (std::abs(p.z) < 1e-9 && distance(p, e1) < 1e-6) {
                out.times.push_back(t_hat);
                out.at_e1.push_back(true);
            }
        }
    }
    return out;
}

double PsiResult::norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

PsiResult psi(const Curve& c, int k, int n_scan) {
    CrossingTimes ct = flower_times(c, n_scan);
    PsiResult out;
    std::vector<double> z_rates;
    for (size_t i = 0; i < ct.times.size(); ++i) {
        CurveJet j = c(ct.times[i]);
        out.values.push_back(j.p.y);
        z_rates.push_back(j.v.z);
        if (ct.at_e1[i]) {
            // A tangential passage through e1 stands for two merged crossings.
            out.values.push_back(j.p.y);
            z_rates.push_back(j.v.z);
            out.degenerate = true;
        }
    }
    if (static_cast<int>(out.values.size()) != 2 * k)
        throw WrongCrossingCount("psi: found " + std::to_string(out.values.size()) +
                                 " crossings, expected " + std::to_string(2 * k));
    // Chart restriction for k = 1: near a flower the curve dips below the
    // plane between the two passages, so the crossing rates run down, up.
    // The reversed pattern belongs to the mirrored configuration, which is
    // not near any flower.
    if (k == 1 && !out.degenerate && !(z_rates[0] < 0.0 && z_rates[1] > 0.0))
        throw WrongCrossingCount("psi: crossing pattern is not flower-adjacent");
    return out;
}

std::optional<FlowerReport> is_flower(const Curve& c) {
    if (!check_closed_in_L(c)) throw NotClosed("is_flower: curve is not closed in L");
    if (local_convexity_margin(c, kDefaultSamples) <= 0.0)
        throw NotLocallyConvex("is_flower: margin not positive");

    CrossingTimes ct;
    try {
        ct = flower_times(c);
    } catch (const TangentialCrossing&) {
        return std::nullopt;
    }

    // Keep only genuine passages through e1.
    std::vector<double> passages;
    for (size_t i = 0; i < ct.times.size(); ++i) {
        if (ct.at_e1[i]) return std::nullopt;  // coincident tangents break item 3
        if (distance(c.point(ct.times[i]), e1) < 1e-6) passages.push_back(ct.times[i]);
    }

    if (passages.empty()) {
        if (!is_simple(c)) return std::nullopt;
        FlowerReport rep;
        rep.petal_count = 1;
        rep.monotone_theta = true;
        return rep;
    }
    if (passages.size() % 2 != 0) return std::nullopt;

    // Tangent arguments theta_i of (-1)^i gamma'(t_i), t_0 = 0 included. The
    // chain must admit a strictly increasing lift with increments inside
    // (0, 2pi); coincident tangent directions (the retraced circle) fail.
    bool monotone = true;
    double prev_arg = 0.0;
    for (size_t i = 0; i < passages.size(); ++i) {
        Vec3 v = c(passages[i]).v;
        double sign = (i % 2 == 0) ? -1.0 : 1.0;  // i runs from 1 in the chain
        double th = std::atan2(sign * v.z, sign * v.y);
        double inc = th - prev_arg;
        inc -= kTwoPi * std::floor(inc / kTwoPi);  // into [0, 2pi)
        if (inc < 1e-9 || inc > kTwoPi - 1e-9) monotone = false;
        prev_arg = th;
    }
    if (!monotone) return std::nullopt;

    // No self-intersections away from e1.
    const int n_samples = 4096;
    std::vector<Vec3> pts(static_cast<size_t>(n_samples) + 1);
    parallel_for(0, n_samples + 1, [&](int i) {
        pts[static_cast<size_t>(i)] = c.point(static_cast<double>(i) / n_samples);
    });
    if (polyline_has_crossing(pts, true, 0.01, 1e-5, true, 0.05)) return std::nullopt;

    FlowerReport rep;
    rep.petal_count = static_cast<int>(passages.size()) + 1;
    rep.times = passages;
    for (double t : passages) rep.psi.push_back(c.point(t).y);
    rep.monotone_theta = true;
    return rep;
}

Quat phi(const Curve& c) {
    if (local_convexity_margin(c, kDefaultSamples) <= 0.0)
        throw NotLocallyConvex("phi: margin not positive");
    return lift_endpoint(c);
}

}  // namespace lcurves::invariants
