#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcurves/errors.hpp"
#include "lcurves/families.hpp"
#include "lcurves/frame.hpp"

using namespace lcurves;
using namespace lcurves::families;

TEST_CASE("nu boundary data") {
    Curve c = nu(1);
    CurveJet j = c(0.0);
    CHECK(distance(j.p, e1) < 1e-15);
    CHECK(distance(j.v.normalized(), e2) < 1e-15);
    CHECK(nu(3).closed_in_L());
    CHECK(!nu(2.5).closed_in_L());
    CHECK_THROWS_AS(nu(0.0), NonPositiveSpeed);
}

TEST_CASE("nu1 stays on the circle with diameter e1 e3") {
    Curve c = nu(1);
    for (int i = 0; i <= 512; ++i) {
        Vec3 p = c.point(static_cast<double>(i) / 512.0);
        CHECK(std::abs(dot(p, e1 + e3) - 1.0) < 1e-12);
        CHECK(std::abs(p.norm() - 1.0) < 1e-12);
        CHECK(distance_to_c0(p) < 1e-12);
    }
    CHECK(angle_on_c0(c.point(0.25)) == doctest::Approx(kPi / 2));
}

TEST_CASE("concat of nu1 with itself is nu2 pointwise") {
    Curve cc = concat(nu(1), nu(1));
    Curve two = nu(2);
    for (int i = 0; i <= 999; ++i) {
        double t = static_cast<double>(i) / 999.0;
        CHECK(distance(cc.point(t), two.point(t)) < 1e-10);
    }
}

TEST_CASE("concat requires closed factors and preserves convexity") {
    CHECK_THROWS_AS(concat(nu(1.5), nu(1)), NotClosed);
    CHECK(local_convexity_margin(concat(nu(2), nu(3)), 4096) > 0.0);
}

TEST_CASE("lift endpoint is multiplicative under concat") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Curve a = (trial % 2 == 0) ? nu(1 + trial % 5)
                                   : g_plus_2(unif(rng), 0.1 + 0.8 * unif(rng));
        Curve b = (trial % 3 == 0) ? g_plus_2(unif(rng), 0.1 + 0.8 * unif(rng))
                                   : nu(1 + (trial + 1) % 5);
        Quat lhs = lift_endpoint(concat(a, b));
        Quat ea = lift_endpoint(a), eb = lift_endpoint(b);
        CHECK(quat_distance(lhs, ea * eb) < 1e-6);
    }
}

TEST_CASE("gamma_0 wraps a height sqrt2/2 circle four times, gamma_1 twice") {
    Curve c0 = gamma_s(0.0), c1 = gamma_s(1.0);
    double az_prev0 = 0.0, az_prev1 = 0.0, wind0 = 0.0, wind1 = 0.0;
    const int n = 4096;
    for (int i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) / n;
        Vec3 p0 = c0.point(t), p1 = c1.point(t);
        CHECK(std::abs(p0.z - kSqrt2 / 2.0) < 1e-12);
        CHECK(std::abs(p1.z + kSqrt2 / 2.0) < 1e-12);
        double az0 = std::atan2(p0.y, p0.x), az1 = std::atan2(p1.y, p1.x);
        if (i > 0) {
            double d0 = az0 - az_prev0, d1 = az1 - az_prev1;
            d0 -= kTwoPi * std::round(d0 / kTwoPi);
            d1 -= kTwoPi * std::round(d1 / kTwoPi);
            wind0 += d0;
            wind1 += d1;
        }
        az_prev0 = az0;
        az_prev1 = az1;
    }
    CHECK(std::abs(std::abs(wind0) - 8.0 * kPi) < 1e-6);
    CHECK(std::abs(std::abs(wind1) - 4.0 * kPi) < 1e-6);
}

TEST_CASE("gamma_s margins are positive along the interpolation") {
    for (int k = 0; k <= 64; ++k) {
        double s = static_cast<double>(k) / 64.0;
        CHECK(local_convexity_margin(gamma_s(s), 4096) > 0.0);
    }
}

TEST_CASE("frame of gamma_s rotates by a third turn about e3 when t shifts by 1/3") {
    Mat3 rot = rotation_about_axis(e3, kTwoPi / 3.0);
    double worst = 0.0;
    for (int a = 0; a <= 64; ++a)
        for (int b = 0; b <= 64; ++b) {
            double s = static_cast<double>(a) / 64.0;
            double t = static_cast<double>(b) / 64.0;
            Mat3 lhs = Gamma(s, t + 1.0 / 3.0);
            Mat3 rhs = rot * Gamma(s, t);
            worst = std::max(worst, (lhs - rhs).max_abs());
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("g_plus_2 poles are the round curves and ignore the phase") {
    Curve p4 = g_plus_2(0.37, 0.0);
    Curve p4b = g_plus_2(0.91, 0.0);
    Curve p2 = g_plus_2(0.2, 1.0);
    Curve n4 = nu(4), n2 = nu(2);
    for (int i = 0; i <= 257; ++i) {
        double t = static_cast<double>(i) / 257.0;
        CHECK(distance(p4.point(t), p4b.point(t)) < 1e-9);
        CHECK(distance(p4.point(t), n4.point(t)) < 1e-9);
        CHECK(distance(p2.point(t), n2.point(t)) < 1e-9);
    }
}

TEST_CASE("g_plus_2 chart is glued along the seam") {
    for (int j = 0; j <= 16; ++j) {
        double s2 = static_cast<double>(j) / 16.0;
        Curve a = g_plus_2(0.0, s2), b = g_plus_2(1.0, s2);
        for (int i = 0; i <= 64; ++i) {
            double t = static_cast<double>(i) / 64.0;
            CHECK(distance(a.point(t), b.point(t)) < 1e-9);
        }
    }
    CHECK(family_identification_error(family_g_plus_2(16, 16)) < 1e-8);
}

TEST_CASE("g_plus_2 members are closed with endpoint lift one") {
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j <= 16; ++j) {
            Curve c = g_plus_2(static_cast<double>(i) / 16.0, static_cast<double>(j) / 16.0);
            CHECK(check_closed_in_L(c));
            CHECK(quat_distance(lift_endpoint(c), Quat{1, 0, 0, 0}) < 1e-6);
        }
}

TEST_CASE("g_plus_2 margins are positive across the chart") {
    double worst = 1e300;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j <= 64; ++j) {
            Curve c = g_plus_2(static_cast<double>(i) / 64.0, static_cast<double>(j) / 64.0);
            worst = std::min(worst, local_convexity_margin(c, 4096));
        }
    CHECK(worst > 0.0);
}

TEST_CASE("loop homotopies meet their junction identities") {
    Curve base = g_plus_2(0.3, 0.4);
    const int n = 4;

    Curve h1_start = homotopy_H1(base, n, 0.0);
    Curve direct = loop_add(base, 2 * n);
    for (int i = 0; i <= 128; ++i) {
        double t = static_cast<double>(i) / 128.0;
        CHECK(distance(h1_start.point(t), direct.point(t)) < 1e-8);
    }

    Curve h1_end = homotopy_H1(base, n, 1.0);
    Curve h2_start = homotopy_H2(base, n, 0.0);
    for (int i = 0; i <= 128; ++i) {
        double t = static_cast<double>(i) / 128.0;
        CHECK(distance(h1_end.point(t), h2_start.point(t)) < 1e-8);
    }

    Curve h2_end = homotopy_H2(base, n, 1.0);
    Curve target = concat(nu(2 * n), base);
    for (int i = 0; i <= 128; ++i) {
        double t = static_cast<double>(i) / 128.0;
        CHECK(distance(h2_end.point(t), target.point(t)) < 1e-8);
    }

    for (double s : {0.25, 0.5, 0.75}) {
        Curve h = homotopy_H1(base, n, s);
        double tj = s / 2.0;
        CHECK(distance(h.point(tj - 1e-9), h.point(tj + 1e-9)) < 1e-6);
    }

    for (int k = 0; k <= 64; ++k) {
        double s = static_cast<double>(k) / 64.0;
        Curve h1 = homotopy_H1(base, n, s);
        Curve h2 = homotopy_H2(base, n, s);
        double vmin = 1e300;
        for (int i = 0; i <= 256; ++i) {
            double t = static_cast<double>(i) / 256.0;
            vmin = std::min({vmin, h1(t).v.norm(), h2(t).v.norm()});
        }
        CHECK(vmin > 0.0);
    }
}

TEST_CASE("loop bound for the constant nu1 family is finite and effective") {
    LoopBoundData data = loop_bound_data(family_constant(nu(1), 4, 4));
    CHECK(data.bound % 2 == 0);
    CHECK(data.bound <= 4096);
    CHECK(local_convexity_margin(loop_add(nu(1), 2), 4096) > 0.0);
}

TEST_CASE("disk wrap collapses the boundary to the nu4 pole") {
    for (int k = 0; k < 8; ++k) {
        double th = kTwoPi * k / 8.0;
        ChartPoint a = disk_wrap(1.0, th);
        CHECK(a.s2 == doctest::Approx(0.0));
        ChartPoint b = disk_wrap(0.0, th);
        CHECK(b.s2 == doctest::Approx(1.0));
    }
    // Continuity in theta at mid radius.
    double worst = 0.0;
    Curve prev = g_plus_2(disk_wrap(0.5, 0.0).s1, disk_wrap(0.5, 0.0).s2);
    for (int k = 1; k <= 256; ++k) {
        ChartPoint q = disk_wrap(0.5, kTwoPi * k / 256.0);
        Curve cur = g_plus_2(q.s1, q.s2);
        double gap = 0.0;
        for (int i = 0; i <= 64; ++i) {
            double t = static_cast<double>(i) / 64.0;
            gap = std::max(gap, distance(prev.point(t), cur.point(t)));
        }
        worst = std::max(worst, gap);
        prev = cur;
    }
    CHECK(worst < 0.1);
}

TEST_CASE("h_map hits 1 at both ends and matches nu lifts") {
    CHECK(quat_distance(h_map(0.0), Quat{1, 0, 0, 0}) < 1e-12);
    CHECK(quat_distance(h_map(1.0), Quat{1, 0, 0, 0}) < 1e-12);
    for (int k = 0; k <= 16; ++k) {
        double s = static_cast<double>(k) / 16.0;
        Quat direct = lift_endpoint(nu(4.0 - 2.0 * s));
        CHECK(quat_distance(direct, h_map(s)) < 1e-6);
    }
}

TEST_CASE("h0_lift covers X2 and nothing else") {
    Curve boundary = h0_lift(1.0, 0.0, 0.5);
    Curve three = nu(3);
    for (int i = 0; i <= 64; ++i) {
        double t = static_cast<double>(i) / 64.0;
        CHECK(distance(boundary.point(t), three.point(t)) < 1e-12);
    }
    Curve bottom = h0_lift(0.3, 0.2, 0.0);
    CHECK(check_closed_in_L(bottom));
    CHECK_THROWS_AS(h0_lift(0.3, 0.2, 0.5), DomainError);
    // p on the unit circle at s = 0 must be nu4.
    Curve rim = h0_lift(std::cos(1.0), std::sin(1.0), 0.0);
    Curve four = nu(4);
    for (int i = 0; i <= 64; ++i) {
        double t = static_cast<double>(i) / 64.0;
        CHECK(distance(rim.point(t), four.point(t)) < 1e-9);
    }
}

TEST_CASE("complete_with_arc restores nu4 from truncated circles") {
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        Curve done = complete_with_arc(nu(4.0 - 2.0 * s), s);
        Curve four = nu(4);
        for (int i = 0; i <= 256; ++i) {
            double t = static_cast<double>(i) / 256.0;
            CHECK(distance(done.point(t), four.point(t)) < 1e-8);
        }
    }
}

TEST_CASE("complete_with_arc rejects incompatible endpoints") {
    // nu(2) has lift endpoint +1 but the nu4 tail at s = 1/2 continues from -1.
    CHECK_THROWS_AS(complete_with_arc(nu(2), 0.5), IncompatibleEndpoint);
}

TEST_CASE("complete_with_arc at s=0 is the identity") {
    Curve c = g_plus_2(0.2, 0.6);
    Curve done = complete_with_arc(c, 0.0);
    for (int i = 0; i <= 64; ++i) {
        double t = static_cast<double>(i) / 64.0;
        CHECK(distance(done.point(t), c.point(t)) < 1e-12);
    }
}
