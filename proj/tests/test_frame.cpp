#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcurves/errors.hpp"
#include "lcurves/families.hpp"
#include "lcurves/frame.hpp"

using namespace lcurves;
using families::nu;

namespace {

Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Quat q{g(rng), g(rng), g(rng), g(rng)};
    return quat_to_rot(q.normalized());
}

CurveJet random_jet(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    while (true) {
        Vec3 p{g(rng), g(rng), g(rng)};
        p = p.normalized();
        Vec3 v{g(rng), g(rng), g(rng)};
        v = v - p * dot(p, v);
        Vec3 a{g(rng), g(rng), g(rng)};
        CurveJet j{p, v, a};
        if (std::abs(det3(p, v, a)) > 0.05 && v.norm() > 0.1) return j;
    }
}

}  // namespace

TEST_CASE("frame of nu1 at t=0 is the identity") {
    Mat3 f = frenet_frame(nu(1)(0.0));
    CHECK((f - Mat3::identity()).max_abs() < 1e-12);
}

TEST_CASE("frame of nu1 matches the closed form at 256 parameters") {
    Curve c = nu(1);
    for (int i = 0; i < 256; ++i) {
        double t = static_cast<double>(i) / 256.0;
        Mat3 f = frenet_frame(c(t));
        CHECK((f - families::frenet_nu1(t)).max_abs() < 1e-9);
    }
}

TEST_CASE("factorization reconstructs the jet with positive upper triangular factor") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        CurveJet j = random_jet(rng);
        Mat3 q = frenet_frame(j);
        Mat3 qt = q.transpose();
        Vec3 r0 = qt * j.p, r1 = qt * j.v, r2 = qt * j.a;
        // R strictly upper triangular with positive diagonal.
        CHECK(r0.x > 0.0);
        CHECK(std::abs(r0.y) < 1e-9);
        CHECK(std::abs(r0.z) < 1e-9);
        CHECK(r1.y > 0.0);
        CHECK(std::abs(r1.z) < 1e-9);
        CHECK(r2.z > 0.0);
        Vec3 back0 = q * r0, back1 = q * r1, back2 = q * r2;
        CHECK(distance(back0, j.p) < 1e-9);
        CHECK(distance(back1, j.v) < 1e-9);
        CHECK(distance(back2, j.a) < 1e-9);
    }
}

TEST_CASE("frame computation is rotation equivariant") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        CurveJet j = random_jet(rng);
        Mat3 r = random_rotation(rng);
        CurveJet rj{r * j.p, r * j.v, r * j.a};
        Mat3 lhs = frenet_frame(rj);
        Mat3 rhs = r * frenet_frame(j);
        CHECK((lhs - rhs).max_abs() < 1e-10);
    }
}

TEST_CASE("degenerate jets are rejected") {
    CurveJet j{e1, e2, e2 * 2.0};
    CHECK_THROWS_AS(frenet_frame(j), DegenerateJet);
}

TEST_CASE("lift endpoints of nu_n alternate sign") {
    for (int n = 1; n <= 6; ++n) {
        Quat end = lift_endpoint(nu(n));
        double expect = (n % 2 == 0) ? 1.0 : -1.0;
        CHECK(quat_distance(end, Quat{expect, 0, 0, 0}) < 1e-6);
    }
}

TEST_CASE("lift reproduces the frames it covers") {
    Curve c = nu(3);
    SampledLift lift = lift_frames(c, 2048);
    for (int i = 0; i <= 2048; i += 97) {
        Mat3 from_quat = quat_to_rot(lift.q[static_cast<size_t>(i)]);
        Mat3 direct = frenet_frame(c(static_cast<double>(i) / 2048.0));
        CHECK((from_quat - direct).max_abs() < 1e-6);
    }
    CHECK(quat_distance(lift.q[0], Quat{1, 0, 0, 0}) == 0.0);
}

TEST_CASE("lift agrees with the closed form for nu1") {
    SampledLift lift = lift_frames(nu(1), 1024);
    for (int i = 0; i <= 1024; i += 31) {
        double t = static_cast<double>(i) / 1024.0;
        CHECK(quat_distance(lift.q[static_cast<size_t>(i)], families::lift_nu1(t)) < 1e-9);
    }
}

TEST_CASE("doubling the resolution does not change the endpoint sign") {
    for (int n : {1, 2, 5}) {
        Quat a = lift_frames(nu(n), 2048).endpoint();
        Quat b = lift_frames(nu(n), 4096).endpoint();
        CHECK(quat_distance(a, b) < 1e-8);
    }
}

TEST_CASE("too coarse a lift is refused") {
    CHECK_THROWS_AS(lift_frames(nu(6), 8), StepTooCoarse);
}

TEST_CASE("margin: nu1 positive, great circle zero") {
    CHECK(local_convexity_margin(nu(1), 4096) > 0.0);

    CurveMeta meta;
    meta.source = "great-circle";
    Curve gc([](double t) {
        double th = kTwoPi * t, w = kTwoPi;
        return CurveJet{{std::cos(th), std::sin(th), 0.0},
                        {-w * std::sin(th), w * std::cos(th), 0.0},
                        {-w * w * std::cos(th), -w * w * std::sin(th), 0.0}};
    }, meta);
    CHECK(std::abs(local_convexity_margin(gc, 4096)) < 1e-9);
}

TEST_CASE("sampled curves reproduce analytic jets to interpolation accuracy") {
    Curve ref = nu(2);
    std::vector<Vec3> pts;
    const int n = 512;
    for (int i = 0; i <= n; ++i) pts.push_back(ref.point(static_cast<double>(i) / n));
    Curve smp = curve_from_samples(pts, true);
    for (int i = 0; i <= 37; ++i) {
        double t = static_cast<double>(i) / 37.0;
        CurveJet a = ref(t), b = smp(t);
        CHECK(distance(a.p, b.p) < 1e-8);
        CHECK(distance(a.v, b.v) < 1e-4);
        CHECK(distance(a.a, b.a) < 1e-1);
    }
    CHECK(local_convexity_margin(smp, 512) > 0.0);
}

TEST_CASE("sampled input with bad norms is rejected") {
    std::vector<Vec3> pts(16, e1);
    pts[7] = e1 * 1.01;
    CHECK_THROWS_AS(curve_from_samples(pts, false), BadInput);
}
