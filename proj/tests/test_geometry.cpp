#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcurves/errors.hpp"
#include "lcurves/geometry.hpp"

using namespace lcurves;

namespace {

Quat random_unit_quat(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Quat q{g(rng), g(rng), g(rng), g(rng)};
    return q.normalized();
}

}  // namespace

TEST_CASE("identity matrix maps to quaternion 1") {
    Quat q = rot_to_quat(Mat3::identity());
    CHECK(quat_distance(q, Quat{1, 0, 0, 0}) < 1e-12);
}

TEST_CASE("half turn about e3 maps to (0,0,0,1) under the sign convention") {
    Mat3 r = rotation_about_axis(e3, kPi);
    Quat q = rot_to_quat(r);
    CHECK(std::abs(q.w) < 1e-9);
    CHECK(std::abs(q.x) < 1e-9);
    CHECK(std::abs(q.y) < 1e-9);
    CHECK(q.z == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("projection round trip over 1000 random rotations") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        Mat3 r = quat_to_rot(random_unit_quat(rng));
        Mat3 back = quat_to_rot(rot_to_quat(r));
        CHECK((back - r).max_abs() < 1e-9);
    }
}

TEST_CASE("sign convention is deterministic under projection kernel") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Quat q = random_unit_quat(rng);
        Quat a = rot_to_quat(quat_to_rot(q));
        Quat b = rot_to_quat(quat_to_rot(-q));
        CHECK(quat_distance(a, b) < 1e-9);
        CHECK(a.w >= -1e-12);
    }
}

TEST_CASE("non-rotation input is rejected") {
    Mat3 bad = Mat3::from_columns({1, 0, 0}, {0, 2, 0}, {0, 0, 1});
    CHECK_THROWS_AS(rot_to_quat(bad), NotARotation);
}

TEST_CASE("smallest singular value matches hand cases") {
    CHECK(smallest_singular_value(e1, e2, e3) == doctest::Approx(1.0));
    CHECK(smallest_singular_value(e1 * 3.0, e2 * 0.5, e3) == doctest::Approx(0.5));
    CHECK(smallest_singular_value(e1, e2, e1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quaternion product projects to matrix product") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        Quat a = random_unit_quat(rng), b = random_unit_quat(rng);
        Mat3 lhs = quat_to_rot(a * b);
        Mat3 rhs = quat_to_rot(a) * quat_to_rot(b);
        CHECK((lhs - rhs).max_abs() < 1e-12);
    }
}
