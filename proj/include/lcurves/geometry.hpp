#pragma once

#include <array>
#include <cmath>

namespace lcurves {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const { double n = norm(); return {x / n, y / n, z / n}; }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }
inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

inline const Vec3 e1{1.0, 0.0, 0.0};
inline const Vec3 e2{0.0, 1.0, 0.0};
inline const Vec3 e3{0.0, 0.0, 1.0};

/// Column-major 3x3 matrix; columns are the natural currency (frames store
/// position / tangent / normal as columns).
struct Mat3 {
    std::array<Vec3, 3> col{};

    static Mat3 identity() { return {{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}}; }
    static Mat3 from_columns(const Vec3& a, const Vec3& b, const Vec3& c) { return {{a, b, c}}; }

    Vec3 operator*(const Vec3& v) const { return col[0] * v.x + col[1] * v.y + col[2] * v.z; }
    Mat3 operator*(const Mat3& m) const {
        return from_columns((*this) * m.col[0], (*this) * m.col[1], (*this) * m.col[2]);
    }
    Mat3 operator-(const Mat3& m) const {
        return from_columns(col[0] - m.col[0], col[1] - m.col[1], col[2] - m.col[2]);
    }
    Mat3 transpose() const {
        return {{Vec3{col[0].x, col[1].x, col[2].x},
                 Vec3{col[0].y, col[1].y, col[2].y},
                 Vec3{col[0].z, col[1].z, col[2].z}}};
    }
    double det() const { return det3(col[0], col[1], col[2]); }
    double frobenius() const { return std::sqrt(col[0].norm2() + col[1].norm2() + col[2].norm2()); }
    double max_abs() const;
    double operator()(int r, int c) const {
        const Vec3& v = col[c];
        return r == 0 ? v.x : (r == 1 ? v.y : v.z);
    }
};

inline double Mat3::max_abs() const {
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r) m = std::max(m, std::abs((*this)(r, c)));
    return m;
}

/// Deviation of R from SO(3): max of |R^T R - I| entries and |det R - 1|.
double orthogonality_residual(const Mat3& R);

/// Smallest singular value of the matrix with columns (a|b|c).
double smallest_singular_value(const Vec3& a, const Vec3& b, const Vec3& c);

/// Rotation about a unit axis by angle (radians).
Mat3 rotation_about_axis(const Vec3& axis, double angle);

struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    constexpr Quat() = default;
    constexpr Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }
    Quat operator-() const { return {-w, -x, -y, -z}; }
    Quat conjugate() const { return {w, -x, -y, -z}; }
    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
    Quat normalized() const {
        double n = norm();
        return {w / n, x / n, y / n, z / n};
    }
};

inline double quat_distance(const Quat& a, const Quat& b) {
    double dw = a.w - b.w, dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dw * dw + dx * dx + dy * dy + dz * dz);
}

/// Canonical projection S^3 -> SO(3).
Mat3 quat_to_rot(const Quat& q);

/// Inverse of the projection up to sign, made deterministic: w >= 0, ties
/// broken by the first nonzero of (x, y, z) positive.
/// Throws NotARotation if the orthogonality residual exceeds 1e-6.
Quat rot_to_quat(const Mat3& R);

inline double det4(const std::array<std::array<double, 4>, 4>& m) {
    double d = 0.0;
    for (int c = 0; c < 4; ++c) {
        double minor[3][3];
        for (int r = 1; r < 4; ++r) {
            int mc = 0;
            for (int cc = 0; cc < 4; ++cc) {
                if (cc == c) continue;
                minor[r - 1][mc++] = m[r][cc];
            }
        }
        double md = minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1]) -
                    minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0]) +
                    minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]);
        d += ((c % 2 == 0) ? 1.0 : -1.0) * m[0][c] * md;
    }
    return d;
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline const double kSqrt2 = std::sqrt(2.0);

}  // namespace lcurves
