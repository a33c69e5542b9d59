#include "lcurves/geometry.hpp"

#include <algorithm>

#include "lcurves/errors.hpp"

namespace lcurves {

double orthogonality_residual(const Mat3& R) {
    Mat3 G = R.transpose() * R;
    double r = std::abs(G.det() < 0 ? 2.0 : R.det() - 1.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double target = (i == j) ? 1.0 : 0.0;
            r = std::max(r, std::abs(G(i, j) - target));
        }
    return r;
}

namespace {

// Cyclic Jacobi on a symmetric 3x3; plenty for tolerance checks.
void sym_eigenvalues3(double a[3][3], double ev[3]) {
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                double app = a[p][p], aqq = a[q][q], apq = a[p][q];
                a[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a[p][q] = a[q][p] = 0.0;
                int r = 3 - p - q;
                double arp = a[r][p], arq = a[r][q];
                a[r][p] = a[p][r] = c * arp - s * arq;
                a[r][q] = a[q][r] = s * arp + c * arq;
            }
    }
    ev[0] = a[0][0]; ev[1] = a[1][1]; ev[2] = a[2][2];
}

}  // namespace

double smallest_singular_value(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 cols[3] = {a, b, c};
    double g[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i][j] = dot(cols[i], cols[j]);
    double ev[3];
    sym_eigenvalues3(g, ev);
    double m = std::min({ev[0], ev[1], ev[2]});
    return std::sqrt(std::max(0.0, m));
}

Mat3 rotation_about_axis(const Vec3& axis, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    Vec3 n = axis;
    auto col = [&](const Vec3& v) { return v * c + cross(n, v) * s + n * (dot(n, v) * (1.0 - c)); };
    return Mat3::from_columns(col(e1), col(e2), col(e3));
}

Mat3 quat_to_rot(const Quat& q) {
    double w = q.w, x = q.x, y = q.y, z = q.z;
    return Mat3::from_columns(
        {1 - 2 * (y * y + z * z), 2 * (x * y + w * z), 2 * (x * z - w * y)},
        {2 * (x * y - w * z), 1 - 2 * (x * x + z * z), 2 * (y * z + w * x)},
        {2 * (x * z + w * y), 2 * (y * z - w * x), 1 - 2 * (x * x + y * y)});
}

Quat rot_to_quat(const Mat3& R) {
    if (orthogonality_residual(R) > 1e-6)
        throw NotARotation("rot_to_quat: orthogonality residual exceeds 1e-6");

    // Shepperd: pick the largest of the four squared components.
    double m00 = R(0, 0), m11 = R(1, 1), m22 = R(2, 2);
    double tr = m00 + m11 + m22;
    Quat q;
    if (tr >= m00 && tr >= m11 && tr >= m22) {
        double s = std::sqrt(tr + 1.0) * 2.0;
        q = {0.25 * s, (R(2, 1) - R(1, 2)) / s, (R(0, 2) - R(2, 0)) / s, (R(1, 0) - R(0, 1)) / s};
    } else if (m00 >= m11 && m00 >= m22) {
        double s = std::sqrt(1.0 + m00 - m11 - m22) * 2.0;
        q = {(R(2, 1) - R(1, 2)) / s, 0.25 * s, (R(0, 1) + R(1, 0)) / s, (R(0, 2) + R(2, 0)) / s};
    } else if (m11 >= m22) {
        double s = std::sqrt(1.0 + m11 - m00 - m22) * 2.0;
        q = {(R(0, 2) - R(2, 0)) / s, (R(0, 1) + R(1, 0)) / s, 0.25 * s, (R(1, 2) + R(2, 1)) / s};
    } else {
        double s = std::sqrt(1.0 + m22 - m00 - m11) * 2.0;
        q = {(R(1, 0) - R(0, 1)) / s, (R(0, 2) + R(2, 0)) / s, (R(1, 2) + R(2, 1)) / s, 0.25 * s};
    }
    q = q.normalized();

    // Deterministic sign: nonnegative w; ties broken by first nonzero of (x,y,z).
    constexpr double kTie = 1e-12;
    bool flip = false;
    if (q.w < -kTie) flip = true;
    else if (std::abs(q.w) <= kTie) {
        if (q.x < -kTie) flip = true;
        else if (std::abs(q.x) <= kTie) {
            if (q.y < -kTie) flip = true;
            else if (std::abs(q.y) <= kTie && q.z < -kTie) flip = true;
        }
    }
    return flip ? -q : q;
}

}  // namespace lcurves
