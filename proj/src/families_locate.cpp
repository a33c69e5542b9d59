#include <array>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <vector>

#include "lcurves/errors.hpp"
#include "lcurves/families.hpp"
#include "lcurves/invariants.hpp"

namespace lcurves::families {

namespace {

// The third-turn frame identity pins interior e1-passages of g_plus_2 members
// to t = 1/3 and 2/3, so the passage condition reduces to the smooth chart
// functional (y, z) of the curve value at t = 1/3.
std::array<double, 2> thirds_residual(double s1, double s2) {
    Vec3 p = g_plus_2(s1, s2).point(1.0 / 3.0);
    return {p.y, p.z};
}

void solve2(const std::function<std::array<double, 2>(double, double)>& f, double& x, double& y,
            const char* what) {
    const double h = 1e-7;
    for (int it = 0; it < 100; ++it) {
        auto v0 = f(x, y);
        double n0 = std::hypot(v0[0], v0[1]);
        if (n0 < 1e-12) return;
        auto vx = f(x + h, y), vy = f(x, y + h);
        double j11 = (vx[0] - v0[0]) / h, j12 = (vy[0] - v0[0]) / h;
        double j21 = (vx[1] - v0[1]) / h, j22 = (vy[1] - v0[1]) / h;
        double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14) throw Error(std::string(what) + ": singular Jacobian");
        double dx = (-v0[0] * j22 + v0[1] * j12) / det;
        double dy = (-v0[1] * j11 + v0[0] * j21) / det;
        double step = std::hypot(dx, dy);
        if (step > 0.05) {
            dx *= 0.05 / step;
            dy *= 0.05 / step;
        }
        x += dx;
        y += dy;
    }
    auto vf = f(x, y);
    if (std::hypot(vf[0], vf[1]) > 1e-9)
        throw Error(std::string(what) + ": Newton refinement did not converge");
}

}  // namespace

ChartPoint g_plus_2_flower() {
    static std::once_flag once;
    static ChartPoint flower;
    std::call_once(once, [] {
        // Global scan of the smooth passage functional, Newton on each basin,
        // then keep the zero that is structurally a flower (the mirrored zero
        // has a decreasing tangent-argument chain).
        std::vector<ChartPoint> zeros;
        const int scan = 48;
        for (int i = 0; i < scan; ++i)
            for (int j = 1; j < scan; ++j) {
                double s1 = static_cast<double>(i) / scan;
                double s2 = static_cast<double>(j) / scan;
                auto v = thirds_residual(s1, s2);
                if (std::hypot(v[0], v[1]) > 0.05) continue;
                double x = s1, y = s2;
                try {
                    solve2(thirds_residual, x, y, "g_plus_2_flower");
                } catch (const Error&) {
                    continue;
                }
                x -= std::floor(x);
                bool known = false;
                for (const ChartPoint& z : zeros)
                    if (std::abs(z.s1 - x) < 1e-6 && std::abs(z.s2 - y) < 1e-6) known = true;
                if (!known) zeros.push_back(ChartPoint{x, y});
            }
        for (const ChartPoint& z : zeros) {
            auto rep = invariants::is_flower(g_plus_2(z.s1, z.s2));
            if (rep && rep->petal_count == 3) {
                flower = z;
                return;
            }
        }
        throw Error("g_plus_2_flower: no structural flower among the passage zeros");
    });
    return flower;
}

double path_alpha_longitude() {
    ChartPoint fl = g_plus_2_flower();
    double s1 = fl.s1 + 0.5;
    return s1 - std::floor(s1);
}

Curve path_alpha(double u) {
    static std::once_flag checked;
    static double clearance = 0.0;
    double s1 = path_alpha_longitude();
    std::call_once(checked, [s1] {
        // Midpoint samples keep the degenerate poles off the probe; samples
        // outside the flower chart cannot be near the flower set at all.
        double min_clear = 1e300;
        for (int i = 0; i < 256; ++i) {
            double uu = (i + 0.5) / 256.0;
            try {
                invariants::PsiResult r = invariants::psi(g_plus_2(s1, 1.0 - uu), 1);
                if (!r.degenerate) min_clear = std::min(min_clear, r.norm());
            } catch (const Error&) {
            }
        }
        clearance = min_clear;
        if (clearance < 1e-3)
            throw FlowerOnPath("path_alpha: flower residual below 1e-3 along the path");
    });
    if (u < 0.0 || u > 1.0) throw DomainError("path_alpha: u outside [0,1]");
    Curve c = g_plus_2(s1, 1.0 - u);
    CurveMeta meta = c.meta();
    meta.source = "path_alpha u=" + std::to_string(u);
    return Curve([c](double t) { return c(t); }, meta);
}

namespace {

// Twisted passage target: the spliced curve passes through e1 exactly when
// the insert meets q(tau), the e1-row of the slowly turning preparation
// frame.
Vec3 twist_target(double tau) {
    const double ea = 1.0 / 16.0, twist = 2.0 / 16.0;
    double c = ea - twist * tau;
    double C = std::cos(kTwoPi * c), S = std::sin(kTwoPi * c);
    return Vec3{0.5 * (1.0 + C), -0.5 * kSqrt2 * S, 0.5 * (1.0 - C)};
}

// Solve gamma_p(tau_i) = q(tau_i) for i = 1, 2 near tau = 1/3, 2/3: four
// equations in (p, tau_1, tau_2).
std::array<double, 2> solve_twisted_flower(const std::function<Curve(double, double)>& member,
                                           double x0, double y0, const char* what) {
    std::array<double, 4> u{x0, y0, 1.0 / 3.0, 2.0 / 3.0};
    auto F = [&](const std::array<double, 4>& w) {
        Curve c = member(w[0], w[1]);
        Vec3 a = c.point(w[2]) - twist_target(w[2]);
        Vec3 b = c.point(w[3]) - twist_target(w[3]);
        return std::array<double, 4>{a.y, a.z, b.y, b.z};
    };
    const double h = 1e-7;
    for (int it = 0; it < 120; ++it) {
        auto f0 = F(u);
        double n0 = std::sqrt(f0[0] * f0[0] + f0[1] * f0[1] + f0[2] * f0[2] + f0[3] * f0[3]);
        if (n0 < 1e-12) break;
        double jac[4][4];
        for (int cidx = 0; cidx < 4; ++cidx) {
            auto up = u;
            up[static_cast<size_t>(cidx)] += h;
            auto fp = F(up);
            for (int r = 0; r < 4; ++r) jac[r][cidx] = (fp[static_cast<size_t>(r)] - f0[static_cast<size_t>(r)]) / h;
        }
        // Gaussian elimination with partial pivoting.
        double rhs[4] = {-f0[0], -f0[1], -f0[2], -f0[3]};
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::abs(jac[r][col]) > std::abs(jac[piv][col])) piv = r;
            if (std::abs(jac[piv][col]) < 1e-14)
                throw Error(std::string(what) + ": singular Jacobian");
            std::swap(jac[piv], jac[col]);
            std::swap(rhs[piv], rhs[col]);
            for (int r = col + 1; r < 4; ++r) {
                double m = jac[r][col] / jac[col][col];
                for (int cc = col; cc < 4; ++cc) jac[r][cc] -= m * jac[col][cc];
                rhs[r] -= m * rhs[col];
            }
        }
        double step[4];
        for (int r = 3; r >= 0; --r) {
            double s = rhs[r];
            for (int cc = r + 1; cc < 4; ++cc) s -= jac[r][cc] * step[cc];
            step[r] = s / jac[r][r];
        }
        double norm = 0.0;
        for (double v : step) norm = std::max(norm, std::abs(v));
        double scale = norm > 0.05 ? 0.05 / norm : 1.0;
        for (int r = 0; r < 4; ++r) u[static_cast<size_t>(r)] += scale * step[r];
    }
    auto ff = F(u);
    double nf = std::sqrt(ff[0] * ff[0] + ff[1] * ff[1] + ff[2] * ff[2] + ff[3] * ff[3]);
    if (nf > 1e-9) throw Error(std::string(what) + ": Newton refinement did not converge");
    return {u[0], u[1]};
}

}  // namespace

Flower2kParams g_plus_2k_flower_params(int k) {
    if (k != 2) throw BadInput("g_plus_2k_flower_params: only k = 2 is validated");
    static std::once_flag once;
    static Flower2kParams params;
    std::call_once(once, [] {
        ChartPoint fl = g_plus_2_flower();

        auto chart_member = [](double s1, double s2) { return g_plus_2(s1, s2); };
        auto z2 = solve_twisted_flower(chart_member, fl.s1, fl.s2, "g_plus_2k flower (chart)");
        params.p2 = {z2[0] - std::floor(z2[0]), z2[1]};

        auto disk_member = [](double x, double y) {
            ChartPoint q = disk_wrap(std::hypot(x, y), std::atan2(y, x));
            return g_plus_2(q.s1, q.s2);
        };
        double r0 = 1.0 - fl.s2, th0 = kTwoPi * fl.s1;
        auto z1 = solve_twisted_flower(disk_member, r0 * std::cos(th0), r0 * std::sin(th0),
                                       "g_plus_2k flower (disk)");
        params.p1x = z1[0];
        params.p1y = z1[1];
    });
    return params;
}

}  // namespace lcurves::families
