#include <algorithm>
#include <cmath>
#include <random>

#include "lcurves/errors.hpp"
#include "lcurves/invariants.hpp"
#include "lcurves/parallel.hpp"

namespace lcurves::invariants {

namespace {

// Chart orientation conventions, fixed once so that the decreed values
// count_f2(g_plus_2) = +1 and degree_x(g_plus_2) = +1 hold.
constexpr double kDegreeOrientation = 1.0;
constexpr int kF2Orientation = -1;

using QuatRow = std::vector<Quat>;      // indexed by t-node
using QuatSlice = std::vector<QuatRow>; // indexed by s1-node

QuatSlice lift_slice(const families::FamilyGrid& f, int m, int n_t, int j) {
    QuatSlice slice(static_cast<size_t>(m) + 1);
    int mult = std::max(1, (1024 + n_t - 1) / n_t);
    parallel_for(0, m + 1, [&](int i) {
        Curve c = f.at(static_cast<double>(i) / m, static_cast<double>(j) / m);
        int n_lift = n_t * mult;
        SampledLift lift;
        while (true) {
            try {
                lift = lift_frames(c, n_lift);
                break;
            } catch (const StepTooCoarse&) {
                if (n_lift * 2 > kMaxLiftSamples) throw;
                n_lift *= 2;
            }
        }
        int stride = n_lift / n_t;
        QuatRow row(static_cast<size_t>(n_t) + 1);
        for (int k = 0; k <= n_t; ++k) row[static_cast<size_t>(k)] = lift.q[static_cast<size_t>(k * stride)];
        slice[static_cast<size_t>(i)] = std::move(row);
    });
    return slice;
}

double max_neighbor_step(const QuatSlice& a, const QuatSlice& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < a[i].size(); ++k)
            m = std::max(m, quat_distance(a[i][k], b[i][k]));
    return m;
}

}  // namespace

DegreeResult degree_x(const families::FamilyGrid& f, int m, int n_t) {
    QuatSlice prev = lift_slice(f, m, n_t, 0);
    double total = 0.0;
    double worst_step = 0.0;

    for (int j = 0; j < m; ++j) {
        QuatSlice next = lift_slice(f, m, n_t, j + 1);
        worst_step = std::max(worst_step, max_neighbor_step(prev, next));
        for (size_t i = 0; i + 1 < prev.size(); ++i)
            for (size_t k = 0; k + 1 < prev[i].size(); ++k)
                worst_step = std::max({worst_step,
                                       quat_distance(prev[i][k], prev[i + 1][k]),
                                       quat_distance(prev[i][k], prev[i][k + 1])});

        std::vector<double> acc(static_cast<size_t>(m), 0.0);
        parallel_for(0, m, [&](int i) {
            auto idx = static_cast<size_t>(i);
            double cell_sum = 0.0;
            for (int k = 0; k < n_t; ++k) {
                auto kk = static_cast<size_t>(k);
                const Quat* c[8] = {&prev[idx][kk],     &prev[idx + 1][kk],
                                    &prev[idx][kk + 1], &prev[idx + 1][kk + 1],
                                    &next[idx][kk],     &next[idx + 1][kk],
                                    &next[idx][kk + 1], &next[idx + 1][kk + 1]};
                auto comp = [&](const Quat& q, int r) {
                    return r == 0 ? q.w : (r == 1 ? q.x : (r == 2 ? q.y : q.z));
                };
                std::array<std::array<double, 4>, 4> mtx{};
                for (int r = 0; r < 4; ++r) {
                    double center = 0.0;
                    for (int v = 0; v < 8; ++v) center += comp(*c[v], r);
                    center *= 0.125;
                    // d/ds1: average over the i+1 face minus the i face, etc.
                    double d1 = 0.25 * (comp(*c[1], r) + comp(*c[3], r) + comp(*c[5], r) + comp(*c[7], r)) -
                                0.25 * (comp(*c[0], r) + comp(*c[2], r) + comp(*c[4], r) + comp(*c[6], r));
                    double d3 = 0.25 * (comp(*c[2], r) + comp(*c[3], r) + comp(*c[6], r) + comp(*c[7], r)) -
                                0.25 * (comp(*c[0], r) + comp(*c[1], r) + comp(*c[4], r) + comp(*c[5], r));
                    double d2 = 0.25 * (comp(*c[4], r) + comp(*c[5], r) + comp(*c[6], r) + comp(*c[7], r)) -
                                0.25 * (comp(*c[0], r) + comp(*c[1], r) + comp(*c[2], r) + comp(*c[3], r));
                    mtx[r][0] = center;
                    mtx[r][1] = d1;
                    mtx[r][2] = d2;
                    mtx[r][3] = d3;
                }
                // Normalize the cell center back to S^3.
                double cn = std::sqrt(mtx[0][0] * mtx[0][0] + mtx[1][0] * mtx[1][0] +
                                      mtx[2][0] * mtx[2][0] + mtx[3][0] * mtx[3][0]);
                for (int r = 0; r < 4; ++r) mtx[r][0] /= cn;
                // det expects rows = components, columns = (q, d1, d2, d3).
                std::array<std::array<double, 4>, 4> cols{};
                for (int r = 0; r < 4; ++r)
                    for (int cidx = 0; cidx < 4; ++cidx) cols[cidx][r] = mtx[r][cidx];
                cell_sum += det4(cols);
            }
            acc[idx] = cell_sum;
        });
        for (double v : acc) total += v;
        prev = std::move(next);
    }

    if (worst_step >= 0.3)
        throw NonIntegerDegree("degree_x: lift varies by >= 0.3 between grid neighbors (" +
                               std::to_string(worst_step) + "); refine the grid");

    double raw = kDegreeOrientation * total / (2.0 * kPi * kPi);
    DegreeResult out;
    out.value = static_cast<int>(std::lround(raw));
    out.residual = std::abs(raw - out.value);
    if (out.residual > 0.1)
        throw NonIntegerDegree("degree_x: residual " + std::to_string(out.residual) +
                               " exceeds 0.1; grid too coarse");
    return out;
}

namespace {

struct NodePsi {
    bool evaluable = false;
    double x = 0.0, y = 0.0;  // the two residual components
};

NodePsi eval_node(const Curve& c) {
    NodePsi node;
    try {
        PsiResult r = psi(c, 1);
        if (r.degenerate) return node;
        node.evaluable = true;
        node.x = r.values[0];
        node.y = r.values[1];
    } catch (const Error&) {
        // outside the evaluable chart
    }
    return node;
}

}  // namespace

F2Result count_f2(const families::FamilyGrid& f) {
    int m1 = f.m1, m2 = f.m2;
    std::vector<NodePsi> nodes(static_cast<size_t>((m1 + 1) * (m2 + 1)));
    parallel_for(0, (m1 + 1) * (m2 + 1), [&](int idx) {
        int i = idx % (m1 + 1), j = idx / (m1 + 1);
        nodes[static_cast<size_t>(idx)] =
            eval_node(f.at(static_cast<double>(i) / m1, static_cast<double>(j) / m2));
    });
    auto at = [&](int i, int j) -> const NodePsi& {
        return nodes[static_cast<size_t>(j * (m1 + 1) + i)];
    };

    F2Result out;
    for (const NodePsi& n : nodes)
        if (n.evaluable) ++out.evaluable_nodes;

    // Winding of the psi loop around each fully evaluable cell.
    double total_turn_cells = 0.0;
    int count = 0;
    for (int j = 0; j < m2; ++j)
        for (int i = 0; i < m1; ++i) {
            const NodePsi* c[4] = {&at(i, j), &at(i + 1, j), &at(i + 1, j + 1), &at(i, j + 1)};
            if (!(c[0]->evaluable && c[1]->evaluable && c[2]->evaluable && c[3]->evaluable))
                continue;
            double turn = 0.0;
            for (int e = 0; e < 4; ++e) {
                const NodePsi* a = c[e];
                const NodePsi* b = c[(e + 1) % 4];
                turn += std::atan2(a->x * b->y - a->y * b->x, a->x * b->x + a->y * b->y);
            }
            double w = turn / kTwoPi;
            long wi = std::lround(w);
            total_turn_cells += std::abs(w - wi);
            count += static_cast<int>(wi);
        }
    (void)total_turn_cells;

    // Rim of the evaluable region: evaluable nodes touching a masked node.
    double rim_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= m2; ++j)
        for (int i = 0; i <= m1; ++i) {
            if (!at(i, j).evaluable) continue;
            bool rim = false;
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                int ii = i + di[d], jj = j + dj[d];
                if (f.seam_s1) {
                    if (ii < 0) ii = m1 - 1;
                    if (ii > m1) ii = 1;
                }
                if (ii < 0 || ii > m1 || jj < 0 || jj > m2) continue;
                if (!at(ii, jj).evaluable) rim = true;
            }
            if (rim) {
                double n = std::hypot(at(i, j).x, at(i, j).y);
                rim_min = std::min(rim_min, n);
            }
        }
    out.mask_boundary_min = std::isfinite(rim_min) ? rim_min : -1.0;
    if (std::isfinite(rim_min) && rim_min < 1e-3)
        throw MaskBoundaryZero("count_f2: |psi_2| = " + std::to_string(rim_min) +
                               " on the evaluable-region rim; count ill-defined at this resolution");

    out.value = kF2Orientation * count;
    return out;
}

ObstructionReport obstruction_check(int disk_m_theta, int disk_m_r, int side_samples,
                                    int tail_probes, std::uint64_t seed) {
    ObstructionReport rep;

    families::FamilyGrid disk = families::family_disk_g_plus_2(disk_m_theta, disk_m_r);
    F2Result f2 = count_f2(disk);
    rep.bottom_f2 = f2.value;
    rep.bottom_pass = (f2.value == 1);

    rep.sides_pass = true;
    for (int k = 0; k < side_samples; ++k) {
        double s = static_cast<double>(k) / (side_samples - 1);
        Curve side = families::complete_with_arc(families::nu(4.0 - 2.0 * s), s);
        if (is_flower(side).has_value()) rep.sides_pass = false;
    }

    rep.tails_pass = true;
    rep.tail_probes = tail_probes;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < tail_probes; ++k) {
        Curve head;
        switch (k % 3) {
            case 0: head = families::nu(1 + k % 6); break;
            case 1: head = families::g_plus_2(unif(rng), unif(rng)); break;
            default: head = families::concat(families::nu(2), families::g_plus_2(unif(rng), unif(rng)));
        }
        Curve tailed = families::concat(head, families::nu(2));
        if (is_flower(tailed).has_value()) rep.tails_pass = false;
    }
    return rep;
}

}  // namespace lcurves::invariants
