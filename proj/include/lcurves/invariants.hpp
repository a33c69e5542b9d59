#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcurves/curve.hpp"
#include "lcurves/families.hpp"
#include "lcurves/frame.hpp"

namespace lcurves::invariants {

enum class ComponentClass { MinusConvex, Plus, MinusNonConvex };

std::string to_string(ComponentClass c);

/// Little component from the lift endpoint and convexity. Requires a closed
/// curve with margin above 1e-9.
ComponentClass classify(const Curve& c);

/// Supporting-plane test: eta_{t0}(t) = <gamma(t), n(t0)> stays above -1e-7
/// for 256 base points on a 4096-point probe, sub-threshold set confined to
/// a 0.02-wide window around t0.
bool is_convex(const Curve& c, int n_coarse = 256, int n_fine = 4096);

/// Polyline self-intersection scan with tolerance 1e-5 between segments
/// separated by more than 0.01 in parameter (mod 1).
bool is_simple(const Curve& c, int n_samples = 2048);

struct CrossingTimes {
    std::vector<double> times;       // sorted interior crossings
    std::vector<bool> at_e1;         // tangential passage through e1 itself
};

/// Interior parameters where the curve crosses the plane z = 0 within 0.1 of
/// e1, bisected to 1e-10. Tangential touches exactly at e1 are reported with
/// the degeneracy flag; tangential crossings elsewhere throw.
CrossingTimes flower_times(const Curve& c, int n_scan = 4096);

struct PsiResult {
    std::vector<double> values;
    bool degenerate = false;
    double norm() const;
};

/// The flower residual: e2-components at the 2k crossings.
PsiResult psi(const Curve& c, int k, int n_scan = 4096);

struct FlowerReport {
    int petal_count = 0;
    std::vector<double> times;
    std::vector<double> psi;
    bool monotone_theta = false;
};

/// Full structural flower test; none unless the curve passes through e1 at
/// exactly 2k interior times with increasing tangent arguments and no other
/// self-intersections.
std::optional<FlowerReport> is_flower(const Curve& c);

/// Lift endpoint of a locally convex based curve (closure not required).
Quat phi(const Curve& c);

struct DegreeResult {
    int value = 0;
    double residual = 0.0;  // distance of the raw integral to the nearest integer
};

/// Degree of the lifted-frame map via the pullback volume integral over the
/// chart at resolution m x m x n_t (midpoint cells, centered differences).
/// Throws NonIntegerDegree if the residual exceeds 0.1.
DegreeResult degree_x(const families::FamilyGrid& f, int m, int n_t);

struct F2Result {
    int value = 0;
    int evaluable_nodes = 0;
    double mask_boundary_min = 0.0;  // min |psi| on the evaluable-region rim
};

/// Signed count of flowers in the family: per-cell winding of psi_2 summed
/// over the chart at the family's grid resolution. Cells outside the
/// evaluable region contribute zero; throws MaskBoundaryZero if |psi_2|
/// dips below 1e-3 on the rim of the evaluable region.
F2Result count_f2(const families::FamilyGrid& f);

struct ObstructionReport {
    int bottom_f2 = 0;
    bool bottom_pass = false;   // (i) unique flower at the bottom disk
    bool sides_pass = false;    // (ii) no flowers along the sides
    bool tails_pass = false;    // (iii) nu(4)-tailed curves are never flowers
    int tail_probes = 0;
};

/// The three boundary facts of the lifting obstruction.
ObstructionReport obstruction_check(int disk_m_theta = 128, int disk_m_r = 128,
                                    int side_samples = 33, int tail_probes = 100,
                                    std::uint64_t seed = 0);

}  // namespace lcurves::invariants
