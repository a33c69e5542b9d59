#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lcurves/curve.hpp"
#include "lcurves/frame.hpp"
#include "lcurves/geometry.hpp"

namespace lcurves::families {

/// The circle with diameter e1-e3, the backbone of every construction here.
inline const Vec3 kC0Center{0.5, 0.0, 0.5};
inline const Vec3 kC0Axis{1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)};
inline const double kC0Radius = std::sqrt(2.0) / 2.0;

double distance_to_c0(const Vec3& p);
/// Angle along C0 of the projection of p, in [0, 2pi); nu(1)(t) sits at 2*pi*t.
double angle_on_c0(const Vec3& p);

/// nu_c(t) = nu_1(c t): the circle C0 traversed with speed c. Closed in L
/// exactly when c is a positive integer.
Curve nu(double c);

/// Frenet frame of nu_1 at parameter c, in closed form.
Mat3 frenet_nu1(double c);
/// Lift of the nu_1 frame path, in closed form.
Quat lift_nu1(double c);

/// (c1 * c2)(t): c1 on [0,1/2], c2 on [1/2,1], parameter halved on each.
Curve concat(const Curve& c1, const Curve& c2);

/// Loop addition: t -> F_c(t) nu_n(t). Frame derivatives by centered
/// differences; requires an immersed curve.
Curve loop_add(const Curve& c, int n);

/// Rectangular chart of curves over [0,1]^2 with edge identifications.
struct FamilyGrid {
    int m1 = 0, m2 = 0;                          // cells per direction
    std::function<Curve(double, double)> at;     // chart evaluator
    bool seam_s1 = false;                        // s1 = 0 glued to s1 = 1
    bool poles_s2 = false;                       // s2 = 0 and 1 collapsed
    std::string name;

    Curve cell(int i, int j) const {
        return at(static_cast<double>(i) / m1, static_cast<double>(j) / m2);
    }
};

/// Least even integer above 20 C / eps for the loop lemma: C bounds the
/// frame-path first and second derivatives over the family, eps is the
/// largest dyadic 2^-k surviving a randomized convexity-perturbation probe
/// of nu_1.
int loop_bound(const FamilyGrid& f, std::uint64_t seed = 0);

/// The two constants behind loop_bound, exposed for diagnostics.
struct LoopBoundData {
    double frame_bound = 0.0;  // C
    double epsilon = 0.0;      // eps
    int bound = 0;             // least even integer > 20 C / eps
};
LoopBoundData loop_bound_data(const FamilyGrid& f, std::uint64_t seed = 0);

/// First stage of the loop-pushing homotopy: equals loop_add(c, 2n) at s = 0.
Curve homotopy_H1(const Curve& c, int n, double s);
/// Second stage: H2(.,0) = H1(.,1) and H2(.,1) = nu_{2n} * c.
Curve homotopy_H2(const Curve& c, int n, double s);

/// The rotating chart alpha(s,t) and the curves gamma_s it carries.
Mat3 alpha_rot(double s, double t);
Curve gamma_s(double s);
/// Frenet frame of gamma_s at t (defined for all real t by periodicity).
Mat3 Gamma(double s, double t);

/// The two-sphere family: based rotations of gamma_{s2} with phase s1/3.
/// Pole s2 = 0 gives nu(4), pole s2 = 1 gives nu(2).
Curve g_plus_2(double s1, double s2);

struct ChartPoint {
    double s1 = 0.0, s2 = 0.0;
};

/// Chart location of the unique flower of the g_plus_2 family (cached
/// numerical solve of psi_2 = 0).
ChartPoint g_plus_2_flower();

/// Disk (r, theta) onto the g_plus_2 chart sphere; boundary r = 1 goes to
/// the nu(4) pole, r = 0 to the nu(2) pole.
ChartPoint disk_wrap(double r, double theta);

/// Path from nu(2) (u=0) to nu(4) (u=1) along the meridian antipodal to the
/// flower longitude; throws FlowerOnPath if the flower residual dips under
/// 1e-3 along it.
Curve path_alpha(double u);
/// The chosen longitude s1* (cached).
double path_alpha_longitude();

/// The glued two-sphere: g_plus_2 wrapped on the left half of the chart,
/// nu(2) * g_plus_2 wrapped with opposite orientation on the inner square,
/// path_alpha on the collar, nu(2) on the outer boundary.
Curve g_2(double x, double y);

/// Lift endpoint of nu_{4-2s}; independent of the disk point.
Quat h_map(double s);
/// The partial lift data: the g_plus_2 disk family at s = 0, nu_{4-2s} on
/// the boundary circle. Throws DomainError off X2.
Curve h0_lift(double px, double py, double s);

/// Append the nu(4) tail: c reparametrized onto [0, 1-s/2] followed by
/// nu(4) on [1-s/2, 1]. Requires the lift endpoint of c to match h_map(s)
/// within 1e-4.
Curve complete_with_arc(const Curve& c, double s);

/// Projective renormalization by R(a,b)^{-1} where R(a,b) is the
/// cone-preserving upper triangular matrix; margin sign is preserved.
Curve renorm(const Curve& c, double a, double b);
/// The cone-preserving matrix itself.
Mat3 shear_matrix(double a, double b);

struct IntervalSupport {
    double lo = 0.0, hi = 0.0;  // 0 < lo < hi < 1
};

inline const IntervalSupport kInterval1{1.0 / 6.0, 2.0 / 6.0};
inline const IntervalSupport kInterval2{4.0 / 6.0, 5.0 / 6.0};

/// Squeeze a closed insert into the interval I of the nu(1) backbone: the
/// output equals nu(1) outside I and carries the renormalized, reparametrized
/// insert inside. Throws GapTooWide when no shear in the search range
/// confines the off-circle part to I.
Curve splice(const Curve& insert, const IntervalSupport& I);

/// Diagnostics of the accepted shear for a given insert and interval.
struct SpliceFit {
    double expansion = 0.0;    // accepted expansion factor at e1
    double shear = 0.0;        // accepted b
    double theta_enter = 0.0;  // C0 angle where the excursion leaves the circle
    double theta_exit = 0.0;   // C0 angle where it comes back
};
SpliceFit splice_fit(const Curve& insert, const IntervalSupport& I);

/// Member of the 2k-dimensional plus-family: factor one spliced into I1,
/// factor two (the (2k-2)-family member) spliced into I2, nu(1) elsewhere.
/// p2 holds 2(k-1) chart coordinates, recursively (base: the g_plus_2 chart).
Curve g_plus_2k_point(int k, double p1x, double p1y, const std::vector<double>& p2);

/// Flower parameters of the two spliced factors (cached numerical solves).
struct Flower2kParams {
    double p1x = 0.0, p1y = 0.0;
    std::vector<double> p2;
};
Flower2kParams g_plus_2k_flower_params(int k);

// Chart builders.
FamilyGrid family_constant(const Curve& c, int m1, int m2);
FamilyGrid family_g_plus_2(int m1, int m2);
/// nu(2) * f, memberwise.
FamilyGrid family_nu2_concat(const FamilyGrid& f);
FamilyGrid family_g_2(int m1, int m2);
/// Bottom disk of the lifting problem: g_plus_2 over disk_wrap, chart
/// coordinates (theta, r).
FamilyGrid family_disk_g_plus_2(int m_theta, int m_r);

/// Max pointwise disagreement across the declared identifications.
double family_identification_error(const FamilyGrid& f, int n_samples = 256);

}  // namespace lcurves::families
