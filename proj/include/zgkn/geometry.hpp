#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <variant>

#include "zgkn/errors.hpp"

namespace zgkn {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Physical parameters of the ring singularity model, in natural units
/// (hbar = c = 1, lengths in 1/m unless stated otherwise).
///
/// `gamma` is the electrostatic coupling between the ring charge Q and the
/// point charge Qprime, gamma = Q*Qprime; the attractive hydrogenic case has
/// gamma = -e^2 = -alpha < 0.  The ring current I fixes the magnetic moment
/// I*pi*a^2; the choice I*pi*a = Q makes the Dirac problem separable.
struct ModelParams {
    double a = 1.0;       // signed ring radius
    double m = 1.0;       // particle mass
    double Q = -1.0;      // ring charge as seen in the r>0 sheet
    double Qprime = 1.0;  // point charge
    double I = 0.0;       // ring current
    double gamma = -1.0;  // coupling Q*Qprime

    static constexpr double fine_structure = 1.0 / 137.036;

    /// Hydrogenic configuration: ring charge -e, point charge +e with
    /// e = sqrt(alpha), current tuned to the separable moment I*pi*a = Q.
    static ModelParams hydrogenic(double a, double m = 1.0,
                                  double alpha = fine_structure) {
        ModelParams p;
        p.a = a;
        p.m = m;
        p.Q = -std::sqrt(alpha);
        p.Qprime = std::sqrt(alpha);
        p.I = p.Q / (kPi * a);
        p.gamma = -alpha;
        return p;
    }

    /// Anomalous magnetic moment I*pi*a^2 - Q*a; zero iff separable.
    double anomalous_moment() const { return I * kPi * a * a - Q * a; }
    bool separable() const { return anomalous_moment() == 0.0; }

    /// Sufficient condition for a nonempty point spectrum in the gap:
    /// |a| m < 1/2 and e^2 < sqrt(2|a|m (1 - 2|a|m)), with e^2 = |gamma|.
    bool admissible() const {
        const double am = std::fabs(a) * m;
        if (!(am < 0.5)) return false;
        return std::fabs(gamma) < std::sqrt(2.0 * am * (1.0 - 2.0 * am));
    }
};

// ---------------------------------------------------------------------------
// Charts.  The constant-t manifold is two copies of R^3 cross-linked through
// the disc spanned by the ring; r in R covers both sheets in one chart.

/// Oblate spheroidal (Boyer-Lindquist spatial) coordinates.  r ranges over
/// all of R; theta in [0,pi]; phi in [0,2pi).
struct BoyerLindquist {
    double r;
    double theta;
    double phi;
};

/// Ring-centered coordinates xi = r/a, eta = cos(theta).  The sheet swap is
/// (xi,eta) -> (-xi,-eta).
struct RingCentered {
    double xi;
    double eta;
    double phi;
};

/// Cylindrical coordinates of the base manifold; 2:1 under the projection,
/// disambiguated by the sheet flag (sign of r, or approach side on the disc).
struct Cylindrical {
    double rho;
    double z;
    double phi;
    int sheet; // +1 or -1
};

/// Peripolar (toroidal-type) coordinates.  zeta >= 0; chi in (-pi,pi] on the
/// r>0 sheet and (pi,3pi] on the r<0 sheet, continuous across the disc.
struct Peripolar {
    double zeta;
    double chi;
    double phi;
};

struct SpacetimePoint {
    double t = 0.0;
    std::variant<BoyerLindquist, RingCentered, Cylindrical, Peripolar> coords;
};

// ---------------------------------------------------------------------------
// Chart maps.  All pure functions; the ring locus raises RingPointError.

/// Projection to base-manifold cylindrical coordinates (sign of r is lost).
/// rho = sqrt(r^2+a^2) sin(theta), z = r cos(theta).
std::array<double, 2> os_to_cyl(double r, double theta, double a);

/// Inverse of the projection on the chosen sheet.  Throws RingPointError at
/// (rho,z) = (|a|,0).  On the open disc (z = 0, rho < |a|, r = 0) the sheet
/// flag selects the approach side: +1 -> theta <= pi/2.
std::array<double, 2> cyl_to_os(double rho, double z, int sheet, double a);

/// Full-chart conversions.
RingCentered bl_to_ring(const BoyerLindquist& p, double a);
BoyerLindquist ring_to_bl(const RingCentered& p, double a);
Cylindrical bl_to_cyl(const BoyerLindquist& p, double a);
BoyerLindquist cyl_to_bl(const Cylindrical& p, double a);

/// Cartesian image of the projection, for trajectory output and field
/// sampling in the base manifold.
std::array<double, 3> project_cartesian(double r, double theta, double phi, double a);

/// Sheet swap (xi,eta,phi) -> (-xi,-eta,phi); involution, projection
/// preserving, fixes the ring limit.  Returns the same chart kind as given.
SpacetimePoint sheet_swap(const SpacetimePoint& p, double a);

/// BL form of the sheet swap: (r,theta) -> (-r, pi-theta).
inline std::array<double, 2> sheet_swap_bl(double r, double theta) {
    return {-r, kPi - theta};
}

/// Metric coefficients g_{mu nu} in BL coordinates (t,r,theta,phi), ordered
/// diag-first; signature (+,-,-,-).  Throws RingPointError on the ring where
/// the chart degenerates.
std::array<std::array<double, 4>, 4> metric_coeffs(double r, double theta, double a);

/// Peripolar coordinates of the BL point (ring at the chart origin, normal
/// along +z).  zeta = log(d2/d1) with d1,d2 the distances to the nearer and
/// antipodal ring points in the meridional plane; chi is continued across the
/// disc so that one chart covers both sheets.
Peripolar peripolar_from_bl(double r, double theta, double phi, double a);

/// Peripolar coordinates of an arbitrary Cartesian point relative to a ring
/// of radius |a| centered at ring_center with unit normal ring_normal.
/// The sheet flag tells which copy of R^3 the point lives on.
Peripolar peripolar_from_point(const std::array<double, 3>& q,
                               const std::array<double, 3>& ring_center,
                               const std::array<double, 3>& ring_normal,
                               int sheet, double a);

/// Ring-relative coordinates of the dual configuration: the same separation
/// seen from the other body.  r' = r, theta' = pi - theta, phi' = phi + pi.
std::array<double, 3> dual_frame_coords(double r, double theta, double phi);

// ---------------------------------------------------------------------------
// Small helpers shared by the field and operator modules.

/// varpi = sqrt(r^2 + a^2).
inline double varpi(double r, double a) { return std::sqrt(r * r + a * a); }

/// |rho|^2 = r^2 + a^2 cos^2(theta); vanishes only on the ring.
inline double abs_rho_sq(double r, double theta, double a) {
    const double c = std::cos(theta);
    return r * r + a * a * c * c;
}

inline double abs_rho(double r, double theta, double a) {
    return std::sqrt(abs_rho_sq(r, theta, a));
}

/// The ring locus up to the floating-point resolution of the chart: theta
/// values indistinguishable from pi/2 leave a residual |rho| of order
/// 1e-16 |a|, absorbed by the guard band.
inline bool on_ring(double r, double theta, double a) {
    const double guard = 1e-15 * std::fabs(a);
    return a != 0.0 && abs_rho_sq(r, theta, a) <= guard * guard;
}

/// Metric scale factors of the ring-centered chart (xi, eta, phi):
/// h_xi = |a| sqrt((xi^2+eta^2)/(1+xi^2)), etc.  Used by the interaction
/// quadrature and the field gradients.
struct OblateScaleFactors {
    double h_xi;
    double h_eta;
    double h_phi;
};
OblateScaleFactors oblate_scale_factors(double xi, double eta, double a);

/// Circumference-to-radius ratio of the beta-circle xi^2+eta^2 = varsigma^2
/// around the ring in a meridional section; tends to 4*pi as varsigma -> 0.
double conical_angle_ratio(double a, double varsigma);

/// Euclidean distance from the projected point to the ring circle.
double distance_to_ring(double rho, double z, double a);

} // namespace zgkn
