#pragma once

#include <Eigen/Dense>

#include "zgkn/dirac_matrices.hpp"
#include "zgkn/spectral.hpp"

namespace zgkn {

using Vec2c = Eigen::Vector2cd;
using Vec3d = Eigen::Vector3d;

/// Flip map f(z1,z2) = (-z2*, z1*); reverses the polarization vector.
Vec2c flip(const Vec2c& psi);

/// Polar data of a two-spinor: amplitude, Euler angles (ZYZ convention) and
/// the attached orthonormal triad {l, m, n} with n = psi^dag sigma psi / |psi|^2.
/// Near the degenerate Euler extraction (Theta ~ 0 or pi) the full phase is
/// assigned to Phi and Omega is zeroed.
struct CayleyKlein {
    double R = 0.0;
    double Phi = 0.0;
    double Theta = 0.0;
    double Omega = 0.0;
    Vec3d l, m, n;
};

CayleyKlein cayley_klein(const Vec2c& psi);

/// Rebuild the spinor from its polar data.
Vec2c ck_spinor(double R, double Phi, double Theta, double Omega);

/// Polar decomposition of a C^4 bi-spinor: overall amplitude and phase,
/// the mixing angle Sigma between the two-spinor halves, the relative phase
/// Phi, and the Euler pairs of each half.
struct GeneralizedCK {
    double R = 0.0;
    double S = 0.0;
    double Sigma = 0.0;
    double Phi = 0.0;
    double Theta1 = 0.0, Omega1 = 0.0;
    double Theta2 = 0.0, Omega2 = 0.0;
};

GeneralizedCK generalized_ck(const Vec4c& Psi);
Vec4c assemble_ck(const GeneralizedCK& p);

/// Orientation data of a bi-spinor.  n is the (sub-unit) orientation vector;
/// the normalized triad uses l = n1 x n2 when that cross product is
/// non-degenerate.  The primed pair is the flip-map-based alternative, which
/// is orthogonal only in the degenerate case and is kept for diagnostics.
struct OrientationFrame {
    Vec3d n;       // cos^2(Sigma/2) n1 + sin^2(Sigma/2) n2, |n| <= 1
    Vec3d n_hat, l_hat, m_hat;
    Vec3d l_primed, m_primed;
    bool degenerate = false;
};

OrientationFrame orientation(const Vec4c& Psi);

struct CurrentSample {
    double rho = 0.0;            // j^0 = Psi^dag Psi
    Vec3d j;                     // spatial current, frame components
    Vec3d v;                     // j / rho
    double minkowski_norm = 0.0; // eta_{mu nu} j^mu j^nu >= 0
    double gamma_factor = 0.0;   // rho / sqrt(eta j j), when timelike
    bool null_current = false;
};

CurrentSample current(const Vec4c& Psi);

inline Vec3d velocity(const Vec4c& Psi) { return current(Psi).v; }

/// Evaluate a separated eigenstate as a bi-spinor at a BL event.
/// Interpolates the phase/amplitude tables; the exponential tails beyond the
/// integration range are extended analytically, but far outside the tables
/// the request is refused.
Vec4c assemble_eigenstate(const SeparatedState& st, double t, double r, double theta,
                          double phi);

} // namespace zgkn
