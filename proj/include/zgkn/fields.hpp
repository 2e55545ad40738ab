#pragma once

#include <array>
#include <functional>

#include "zgkn/geometry.hpp"

namespace zgkn {

/// Electromagnetic one-form components, tagged with the basis they refer to.
/// In the BL coordinate basis only A_t and A_phi are nonzero; in the Cartan
/// frame basis only the 0 and 2 legs.  Note A_t = -phi_kn for the pure ring
/// field: the one-form convention keeps the ring charge positive as seen by
/// the scalar potential.
struct FourPotential {
    enum class Basis { BLCoordinate, CartanFrame };
    std::array<double, 4> comp{}; // (t,r,theta,phi) or frame legs 0..3
    Basis basis = Basis::BLCoordinate;
};

/// Electric and magnetic fields at the projection of a manifold point,
/// in Cartesian components of the base R^3.
struct FieldSample {
    std::array<double, 3> E{};
    std::array<double, 3> B{};
};

/// Electric potential of the ring field, (Q/a) xi/(xi^2+eta^2).
/// Antisymmetric under the toggle map (xi,eta) -> (-xi,-eta).
double phi_kn(double xi, double eta, double Q, double a);

/// Magnetic scalar potential (Q/a) eta/(xi^2+eta^2).  Valid as a gradient
/// representation of B only away from the ring; near the ring use the curl
/// of the vector potential instead.
double psi_kn(double xi, double eta, double Q, double a);

/// Generalized ring potential in the BL coordinate basis, with electric
/// charge Q and magnetic moment I*pi*a^2:
/// A = -r/(r^2+a^2 cos^2(theta)) (Q dt - I*pi*a^2 sin^2(theta) dphi).
FourPotential akn_gen(double r, double theta, double Q, double I, double a);

/// The same potential in the Cartan frame basis; legs 1 and 3 vanish, and
/// leg 2 vanishes exactly when Q = I*pi*a.
FourPotential atilde(double r, double theta, double Q, double I, double a);

/// Double-sheeted point-charge potential in peripolar coordinates.
/// Single-valued on the whole manifold; Coulombic near the source and zero
/// at the mirror point through the ring.
double phi_pt(const Peripolar& p, const Peripolar& source, double Qprime, double a);

/// Convenience overload evaluating at a BL point (ring at origin, axis +z).
double phi_pt_bl(double r, double theta, double phi, const Peripolar& source,
                 double Qprime, double a);

/// Analytic gradient machinery for the ring fields.

/// E = -grad(phi_kn) in cylindrical components (E_rho, E_z); no azimuthal
/// component by axisymmetry.
std::array<double, 2> e_kn_cyl(double r, double theta, double Q, double a);

/// Physical azimuthal component of the magnetic vector potential,
/// A_(phi) = I*pi*a^2 r sin(theta) / ((r^2+a^2 cos^2 theta) sqrt(r^2+a^2)).
double a_phys_azimuthal(double r, double theta, double I, double a);

/// B = curl(A) in cylindrical components (B_rho, B_z), from the analytic
/// derivatives of the vector potential.
std::array<double, 2> b_kn_cyl(double r, double theta, double I, double a);

/// Ring fields (E from -grad phi_kn, B from curl A) in Cartesian components.
FieldSample em_fields(double r, double theta, double phi, const ModelParams& params);

/// Point-charge field E_pt = -grad(phi_pt) by high-order central differences
/// in the ring-centered chart, with steps scaled to the local geometry.
/// The phi derivative is taken along physical arc length so the axis limit
/// stays regular.
std::array<double, 3> e_pt_cart(double r, double theta, double phi,
                                const Peripolar& source, double Qprime, double a,
                                double rel_step = 1e-6);

/// Finite-difference Laplace-Beltrami operator in the ring-centered chart;
/// used to check harmonicity of potentials away from their sources.
double laplacian_fd(const std::function<double(double, double, double)>& f, double xi,
                    double eta, double phi, double a, double h);

/// Flux of the ring electric field through the Euclidean sphere of radius
/// radius in the given sheet, by Gauss-Legendre quadrature; tends to
/// +/- 4 pi Q on the two sheets.
double gauss_flux(const ModelParams& params, double radius, int sheet, int n_nodes = 64);

} // namespace zgkn
