#pragma once

#include <array>

#include "zgkn/geometry.hpp"

namespace zgkn {

/// Orthonormal co-frame and frame adapted to the BL chart.  omega[a][mu]
/// holds the dy^mu coefficient of the co-frame leg omega^a; e[a][mu] the
/// d/dy^mu coefficient of the frame leg e_a; coordinates ordered
/// (t, r, theta, phi).
struct CartanFrame {
    std::array<std::array<double, 4>, 4> omega{};
    std::array<std::array<double, 4>, 4> e{};
};

CartanFrame cartan_frame(double r, double theta, double a);

/// The six scalar rotation coefficients of the adapted frame.
struct RotationCoeffs {
    double A, B, C, D, E, F;
};

RotationCoeffs rotation_coeffs(double r, double theta, double a);

/// Connection one-forms Omega_{ab} = Omega_{ab,c} omega^c assembled from the
/// scalar coefficients; antisymmetric in (a,b).  Index order [a][b][c].
std::array<std::array<std::array<double, 4>, 4>, 4>
rotation_one_forms(const RotationCoeffs& rc);

/// Cartesian images of the three spacelike frame legs under the projection,
/// orthonormalized (the leg along the symmetry direction has its timelike
/// part dropped and is rescaled to unit length).  Rows: e1, e2, e3 images.
std::array<std::array<double, 3>, 3> frame_triad_cartesian(double r, double theta,
                                                           double phi, double a);

} // namespace zgkn
