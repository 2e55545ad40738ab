#include "zgkn/frame.hpp"

#include <cmath>

namespace zgkn {

CartanFrame cartan_frame(double r, double theta, double a) {
    if (on_ring(r, theta, a)) throw RingPointError("cartan_frame");
    const double w = varpi(r, a);
    const double rho = abs_rho(r, theta, a);
    const double s = std::sin(theta);

    CartanFrame f;
    // co-frame
    f.omega[0][0] = w / rho;
    f.omega[0][3] = -(w / rho) * a * s * s;
    f.omega[1][2] = rho;
    f.omega[2][0] = -(s / rho) * a;
    f.omega[2][3] = (s / rho) * w * w;
    f.omega[3][1] = rho / w;
    // frame
    f.e[0][0] = w / rho;
    f.e[0][3] = a / (w * rho);
    f.e[1][2] = 1.0 / rho;
    f.e[2][0] = a * s / rho;
    f.e[2][3] = 1.0 / (rho * s);
    f.e[3][1] = w / rho;
    return f;
}

RotationCoeffs rotation_coeffs(double r, double theta, double a) {
    if (on_ring(r, theta, a)) throw RingPointError("rotation_coeffs");
    const double w = varpi(r, a);
    const double rho2 = abs_rho_sq(r, theta, a);
    const double rho3 = rho2 * std::sqrt(rho2);
    const double s = std::sin(theta), c = std::cos(theta);
    RotationCoeffs rc;
    rc.A = a * a * r * s * s / (w * rho3);
    rc.B = a * r * s / rho3;
    rc.C = a * a * s * c / rho3;
    rc.D = a * c * w / rho3;
    rc.E = r * w / rho3;
    rc.F = w * w * c / (rho3 * s);
    return rc;
}

std::array<std::array<std::array<double, 4>, 4>, 4>
rotation_one_forms(const RotationCoeffs& rc) {
    std::array<std::array<std::array<double, 4>, 4>, 4> O{};
    auto set = [&](int a, int b, int leg, double v) {
        O[a][b][leg] += v;
        O[b][a][leg] -= v;
    };
    set(0, 1, 0, -rc.C);
    set(0, 1, 2, -rc.D);
    set(0, 2, 1, rc.D);
    set(0, 2, 3, -rc.B);
    set(0, 3, 0, -rc.A);
    set(0, 3, 2, -rc.B);
    set(1, 2, 0, rc.D);
    set(1, 2, 2, rc.F);
    set(1, 3, 1, -rc.E);
    set(1, 3, 3, -rc.C);
    set(2, 3, 0, -rc.B);
    set(2, 3, 2, -rc.E);
    return O;
}

std::array<std::array<double, 3>, 3> frame_triad_cartesian(double r, double theta,
                                                           double phi, double a) {
    const double w = varpi(r, a);
    const double rho = abs_rho(r, theta, a);
    const double s = std::sin(theta), c = std::cos(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    // e1 ~ theta direction, e2 ~ azimuthal direction, e3 ~ r direction.
    return {{{(w / rho) * c * cp, (w / rho) * c * sp, -(r / rho) * s},
             {-sp, cp, 0.0},
             {(r / rho) * s * cp, (r / rho) * s * sp, (w / rho) * c}}};
}

} // namespace zgkn
