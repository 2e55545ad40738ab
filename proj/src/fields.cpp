#include "zgkn/fields.hpp"

#include <algorithm>
#include <cmath>

namespace zgkn {

double phi_kn(double xi, double eta, double Q, double a) {
    const double s2 = xi * xi + eta * eta;
    if (s2 == 0.0) throw RingPointError("phi_kn");
    return (Q / a) * xi / s2;
}

double psi_kn(double xi, double eta, double Q, double a) {
    const double s2 = xi * xi + eta * eta;
    if (s2 == 0.0) throw RingPointError("psi_kn");
    return (Q / a) * eta / s2;
}

FourPotential akn_gen(double r, double theta, double Q, double I, double a) {
    const double rho2 = abs_rho_sq(r, theta, a);
    if (rho2 == 0.0) throw RingPointError("akn_gen");
    const double s = std::sin(theta);
    FourPotential A;
    A.basis = FourPotential::Basis::BLCoordinate;
    A.comp[0] = -r * Q / rho2;
    A.comp[3] = r * I * kPi * a * a * s * s / rho2;
    return A;
}

FourPotential atilde(double r, double theta, double Q, double I, double a) {
    const double rho2 = abs_rho_sq(r, theta, a);
    if (rho2 == 0.0) throw RingPointError("atilde");
    const double rho = std::sqrt(rho2);
    const double w = varpi(r, a);
    const double s = std::sin(theta);
    const double anom = Q - I * kPi * a;
    FourPotential A;
    A.basis = FourPotential::Basis::CartanFrame;
    A.comp[0] = -Q * r / (rho * w) - anom * a * a * r * s * s / (w * rho2 * rho);
    A.comp[2] = -anom * a * r * s / (rho2 * rho);
    return A;
}

namespace {

double clamped_asin(double x) {
    // cosh(theta/2) >= |cos(.)| analytically; absorb roundoff just outside.
    if (x > 1.0 && x < 1.0 + 1e-14) x = 1.0;
    if (x < -1.0 && x > -1.0 - 1e-14) x = -1.0;
    return std::asin(std::clamp(x, -1.0, 1.0));
}

} // namespace

double phi_pt(const Peripolar& p, const Peripolar& source, double Qprime, double a) {
    const double dchi = p.chi - source.chi;
    const double dphi = p.phi - source.phi;
    const double cosh_theta = std::cosh(p.zeta) * std::cosh(source.zeta) -
                              std::sinh(p.zeta) * std::sinh(source.zeta) * std::cos(dphi);
    const double num = cosh_theta - std::cos(dchi);
    const double D1 = std::sqrt(std::cosh(p.zeta) - std::cos(p.chi));
    const double D2 = std::sqrt(std::cosh(source.zeta) - std::cos(source.chi));
    if (num <= 1e-12) {
        // Coincident projections: the same point when the window offset
        // vanishes, the opposite-sheet mirror otherwise.  At the mirror the
        // 1/R pole and the vanishing angular factor cancel, leaving the
        // finite limit Qprime D1 D2 / (2 pi |a|).
        if (std::cos(0.5 * dchi) > 0.0) throw CoincidentPointsError();
        return Qprime * D1 * D2 / (2.0 * kPi * std::fabs(a));
    }
    const double R = std::fabs(a) * std::sqrt(2.0) * std::sqrt(num) / (D1 * D2);
    // cosh(theta/2) = sqrt((cosh(theta)+1)/2)
    const double half_angle =
        clamped_asin(std::cos(0.5 * dchi) / std::sqrt(0.5 * (std::max(cosh_theta, 1.0) + 1.0)));
    return (Qprime / R) * (0.5 + half_angle / kPi);
}

double phi_pt_bl(double r, double theta, double phi, const Peripolar& source,
                 double Qprime, double a) {
    return phi_pt(peripolar_from_bl(r, theta, phi, a), source, Qprime, a);
}

std::array<double, 2> e_kn_cyl(double r, double theta, double Q, double a) {
    const double rho2 = abs_rho_sq(r, theta, a);
    if (rho2 == 0.0) throw RingPointError("e_kn_cyl");
    const double w = varpi(r, a);
    const double s = std::sin(theta), c = std::cos(theta);
    // phi_kn = Q r / rho2 in BL variables.
    const double f_r = Q * (a * a * c * c - r * r) / (rho2 * rho2);
    const double f_th = 2.0 * Q * r * a * a * c * s / (rho2 * rho2);
    // Inverse Jacobian of (r,theta) -> (rho,z).
    const double drho = (f_r * w * r * s + f_th * w * c) / rho2;
    const double dz = (f_r * w * w * c - f_th * r * s) / rho2;
    return {-drho, -dz};
}

double a_phys_azimuthal(double r, double theta, double I, double a) {
    const double rho2 = abs_rho_sq(r, theta, a);
    if (rho2 == 0.0) throw RingPointError("a_phys_azimuthal");
    return I * kPi * a * a * r * std::sin(theta) / (rho2 * varpi(r, a));
}

std::array<double, 2> b_kn_cyl(double r, double theta, double I, double a) {
    const double rho2 = abs_rho_sq(r, theta, a);
    if (rho2 == 0.0) throw RingPointError("b_kn_cyl");
    const double w = varpi(r, a);
    const double s = std::sin(theta), c = std::cos(theta);
    const double mu = I * kPi * a * a;
    // A_(phi) = mu * u with u = r sin(theta) / (rho2 * varpi).
    const double u = r * s / (rho2 * w);
    const double u_r = s * (rho2 * w * w - r * r * (2.0 * w * w + rho2)) /
                       (rho2 * rho2 * w * w * w);
    const double u_th = r * c * (rho2 + 2.0 * a * a * s * s) / (rho2 * rho2 * w);
    // Chain rule to (rho,z) via the inverse Jacobian, then the axisymmetric
    // curl components B_rho = -dA/dz, B_z = dA/drho + A/rho.
    const double dA_drho = mu * (u_r * w * r * s + u_th * w * c) / rho2;
    const double dA_dz = mu * (u_r * w * w * c - u_th * r * s) / rho2;
    const double rho_cyl = w * s;
    const double B_rho = -dA_dz;
    // On the axis A ~ rho * dA/drho, so A/rho -> dA/drho.
    const double B_z = (rho_cyl > 1e-300) ? dA_drho + mu * u / rho_cyl : 2.0 * dA_drho;
    return {B_rho, B_z};
}

FieldSample em_fields(double r, double theta, double phi, const ModelParams& params) {
    const auto E2 = e_kn_cyl(r, theta, params.Q, params.a);
    const auto B2 = b_kn_cyl(r, theta, params.I, params.a);
    const double cp = std::cos(phi), sp = std::sin(phi);
    FieldSample out;
    out.E = {E2[0] * cp, E2[0] * sp, E2[1]};
    out.B = {B2[0] * cp, B2[0] * sp, B2[1]};
    return out;
}

std::array<double, 3> e_pt_cart(double r, double theta, double phi,
                                const Peripolar& source, double Qprime, double a,
                                double rel_step) {
    // Five-point central differences along each ring-centered direction,
    // converted to physical components by the scale factors.  The local
    // scale is the smaller of the source separation and the ring distance.
    const double aa = std::fabs(a);
    const auto rz = os_to_cyl(r, theta, a);
    const double d_ring = distance_to_ring(rz[0], rz[1], a);
    const Peripolar here = peripolar_from_bl(r, theta, phi, a);
    const double dchi = here.chi - source.chi;
    const double cosh_t = std::cosh(here.zeta) * std::cosh(source.zeta) -
                          std::sinh(here.zeta) * std::sinh(source.zeta) *
                              std::cos(here.phi - source.phi);
    const double R_src = aa * std::sqrt(2.0) * std::sqrt(std::max(cosh_t - std::cos(dchi), 0.0)) /
                         (std::sqrt(std::cosh(here.zeta) - std::cos(here.chi)) *
                          std::sqrt(std::cosh(source.zeta) - std::cos(source.chi)));
    const double scale = std::max(std::min(d_ring, R_src), 1e-8 * aa);
    const double h = rel_step * scale;

    const double xi = r / a, eta = std::cos(theta);
    const auto sf = oblate_scale_factors(xi, eta, a);
    const int sheet = (r >= 0.0) ? ((r == 0.0 && theta > kPi / 2) ? -1 : 1) : -1;

    auto eval = [&](double x, double e, double p) {
        e = std::clamp(e, -1.0, 1.0);
        BoyerLindquist bl = ring_to_bl(RingCentered{x, e, p}, a);
        if (x == 0.0) { // keep the sheet flag meaningful at the disc
            bl.theta = (sheet > 0) ? std::min(bl.theta, kPi - bl.theta)
                                   : std::max(bl.theta, kPi - bl.theta);
        }
        return phi_pt_bl(bl.r, bl.theta, bl.phi, source, Qprime, a);
    };

    const double c1 = 8.0, c2 = -1.0, den = 12.0;
    auto deriv = [&](auto&& g, double step) {
        return (c2 * (g(2.0 * step) - g(-2.0 * step)) + c1 * (g(step) - g(-step))) /
               (den * step);
    };

    const double hxi = h / sf.h_xi;
    const double heta = std::min(h / sf.h_eta, 0.45 * (1.0 - std::fabs(eta)) + 1e-14);
    const double hphi = std::min(h / sf.h_phi, 0.1);

    const double dxi = deriv([&](double s) { return eval(xi + s, eta, phi); }, hxi);
    const double deta = deriv([&](double s) { return eval(xi, eta + s, phi); }, heta);
    const double dphi = deriv([&](double s) { return eval(xi, eta, phi + s); }, hphi);

    const double g_xi = dxi / sf.h_xi;
    const double g_eta = deta / sf.h_eta;
    const double g_phi = dphi / sf.h_phi;

    // Unit vectors of the chart directions in Cartesian components.  The xi
    // direction is the +r direction times sign(a); the unit eta direction is
    // the -theta direction (eta = cos(theta) decreases with theta).
    const double w = varpi(r, a);
    const double s = std::sin(theta), c = std::cos(theta);
    const double rho = abs_rho(r, theta, a);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const std::array<double, 3> e_r{(r / rho) * s * cp, (r / rho) * s * sp,
                                    (w / rho) * c};
    const std::array<double, 3> e_th{(w / rho) * c * cp, (w / rho) * c * sp,
                                     -(r / rho) * s};
    const std::array<double, 3> e_ph{-sp, cp, 0.0};
    const double sgn_a = (a >= 0.0) ? 1.0 : -1.0;
    std::array<double, 3> grad{};
    for (int i = 0; i < 3; ++i)
        grad[i] = g_xi * sgn_a * e_r[i] - g_eta * e_th[i] + g_phi * e_ph[i];
    return {-grad[0], -grad[1], -grad[2]};
}

double laplacian_fd(const std::function<double(double, double, double)>& f, double xi,
                    double eta, double phi, double a, double h) {
    auto d2 = [&](auto&& g, double step) {
        return (-g(2.0 * step) + 16.0 * g(step) - 30.0 * g(0.0) + 16.0 * g(-step) -
                g(-2.0 * step)) /
               (12.0 * step * step);
    };
    auto d1 = [&](auto&& g, double step) {
        return (-g(2.0 * step) + 8.0 * g(step) - 8.0 * g(-step) + g(-2.0 * step)) /
               (12.0 * step);
    };
    const double fxx = d2([&](double s) { return f(xi + s, eta, phi); }, h);
    const double fx = d1([&](double s) { return f(xi + s, eta, phi); }, h);
    const double hy = std::min(h, 0.4 * (1.0 - std::fabs(eta)) + 1e-15);
    const double fyy = d2([&](double s) { return f(xi, eta + s, phi); }, hy);
    const double fy = d1([&](double s) { return f(xi, eta + s, phi); }, hy);
    const double fpp = d2([&](double s) { return f(xi, eta, phi + s); }, h);

    const double s2 = xi * xi + eta * eta;
    const double lap_merid = ((1.0 + xi * xi) * fxx + 2.0 * xi * fx +
                              (1.0 - eta * eta) * fyy - 2.0 * eta * fy) /
                             (a * a * s2);
    const double lap_phi = fpp / (a * a * (1.0 + xi * xi) * (1.0 - eta * eta));
    return lap_merid + lap_phi;
}

double gauss_flux(const ModelParams& params, double radius, int sheet, int n_nodes) {
    // Gauss-Legendre in cos(vartheta) over the Euclidean sphere of the given
    // radius centered on the ring center, entirely within one sheet.
    std::vector<double> xg(n_nodes), wg(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n_nodes + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n_nodes; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n_nodes * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        xg[i] = x;
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n_nodes; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n_nodes * (x * p1 - p0) / (x * x - 1.0);
        wg[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }

    double flux = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
        const double mu = xg[i]; // cos(vartheta)
        const double st = std::sqrt(1.0 - mu * mu);
        const double rho_c = radius * st, z_c = radius * mu;
        const auto rt = cyl_to_os(rho_c, z_c, sheet, params.a);
        const auto E2 = e_kn_cyl(rt[0], rt[1], params.Q, params.a);
        const double En = E2[0] * st + E2[1] * mu; // E . rhat
        flux += wg[i] * En;
    }
    return 2.0 * kPi * radius * radius * flux;
}

} // namespace zgkn
