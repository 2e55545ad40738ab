#include "zgkn/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace zgkn {

std::array<double, 2> os_to_cyl(double r, double theta, double a) {
    const double w = varpi(r, a);
    return {w * std::sin(theta), r * std::cos(theta)};
}

std::array<double, 2> cyl_to_os(double rho, double z, int sheet, double a) {
    const double aa = std::fabs(a);
    if (rho == aa && z == 0.0 && a != 0.0) throw RingPointError("cyl_to_os");
    // r^2 is the positive root of (r^2)^2 - D r^2 - a^2 z^2 = 0 with
    // D = rho^2 + z^2 - a^2; the conjugate form avoids cancellation for D<0.
    const double D = rho * rho + z * z - a * a;
    const double q = std::sqrt(D * D + 4.0 * a * a * z * z);
    double r2;
    if (D >= 0.0)
        r2 = 0.5 * (D + q);
    else
        r2 = (q - D > 0.0) ? 2.0 * a * a * z * z / (q - D) : 0.0;
    double r = std::sqrt(std::max(r2, 0.0));
    if (sheet < 0) r = -r;

    double theta;
    if (r != 0.0) {
        const double s = std::clamp(rho / varpi(r, a), 0.0, 1.0);
        theta = std::atan2(s, z / r);
    } else {
        // On the open disc the polar angle is fixed by the approach side.
        const double s = (aa > 0.0) ? std::clamp(rho / aa, 0.0, 1.0) : 0.0;
        theta = (sheet >= 0) ? std::asin(s) : kPi - std::asin(s);
    }
    return {r, theta};
}

RingCentered bl_to_ring(const BoyerLindquist& p, double a) {
    return {p.r / a, std::cos(p.theta), p.phi};
}

BoyerLindquist ring_to_bl(const RingCentered& p, double a) {
    return {p.xi * a, std::acos(std::clamp(p.eta, -1.0, 1.0)), p.phi};
}

Cylindrical bl_to_cyl(const BoyerLindquist& p, double a) {
    const auto rz = os_to_cyl(p.r, p.theta, a);
    const int sheet = (p.r > 0.0) ? 1 : (p.r < 0.0 ? -1 : (p.theta <= kPi / 2 ? 1 : -1));
    return {rz[0], rz[1], p.phi, sheet};
}

BoyerLindquist cyl_to_bl(const Cylindrical& p, double a) {
    const auto rt = cyl_to_os(p.rho, p.z, p.sheet, a);
    return {rt[0], rt[1], p.phi};
}

std::array<double, 3> project_cartesian(double r, double theta, double phi, double a) {
    const auto rz = os_to_cyl(r, theta, a);
    return {rz[0] * std::cos(phi), rz[0] * std::sin(phi), rz[1]};
}

namespace {

double wrap_phi(double phi) {
    double p = std::fmod(phi, 2.0 * kPi);
    if (p < 0.0) p += 2.0 * kPi;
    return p;
}

} // namespace

SpacetimePoint sheet_swap(const SpacetimePoint& p, double a) {
    SpacetimePoint out;
    out.t = p.t;
    if (const auto* bl = std::get_if<BoyerLindquist>(&p.coords)) {
        out.coords = BoyerLindquist{-bl->r, kPi - bl->theta, bl->phi};
    } else if (const auto* rc = std::get_if<RingCentered>(&p.coords)) {
        out.coords = RingCentered{-rc->xi, -rc->eta, rc->phi};
    } else if (const auto* cy = std::get_if<Cylindrical>(&p.coords)) {
        out.coords = Cylindrical{cy->rho, cy->z, cy->phi, -cy->sheet};
    } else {
        const auto& pp = std::get<Peripolar>(p.coords);
        // Crossing to the other sheet shifts the chi window by 2*pi.
        const double chi = (pp.chi <= kPi) ? pp.chi + 2.0 * kPi : pp.chi - 2.0 * kPi;
        out.coords = Peripolar{pp.zeta, chi, pp.phi};
    }
    (void)a;
    return out;
}

std::array<std::array<double, 4>, 4> metric_coeffs(double r, double theta, double a) {
    if (on_ring(r, theta, a)) throw RingPointError("metric_coeffs");
    const double w2 = r * r + a * a;
    const double s = std::sin(theta);
    const double rho2 = abs_rho_sq(r, theta, a);
    std::array<std::array<double, 4>, 4> g{};
    g[0][0] = 1.0;
    g[1][1] = -rho2 / w2;
    g[2][2] = -rho2;
    g[3][3] = -w2 * s * s;
    return g;
}

namespace {

// Signed meridional angle between the rays from q to the antipodal ring
// points; positive above the ring plane.  +/-pi on the open disc.
double meridional_angle(double rho, double z, double a) {
    const double aa = std::fabs(a);
    const double th1 = std::atan2(z, rho - aa);
    const double th2 = std::atan2(z, rho + aa);
    return th1 - th2;
}

} // namespace

Peripolar peripolar_from_bl(double r, double theta, double phi, double a) {
    if (on_ring(r, theta, a)) throw RingPointError("peripolar_from_bl");
    const double aa = std::fabs(a);
    const auto rz = os_to_cyl(r, theta, a);
    const double rho = rz[0], z = rz[1];
    const double d1 = std::hypot(rho - aa, z);
    const double d2 = std::hypot(rho + aa, z);
    if (d1 == 0.0) throw RingPointError("peripolar_from_bl");
    const double zeta = std::log(d2 / d1);
    double chi = meridional_angle(rho, z, a);
    const int sheet = (r > 0.0) ? 1 : (r < 0.0 ? -1 : (theta <= kPi / 2 ? 1 : -1));
    // Points exactly on the disc sit at the window edge; chi = pi on the
    // upper side (continued to 3*pi on the other sheet).  The two seam
    // representatives -pi and 3*pi agree modulo the 4*pi period.
    if (r == 0.0) chi = kPi;
    if (sheet < 0) chi += 2.0 * kPi;
    return {zeta, chi, wrap_phi(phi)};
}

Peripolar peripolar_from_point(const std::array<double, 3>& q,
                               const std::array<double, 3>& ring_center,
                               const std::array<double, 3>& ring_normal, int sheet,
                               double a) {
    const std::array<double, 3> d{q[0] - ring_center[0], q[1] - ring_center[1],
                                  q[2] - ring_center[2]};
    const double nn = std::sqrt(ring_normal[0] * ring_normal[0] +
                                ring_normal[1] * ring_normal[1] +
                                ring_normal[2] * ring_normal[2]);
    const std::array<double, 3> n{ring_normal[0] / nn, ring_normal[1] / nn,
                                  ring_normal[2] / nn};
    const double z = d[0] * n[0] + d[1] * n[1] + d[2] * n[2];
    const std::array<double, 3> perp{d[0] - z * n[0], d[1] - z * n[1], d[2] - z * n[2]};
    const double rho = std::sqrt(perp[0] * perp[0] + perp[1] * perp[1] + perp[2] * perp[2]);
    // Azimuth about the ring axis, measured in a fixed frame orthogonal to n.
    std::array<double, 3> e1{1.0, 0.0, 0.0};
    if (std::fabs(n[0]) > 0.9) e1 = {0.0, 1.0, 0.0};
    const double e1n = e1[0] * n[0] + e1[1] * n[1] + e1[2] * n[2];
    for (int i = 0; i < 3; ++i) e1[i] -= e1n * n[i];
    const double e1len = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (int i = 0; i < 3; ++i) e1[i] /= e1len;
    const std::array<double, 3> e2{n[1] * e1[2] - n[2] * e1[1],
                                   n[2] * e1[0] - n[0] * e1[2],
                                   n[0] * e1[1] - n[1] * e1[0]};
    const double phi =
        std::atan2(perp[0] * e2[0] + perp[1] * e2[1] + perp[2] * e2[2],
                   perp[0] * e1[0] + perp[1] * e1[1] + perp[2] * e1[2]);

    const double aa = std::fabs(a);
    const double d1 = std::hypot(rho - aa, z);
    if (d1 == 0.0) throw RingPointError("peripolar_from_point");
    const double d2 = std::hypot(rho + aa, z);
    double chi = meridional_angle(rho, z, a);
    if (z == 0.0 && rho < aa) chi = kPi;
    if (sheet < 0) chi += 2.0 * kPi;
    return {std::log(d2 / d1), chi, wrap_phi(phi)};
}

std::array<double, 3> dual_frame_coords(double r, double theta, double phi) {
    return {r, kPi - theta, wrap_phi(phi + kPi)};
}

OblateScaleFactors oblate_scale_factors(double xi, double eta, double a) {
    const double aa = std::fabs(a);
    const double s2 = xi * xi + eta * eta;
    return {aa * std::sqrt(s2 / (1.0 + xi * xi)),
            aa * std::sqrt(s2 / (1.0 - eta * eta)),
            aa * std::sqrt((1.0 + xi * xi) * (1.0 - eta * eta))};
}

double distance_to_ring(double rho, double z, double a) {
    return std::hypot(rho - std::fabs(a), z);
}

namespace {

// Meridional line element along a curve (xi(beta), eta(beta)):
// ds = |a| sqrt(xi^2+eta^2) sqrt(xi'^2/(1+xi^2) + eta'^2/(1-eta^2)) dbeta.
double meridional_speed(double a, double xi, double eta, double dxi, double deta) {
    const double s2 = xi * xi + eta * eta;
    return std::fabs(a) * std::sqrt(s2) *
           std::sqrt(dxi * dxi / (1.0 + xi * xi) + deta * deta / (1.0 - eta * eta));
}

} // namespace

double conical_angle_ratio(double a, double varsigma) {
    // 64-point Gauss-Legendre nodes via Newton on Legendre polynomials.
    constexpr int n = 64;
    static thread_local std::array<double, n> xg{}, wg{};
    static thread_local bool init = false;
    if (!init) {
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) break;
            }
            xg[i] = x;
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            wg[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        init = true;
    }

    // Circumference of the beta-circle of polar radius varsigma.
    double circ = 0.0;
    for (int i = 0; i < n; ++i) {
        const double beta = kPi * (xg[i] + 1.0); // [0, 2pi]
        const double xi = varsigma * std::cos(beta);
        const double eta = varsigma * std::sin(beta);
        circ += wg[i] * kPi *
                meridional_speed(a, xi, eta, -varsigma * std::sin(beta),
                                 varsigma * std::cos(beta));
    }
    // Mean geodesic radius, averaging the ray length over beta.
    double rad = 0.0;
    for (int i = 0; i < n; ++i) {
        const double beta = kPi * (xg[i] + 1.0);
        const double cb = std::cos(beta), sb = std::sin(beta);
        double len = 0.0;
        for (int j = 0; j < n; ++j) {
            const double s = 0.5 * varsigma * (xg[j] + 1.0);
            len += wg[j] * 0.5 * varsigma * meridional_speed(a, s * cb, s * sb, cb, sb);
        }
        rad += wg[i] * kPi * len / (2.0 * kPi);
    }
    return circ / rad;
}

} // namespace zgkn
