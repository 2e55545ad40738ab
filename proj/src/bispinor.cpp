#include "zgkn/bispinor.hpp"

#include <cmath>

namespace zgkn {

namespace {
constexpr double kDegenerate = 1e-10;
}

Vec2c flip(const Vec2c& psi) {
    return Vec2c(-std::conj(psi(1)), std::conj(psi(0)));
}

CayleyKlein cayley_klein(const Vec2c& psi) {
    const double R2 = std::norm(psi(0)) + std::norm(psi(1));
    if (R2 == 0.0) throw ZeroSpinorError();
    CayleyKlein ck;
    ck.R = std::sqrt(R2);
    const double a1 = std::abs(psi(0)), a2 = std::abs(psi(1));
    ck.Theta = 2.0 * std::atan2(a2, a1);
    if (a1 > kDegenerate * ck.R && a2 > kDegenerate * ck.R) {
        // No branch reduction here: wrapping Omega by 2 pi would flip the
        // overall spinor sign through the half angles.
        const double p1 = std::arg(psi(0)), p2 = std::arg(psi(1));
        ck.Omega = p2 - p1;
        ck.Phi = p1 + p2;
    } else if (a2 <= kDegenerate * ck.R) {
        ck.Phi = 2.0 * std::arg(psi(0)); // Theta ~ 0: all phase in Phi
        ck.Omega = 0.0;
    } else {
        ck.Phi = 2.0 * std::arg(psi(1)); // Theta ~ pi
        ck.Omega = 0.0;
    }

    const cplx z1 = psi(0) / ck.R, z2 = psi(1) / ck.R;
    const cplx w = std::conj(z1) * z2; // first slot of psi^dag sigma psi is conjugated
    ck.n = Vec3d(2.0 * std::real(w), 2.0 * std::imag(w), std::norm(z1) - std::norm(z2));
    const cplx lm0 = z1 * z1 - z2 * z2;
    const cplx lm1 = cplx(0, 1) * (z1 * z1 + z2 * z2);
    const cplx lm2 = -2.0 * z1 * z2;
    ck.l = Vec3d(std::real(lm0), std::real(lm1), std::real(lm2));
    ck.m = Vec3d(std::imag(lm0), std::imag(lm1), std::imag(lm2));
    return ck;
}

Vec2c ck_spinor(double R, double Phi, double Theta, double Omega) {
    const cplx e1 = std::polar(1.0, 0.5 * (Phi - Omega));
    const cplx e2 = std::polar(1.0, 0.5 * (Phi + Omega));
    return Vec2c(R * std::cos(0.5 * Theta) * e1, R * std::sin(0.5 * Theta) * e2);
}

GeneralizedCK generalized_ck(const Vec4c& Psi) {
    const double n2 = Psi.squaredNorm();
    if (n2 == 0.0) throw ZeroSpinorError();
    const Vec2c p1 = Psi.head<2>(), p2 = Psi.tail<2>();
    const double R1 = p1.norm(), R2 = p2.norm();
    GeneralizedCK g;
    g.R = std::sqrt(n2);
    g.Sigma = 2.0 * std::atan2(R2, R1);

    double Phi1 = 0.0, Phi2 = 0.0;
    if (R1 > kDegenerate * g.R) {
        const CayleyKlein c1 = cayley_klein(p1);
        g.Theta1 = c1.Theta;
        g.Omega1 = c1.Omega;
        Phi1 = c1.Phi;
    }
    if (R2 > kDegenerate * g.R) {
        const CayleyKlein c2 = cayley_klein(p2);
        g.Theta2 = c2.Theta;
        g.Omega2 = c2.Omega;
        Phi2 = c2.Phi;
    }
    if (R1 <= kDegenerate * g.R) Phi1 = Phi2; // dead angles track the live half
    if (R2 <= kDegenerate * g.R) Phi2 = Phi1;
    // Each half carries the phase Phi_i/2, so the overall/relative split is
    // S = (Phi1+Phi2)/4 and Phi = (Phi2-Phi1)/2 for an exact reassembly.
    g.S = 0.25 * (Phi2 + Phi1);
    g.Phi = 0.5 * (Phi2 - Phi1);
    return g;
}

Vec4c assemble_ck(const GeneralizedCK& g) {
    const cplx pref = std::polar(g.R, g.S);
    const cplx up = std::polar(std::cos(0.5 * g.Sigma), -0.5 * g.Phi);
    const cplx dn = std::polar(std::sin(0.5 * g.Sigma), 0.5 * g.Phi);
    Vec4c out;
    out(0) = pref * up * std::cos(0.5 * g.Theta1) * std::polar(1.0, -0.5 * g.Omega1);
    out(1) = pref * up * std::sin(0.5 * g.Theta1) * std::polar(1.0, 0.5 * g.Omega1);
    out(2) = pref * dn * std::cos(0.5 * g.Theta2) * std::polar(1.0, -0.5 * g.Omega2);
    out(3) = pref * dn * std::sin(0.5 * g.Theta2) * std::polar(1.0, 0.5 * g.Omega2);
    return out;
}

OrientationFrame orientation(const Vec4c& Psi) {
    const double n2 = Psi.squaredNorm();
    if (n2 == 0.0) throw ZeroSpinorError();
    OrientationFrame f;
    for (int k = 0; k < 3; ++k)
        f.n(k) = std::real(Psi.dot(dirac::spin(k + 1) * Psi)) / n2;

    const Vec2c p1 = Psi.head<2>(), p2 = Psi.tail<2>();
    const double R1 = p1.norm(), R2 = p2.norm();
    Vec3d n1 = Vec3d::UnitZ(), n2v = Vec3d::UnitZ();
    Vec3d l1 = Vec3d::UnitX(), l2 = Vec3d::UnitX();
    Vec3d m1 = Vec3d::UnitY(), m2 = Vec3d::UnitY();
    if (R1 > 0.0) {
        const CayleyKlein c = cayley_klein(p1);
        n1 = c.n;
        l1 = c.l;
        m1 = c.m;
    }
    if (R2 > 0.0) {
        const CayleyKlein c = cayley_klein(p2);
        n2v = c.n;
        l2 = c.l;
        m2 = c.m;
    }
    const double c2 = R1 * R1 / n2, s2 = R2 * R2 / n2;
    f.l_primed = c2 * l1 + s2 * l2;
    f.m_primed = c2 * m1 + s2 * m2;

    const Vec3d cross = n1.cross(n2v);
    if (cross.norm() < kDegenerate || f.n.norm() < kDegenerate) {
        f.degenerate = true;
        f.n_hat = (f.n.norm() >= kDegenerate) ? f.n.normalized() : n1;
        // fall back to the sub-spinor triad
        f.l_hat = l1;
        f.m_hat = f.n_hat.cross(f.l_hat);
        const double mm = f.m_hat.norm();
        if (mm > 0.0) f.m_hat /= mm;
    } else {
        f.degenerate = false;
        f.n_hat = f.n.normalized();
        f.l_hat = cross.normalized();
        f.m_hat = f.n_hat.cross(f.l_hat);
    }
    return f;
}

CurrentSample current(const Vec4c& Psi) {
    const double rho = Psi.squaredNorm();
    if (rho == 0.0) throw ZeroSpinorError();
    CurrentSample cs;
    cs.rho = rho;
    for (int k = 0; k < 3; ++k)
        cs.j(k) = std::real(Psi.dot(dirac::alpha(k + 1) * Psi));
    cs.v = cs.j / rho;
    cs.minkowski_norm = rho * rho - cs.j.squaredNorm();
    cs.null_current = cs.minkowski_norm < 1e-12 * rho * rho;
    cs.gamma_factor = cs.null_current
                          ? std::numeric_limits<double>::infinity()
                          : rho / std::sqrt(cs.minkowski_norm);
    return cs;
}

Vec4c assemble_eigenstate(const SeparatedState& st, double t, double r, double theta,
                          double phi) {
    if (std::fabs(r) > 1.5 * st.r_max)
        throw OutOfGridError("assemble_eigenstate: |r| far beyond the integration range");
    const double lr = st.lnR_at(r);
    const double ls = st.lnS_at(theta);
    const double Om = st.Omega_at(r);
    const double Th = st.Theta_at(theta);
    const double amp = st.norm_const * std::exp(lr + ls);
    const cplx mode = std::polar(1.0, -(st.E * t - st.kappa * phi));
    const cplx em = std::polar(1.0, -0.5 * Om), ep = std::polar(1.0, 0.5 * Om);
    const double ch = std::cos(0.5 * Th), sh = std::sin(0.5 * Th);
    Vec4c out;
    out(0) = amp * mode * ch * em;
    out(1) = amp * mode * sh * ep;
    out(2) = amp * mode * ch * ep;
    out(3) = amp * mode * sh * em;
    return out;
}

} // namespace zgkn
