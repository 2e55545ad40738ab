#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "zgkn/fields.hpp"

using namespace zgkn;

TEST_CASE("ring potentials") {
    CHECK(phi_kn(1.0, 0.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(psi_kn(0.0, 1.0, 2.0, 1.0) == doctest::Approx(2.0));
    CHECK(psi_kn(1.3, 0.0, 2.0, 1.0) == 0.0);

    // monopole asymptotics
    CHECK(phi_kn(10.0, 0.0, 1.0, 1.0) == doctest::Approx(0.1));
    for (double xi : {10.0, 20.0, 40.0}) {
        const double diff = std::fabs(phi_kn(xi, 0.7, 1.0, 1.0) - 1.0 / xi);
        CHECK(diff < 1.0 / (xi * xi * xi) * 2.0);
    }

    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double xi = u(rng), eta = u(rng) / 3.0;
        CHECK(phi_kn(-xi, -eta, 1.7, 0.9) == -phi_kn(xi, eta, 1.7, 0.9));
        CHECK(psi_kn(-xi, -eta, 1.7, 0.9) == -psi_kn(xi, eta, 1.7, 0.9));
    }
    CHECK_THROWS_AS(phi_kn(0.0, 0.0, 1.0, 1.0), RingPointError);
}

TEST_CASE("generalized vector potential in the coordinate basis") {
    const double a = 1.2, Q = 0.8;
    SUBCASE("moment identity recovers the pure ring potential") {
        const double I = Q / (kPi * a);
        const auto A = akn_gen(1.4, 0.8, Q, I, a);
        // pure form: -r/(r^2+a^2 cos^2) (Q dt - Q a sin^2 dphi)
        const double rho2 = abs_rho_sq(1.4, 0.8, a);
        CHECK(A.comp[0] == doctest::Approx(-1.4 * Q / rho2).epsilon(1e-14));
        CHECK(A.comp[3] ==
              doctest::Approx(1.4 * Q * a * std::sin(0.8) * std::sin(0.8) / rho2)
                  .epsilon(1e-14));
    }
    SUBCASE("monopole asymptotics on the two sheets") {
        for (double r : {300.0, 1000.0}) {
            const auto A = akn_gen(r, 0.0, Q, 0.3, a);
            CHECK(std::fabs(A.comp[0] + Q / r) < 2.0 * Q * a * a / (r * r * r));
            const auto Am = akn_gen(-r, 0.0, Q, 0.3, a);
            CHECK(std::fabs(Am.comp[0] - Q / r) < 2.0 * Q * a * a / (r * r * r));
        }
    }
}

TEST_CASE("frame-basis potential") {
    const double a = 1.0, Q = 0.6;
    SUBCASE("separable case leaves only the time leg") {
        const double I = Q / (kPi * a);
        const auto A = atilde(1.0, kPi / 2, Q, I, a);
        CHECK(A.comp[0] == doctest::Approx(-Q / std::sqrt(2.0)).epsilon(1e-14));
        CHECK(A.comp[1] == 0.0);
        CHECK(A.comp[2] == 0.0);
        CHECK(A.comp[3] == 0.0);
    }
    SUBCASE("axis kills the transverse leg regardless of the anomaly") {
        const auto A = atilde(0.7, 0.0, Q, 0.0, a);
        CHECK(A.comp[2] == 0.0);
    }
    SUBCASE("near-ring divergence rate of the anomalous leg") {
        // |A_2| ~ |rho|^{-2} on the equator as r -> 0
        std::vector<double> lr, lA;
        for (double r : {1e-2, 1e-3, 1e-4}) {
            const auto A = atilde(r, kPi / 2, Q, 0.0, a);
            lr.push_back(std::log(r));
            lA.push_back(std::log(std::fabs(A.comp[2])));
        }
        const double slope = (lA[2] - lA[0]) / (lr[2] - lr[0]);
        CHECK(slope == doctest::Approx(-2.0).epsilon(0.01));
    }
}

TEST_CASE("double-sheeted point potential") {
    const double a = 1.0, Qp = 1.0;
    const Peripolar src = peripolar_from_bl(1.3, 1.1, 0.4, a);

    SUBCASE("Coulomb prefactor in the coincidence direction") {
        // same chi and phi, zeta -> zeta_src: full Coulomb 1/R
        for (double dr : {0.1, 0.02}) {
            const auto p = peripolar_from_bl(1.3 + dr, 1.1, 0.4, a);
            const double val = phi_pt(p, src, Qp, a);
            // R from the closed form of the distance
            const auto x1 = project_cartesian(1.3 + dr, 1.1, 0.4, a);
            const auto x0 = project_cartesian(1.3, 1.1, 0.4, a);
            const double R = std::sqrt((x1[0] - x0[0]) * (x1[0] - x0[0]) +
                                       (x1[1] - x0[1]) * (x1[1] - x0[1]) +
                                       (x1[2] - x0[2]) * (x1[2] - x0[2]));
            CHECK(val * R / Qp == doctest::Approx(1.0).epsilon(0.25 * dr + 1e-3));
        }
    }
    SUBCASE("mirror point through the ring: attenuated finite value") {
        // The 1/R pole and the vanishing angular factor cancel at the
        // opposite-sheet mirror of the source; the value there continues the
        // nearby values and is far below the Coulomb scale.
        Peripolar mirror = src;
        mirror.chi += 2.0 * kPi;
        const double v0 = phi_pt(mirror, src, Qp, a);
        Peripolar near = mirror;
        near.zeta += 1e-5;
        CHECK(v0 == doctest::Approx(phi_pt(near, src, Qp, a)).epsilon(1e-4));
        near = mirror;
        near.chi += 1e-5;
        CHECK(v0 == doctest::Approx(phi_pt(near, src, Qp, a)).epsilon(1e-4));
    }
    SUBCASE("harmonic away from the source") {
        auto f = [&](double xi, double eta, double phi) {
            const BoyerLindquist bl = ring_to_bl(RingCentered{xi, eta, phi}, a);
            return phi_pt_bl(bl.r, bl.theta, bl.phi, src, Qp, a);
        };
        for (auto [xi, eta, phi] : {std::array<double, 3>{0.4, 0.3, 2.0},
                                    std::array<double, 3>{-0.9, -0.2, 1.0},
                                    std::array<double, 3>{2.2, -0.5, 5.0}}) {
            const double h = 1e-3;
            const double lap = laplacian_fd(f, xi, eta, phi, a, h);
            const double scale = std::fabs(f(xi, eta, phi));
            CHECK(std::fabs(lap) <= 1e-6 * scale / (h * h));
        }
    }
    CHECK_THROWS_AS(phi_pt(src, src, Qp, a), CoincidentPointsError);
}

TEST_CASE("field samples from the analytic gradients") {
    ModelParams p;
    p.a = 0.9;
    p.Q = 1.4;
    p.I = p.Q / (kPi * p.a);

    SUBCASE("far zone: monopole electric field and dipole moment") {
        const double r = 1000.0 * p.a;
        const auto fs = em_fields(r, kPi / 2, 0.0, p);
        const double Emag = std::sqrt(fs.E[0] * fs.E[0] + fs.E[1] * fs.E[1] +
                                      fs.E[2] * fs.E[2]);
        CHECK(Emag * r * r / p.Q == doctest::Approx(1.0).epsilon(1e-4));
        const auto fa = em_fields(r, 1e-5, 0.0, p);
        const double mu_est = 0.5 * fa.B[2] * r * r * r;
        CHECK(mu_est == doctest::Approx(p.I * kPi * p.a * p.a).epsilon(0.01));
    }
    SUBCASE("equatorial parity kills the axial electric component") {
        const auto E2 = e_kn_cyl(1.7, kPi / 2, p.Q, p.a);
        CHECK(std::fabs(E2[1]) < 1e-15 * std::fabs(E2[0]));
    }
    SUBCASE("analytic derivatives match central differences") {
        const double h = 1e-5;
        for (auto [r, th] : {std::array<double, 2>{1.4, 0.9},
                             std::array<double, 2>{-0.8, 2.1},
                             std::array<double, 2>{0.3, 1.2}}) {
            const auto E2 = e_kn_cyl(r, th, p.Q, p.a);
            // FD of phi_kn in (rho,z) through the chart
            const auto rz = os_to_cyl(r, th, p.a);
            const int sheet = r > 0 ? 1 : -1;
            auto phi_of = [&](double rho, double z) {
                const auto rt = cyl_to_os(rho, z, sheet, p.a);
                return phi_kn(rt[0] / p.a, std::cos(rt[1]), p.Q, p.a);
            };
            const double dphirho =
                (phi_of(rz[0] + h, rz[1]) - phi_of(rz[0] - h, rz[1])) / (2 * h);
            const double dphiz =
                (phi_of(rz[0], rz[1] + h) - phi_of(rz[0], rz[1] - h)) / (2 * h);
            CHECK(E2[0] == doctest::Approx(-dphirho).epsilon(1e-8));
            CHECK(E2[1] == doctest::Approx(-dphiz).epsilon(1e-8));

            const auto B2 = b_kn_cyl(r, th, p.I, p.a);
            auto A_of = [&](double rho, double z) {
                const auto rt = cyl_to_os(rho, z, sheet, p.a);
                return a_phys_azimuthal(rt[0], rt[1], p.I, p.a);
            };
            const double dAdz = (A_of(rz[0], rz[1] + h) - A_of(rz[0], rz[1] - h)) / (2 * h);
            const double dAdrho =
                (A_of(rz[0] + h, rz[1]) - A_of(rz[0] - h, rz[1])) / (2 * h);
            CHECK(B2[0] == doctest::Approx(-dAdz).epsilon(1e-7));
            CHECK(B2[1] ==
                  doctest::Approx(dAdrho + A_of(rz[0], rz[1]) / rz[0]).epsilon(1e-7));
        }
    }
    SUBCASE("divergence-free magnetic field") {
        // FD divergence of B in cylindrical components
        const double h = 1e-5;
        for (auto [r, th] : {std::array<double, 2>{1.2, 1.0},
                             std::array<double, 2>{-1.5, 0.7}}) {
            const auto rz = os_to_cyl(r, th, p.a);
            const int sheet = r > 0 ? 1 : -1;
            auto B_of = [&](double rho, double z) {
                const auto rt = cyl_to_os(rho, z, sheet, p.a);
                return b_kn_cyl(rt[0], rt[1], p.I, p.a);
            };
            const auto Bp = B_of(rz[0] + h, rz[1]);
            const auto Bm = B_of(rz[0] - h, rz[1]);
            const auto Bzp = B_of(rz[0], rz[1] + h);
            const auto Bzm = B_of(rz[0], rz[1] - h);
            const auto B0 = B_of(rz[0], rz[1]);
            const double div = (Bp[0] - Bm[0]) / (2 * h) + B0[0] / rz[0] +
                               (Bzp[1] - Bzm[1]) / (2 * h);
            CHECK(std::fabs(div) < 1e-7 * (std::fabs(B0[0]) + std::fabs(B0[1]) + 1e-12) /
                                       h * h + 1e-9);
        }
    }
}

TEST_CASE("point-charge field against an independent Cartesian stencil") {
    const double a = 1.0, Qp = 0.8;
    const Peripolar src = peripolar_from_bl(1.5, 0.8, 0.2, a);
    for (auto [r, th, ph] : {std::array<double, 3>{0.9, 1.9, 1.0},
                             std::array<double, 3>{-1.2, 0.8, 3.0}}) {
        const auto E = e_pt_cart(r, th, ph, src, Qp, a);
        const auto x0 = project_cartesian(r, th, ph, a);
        const int sheet = r > 0 ? 1 : -1;
        auto f = [&](std::array<double, 3> x) {
            const double rho = std::hypot(x[0], x[1]);
            const double phi = std::atan2(x[1], x[0]);
            const auto rt = cyl_to_os(rho, x[2], sheet, a);
            return phi_pt_bl(rt[0], rt[1], phi, src, Qp, a);
        };
        const double h = 2e-5;
        for (int k = 0; k < 3; ++k) {
            auto xp = x0, xm = x0;
            xp[k] += h;
            xm[k] -= h;
            const double g = (f(xp) - f(xm)) / (2 * h);
            CHECK(E[k] == doctest::Approx(-g).epsilon(2e-6));
        }
    }
}

TEST_CASE("Gauss flux through large spheres on both sheets") {
    ModelParams p;
    p.a = 0.5;
    p.Q = 2.0;
    p.I = 0.0;
    const double R = 1e3 * p.a;
    CHECK(gauss_flux(p, R, +1) == doctest::Approx(4.0 * kPi * p.Q).epsilon(1e-6));
    CHECK(gauss_flux(p, R, -1) == doctest::Approx(-4.0 * kPi * p.Q).epsilon(1e-6));
}
