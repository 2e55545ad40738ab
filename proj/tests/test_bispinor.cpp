#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "zgkn/bispinor.hpp"

using namespace zgkn;

namespace {

std::mt19937 rng(9);

Vec2c random_spinor() {
    std::normal_distribution<double> n(0.0, 1.0);
    return Vec2c(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)));
}

Vec4c random_bispinor() {
    Vec4c v;
    v << random_spinor(), random_spinor();
    return v;
}

} // namespace

TEST_CASE("Dirac algebra in the chosen representation") {
    const double eta[4] = {1.0, -1.0, -1.0, -1.0};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            const Mat4c anti = dirac::gamma(mu) * dirac::gamma(nu) +
                               dirac::gamma(nu) * dirac::gamma(mu);
            const Mat4c expect =
                (mu == nu) ? Mat4c(2.0 * eta[mu] * Mat4c::Identity()) : Mat4c(Mat4c::Zero());
            CHECK((anti - expect).norm() == 0.0);
        }
    // alpha^k = gamma^0 gamma^k is block diag(sigma_k, -sigma_k)
    for (int k = 1; k <= 3; ++k) {
        Mat4c expect = Mat4c::Zero();
        expect.block<2, 2>(0, 0) = dirac::sigma(k);
        expect.block<2, 2>(2, 2) = -dirac::sigma(k);
        CHECK((dirac::alpha(k) - expect).norm() == 0.0);
    }
}

TEST_CASE("sheet swap acts on the spinor map by sigma_3 conjugation") {
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const double X0 = n(rng), X1 = n(rng), X2 = n(rng), X3 = n(rng);
        Mat2c sX = X0 * Mat2c::Identity();
        sX += X1 * dirac::sigma(1) + X2 * dirac::sigma(2) + X3 * dirac::sigma(3);
        // the swap differential flips the two transverse legs
        Mat2c sXd = X0 * Mat2c::Identity();
        sXd += -X1 * dirac::sigma(1) - X2 * dirac::sigma(2) + X3 * dirac::sigma(3);
        const Mat2c conj = dirac::sigma(3) * sX * dirac::sigma(3);
        CHECK((sXd - conj).norm() < 1e-14);
    }
}

TEST_CASE("two-spinor polar decomposition") {
    SUBCASE("north pole") {
        const CayleyKlein ck = cayley_klein(Vec2c(1.0, 0.0));
        CHECK(ck.n(2) == doctest::Approx(1.0));
        CHECK(ck.Theta == doctest::Approx(0.0));
    }
    SUBCASE("flip reverses the polarization") {
        for (int t = 0; t < 300; ++t) {
            const Vec2c psi = random_spinor();
            const CayleyKlein a = cayley_klein(psi);
            const CayleyKlein b = cayley_klein(flip(psi));
            CHECK((a.n + b.n).norm() < 1e-12);
        }
    }
    SUBCASE("attached triad is orthonormal") {
        for (int t = 0; t < 300; ++t) {
            const CayleyKlein ck = cayley_klein(random_spinor());
            CHECK(ck.n.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(ck.l.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(ck.m.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::fabs(ck.l.dot(ck.m)) < 1e-12);
            CHECK(std::fabs(ck.l.dot(ck.n)) < 1e-12);
            CHECK(std::fabs(ck.m.dot(ck.n)) < 1e-12);
            CHECK((ck.l.cross(ck.m) - ck.n).norm() < 1e-12);
        }
    }
    SUBCASE("reconstruction") {
        for (int t = 0; t < 300; ++t) {
            const Vec2c psi = random_spinor();
            const CayleyKlein ck = cayley_klein(psi);
            const Vec2c back = ck_spinor(ck.R, ck.Phi, ck.Theta, ck.Omega);
            CHECK((back - psi).norm() < 1e-12 * psi.norm());
        }
    }
    CHECK_THROWS_AS(cayley_klein(Vec2c(0.0, 0.0)), ZeroSpinorError);
}

TEST_CASE("bi-spinor polar decomposition") {
    SUBCASE("mixing-angle limits") {
        Vec4c v;
        v << cplx(1.0, 0.5), cplx(0.2, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0);
        CHECK(generalized_ck(v).Sigma == doctest::Approx(0.0));
        Vec4c w;
        w << cplx(0.3, 0.0), cplx(0.4, 0.0), cplx(0.0, 0.5), cplx(0.0, 0.0);
        CHECK(generalized_ck(w).Sigma == doctest::Approx(kPi / 2).epsilon(1e-12));
    }
    SUBCASE("round trip") {
        for (int t = 0; t < 500; ++t) {
            const Vec4c v = random_bispinor();
            const Vec4c back = assemble_ck(generalized_ck(v));
            CHECK((back - v).norm() < 1e-12 * v.norm());
        }
    }
}

TEST_CASE("orientation vector and frame") {
    SUBCASE("pure upper component is unit length") {
        Vec4c v;
        v << random_spinor(), Vec2c(0.0, 0.0);
        const OrientationFrame f = orientation(v);
        CHECK(f.n.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("flip-locked halves have zero orientation") {
        const Vec2c psi = random_spinor();
        Vec4c v;
        v << psi, cplx(std::polar(1.0, 0.7)) * flip(psi);
        const OrientationFrame f = orientation(v);
        CHECK(f.n.norm() < 1e-12);
        CHECK(f.degenerate);
    }
    SUBCASE("norm identity via the mixing angle") {
        for (int t = 0; t < 300; ++t) {
            const Vec4c v = random_bispinor();
            const OrientationFrame f = orientation(v);
            const GeneralizedCK g = generalized_ck(v);
            const CayleyKlein c1 = cayley_klein(v.head<2>());
            const CayleyKlein c2 = cayley_klein(v.tail<2>());
            const double formula =
                0.5 * (1.0 + std::cos(g.Sigma) * std::cos(g.Sigma) +
                       c1.n.dot(c2.n) * std::sin(g.Sigma) * std::sin(g.Sigma));
            CHECK(f.n.squaredNorm() == doctest::Approx(formula).epsilon(1e-10));
            if (!f.degenerate) {
                CHECK(std::fabs(f.l_hat.dot(f.n_hat)) < 1e-10);
                CHECK(std::fabs(f.l_hat.dot(f.m_hat)) < 1e-10);
                CHECK(std::fabs(f.m_hat.dot(f.n_hat)) < 1e-10);
            }
        }
    }
}

TEST_CASE("probability current") {
    SUBCASE("parallel halves are at rest") {
        const Vec2c psi = random_spinor();
        Vec4c v;
        v << psi, cplx(std::polar(1.0, 1.1)) * psi;
        CHECK(current(v).v.norm() < 1e-12);
    }
    SUBCASE("single-half states ride the light cone") {
        Vec4c v;
        v << random_spinor(), Vec2c(0.0, 0.0);
        const CurrentSample cs = current(v);
        CHECK(cs.v.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cs.null_current);
    }
    SUBCASE("causality and the closed forms on random states") {
        for (int t = 0; t < 2000; ++t) {
            const Vec4c v = random_bispinor();
            const CurrentSample cs = current(v);
            CHECK(cs.minkowski_norm >= -1e-12 * cs.rho * cs.rho);
            const GeneralizedCK g = generalized_ck(v);
            const CayleyKlein c1 = cayley_klein(v.head<2>());
            const CayleyKlein c2 = cayley_klein(v.tail<2>());
            const double v2_formula =
                0.5 * (1.0 + std::cos(g.Sigma) * std::cos(g.Sigma) -
                       c1.n.dot(c2.n) * std::sin(g.Sigma) * std::sin(g.Sigma));
            CHECK(cs.v.squaredNorm() == doctest::Approx(v2_formula).epsilon(1e-10));
            // v . n = cos(Sigma)
            const OrientationFrame f = orientation(v);
            CHECK(cs.v.dot(f.n) ==
                  doctest::Approx(std::cos(g.Sigma)).epsilon(1e-10));
        }
    }
}
