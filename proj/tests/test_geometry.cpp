#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "zgkn/geometry.hpp"

using namespace zgkn;

TEST_CASE("projection to cylindrical coordinates") {
    auto rz = os_to_cyl(0.0, kPi / 2, 1.0);
    CHECK(rz[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rz[1] == doctest::Approx(0.0).epsilon(1e-14));

    rz = os_to_cyl(2.0, 0.0, 0.0);
    CHECK(rz[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(rz[1] == doctest::Approx(2.0).epsilon(1e-14));

    rz = os_to_cyl(1.0, kPi / 3, 1.0);
    CHECK(rz[0] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
    CHECK(rz[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("inverse projection and the excluded ring") {
    auto rt = cyl_to_os(1.0, 0.0, +1, 0.0);
    CHECK(rt[0] == doctest::Approx(1.0));
    CHECK(rt[1] == doctest::Approx(kPi / 2));

    rt = cyl_to_os(std::sqrt(1.5), 0.5, +1, 1.0);
    CHECK(rt[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rt[1] == doctest::Approx(kPi / 3).epsilon(1e-12));

    CHECK_THROWS_AS(cyl_to_os(1.0, 0.0, -1, 1.0), RingPointError);
}

TEST_CASE("projection is 2:1 and the sheet flag disambiguates") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> ur(0.1, 4.0), uth(0.05, kPi - 0.05);
    for (int i = 0; i < 1000; ++i) {
        const double r = ur(rng), th = uth(rng);
        const auto plus = os_to_cyl(r, th, 1.3);
        const auto minus = os_to_cyl(-r, kPi - th, 1.3);
        CHECK(plus[0] == doctest::Approx(minus[0]).epsilon(1e-13));
        CHECK(plus[1] == doctest::Approx(minus[1]).epsilon(1e-13));
        const auto back = cyl_to_os(plus[0], plus[1], -1, 1.3);
        CHECK(back[0] == doctest::Approx(-r).epsilon(1e-12));
    }
}

TEST_CASE("sheet swap is a projection-preserving involution fixing the ring") {
    SpacetimePoint p;
    p.coords = RingCentered{1.0, 0.5, 0.0};
    const auto q = sheet_swap(p, 1.0);
    const auto& rc = std::get<RingCentered>(q.coords);
    CHECK(rc.xi == -1.0);
    CHECK(rc.eta == -0.5);
    CHECK(rc.phi == 0.0);
    const auto& back = std::get<RingCentered>(sheet_swap(q, 1.0).coords);
    CHECK(back.xi == 1.0);
    CHECK(back.eta == 0.5);

    // ring limit is fixed: small points map to small points
    SpacetimePoint tiny;
    tiny.coords = RingCentered{1e-12, -1e-12, 2.0};
    const auto& sw = std::get<RingCentered>(sheet_swap(tiny, 1.0).coords);
    CHECK(std::fabs(sw.xi) <= 1e-12);
    CHECK(std::fabs(sw.eta) <= 1e-12);
}

TEST_CASE("metric coefficients") {
    SUBCASE("a = 0 reduces to spherical form") {
        const auto g = metric_coeffs(2.0, 1.0, 0.0);
        CHECK(g[0][0] == 1.0);
        CHECK(g[1][1] == doctest::Approx(-1.0));
        CHECK(g[2][2] == doctest::Approx(-4.0));
        CHECK(g[3][3] == doctest::Approx(-4.0 * std::sin(1.0) * std::sin(1.0)));
    }
    SUBCASE("disc center values") {
        const auto g = metric_coeffs(0.0, 0.0, 1.0);
        CHECK(g[1][1] == doctest::Approx(-1.0));
        CHECK(g[2][2] == doctest::Approx(-1.0));
    }
    SUBCASE("static form and negative determinant") {
        std::mt19937 rng(2);
        std::uniform_real_distribution<double> ur(-3.0, 3.0), uth(0.1, kPi - 0.1);
        for (int i = 0; i < 200; ++i) {
            const auto g = metric_coeffs(ur(rng), uth(rng), 1.0);
            CHECK(g[0][0] == 1.0);
            CHECK(g[1][1] * g[2][2] * g[3][3] * g[0][0] < 0.0);
        }
    }
    CHECK_THROWS_AS(metric_coeffs(0.0, kPi / 2, 1.0), RingPointError);
}

TEST_CASE("flatness: line element equals Minkowski form of projected increments") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ur(-2.5, 2.5), uth(0.2, kPi - 0.2),
        uv(-1.0, 1.0);
    const double a = 1.1;
    for (int trial = 0; trial < 50; ++trial) {
        double r = ur(rng);
        if (std::fabs(r) < 0.2) r = 0.7;
        const double th = uth(rng), ph = 1.0;
        if (std::fabs(abs_rho_sq(r, th, a)) < 0.05) continue;
        const double vr = uv(rng), vth = uv(rng), vph = uv(rng);
        const auto g = metric_coeffs(r, th, a);
        const double quad =
            g[1][1] * vr * vr + g[2][2] * vth * vth + g[3][3] * vph * vph;
        double prev_err = 1e300;
        for (double h : {1e-3, 5e-4}) {
            const auto x0 = project_cartesian(r, th, ph, a);
            const auto x1 = project_cartesian(r + h * vr, th + h * vth, ph + h * vph, a);
            double dist2 = 0.0;
            for (int k = 0; k < 3; ++k) dist2 += (x1[k] - x0[k]) * (x1[k] - x0[k]);
            const double err = std::fabs(-dist2 / (h * h) - quad);
            CHECK(err < prev_err * 1.01);
            CHECK(err < 10.0 * h * (1.0 + std::fabs(quad)));
            prev_err = err;
        }
    }
}

TEST_CASE("peripolar coordinates") {
    const double a = 1.0;
    SUBCASE("axis points are equidistant from the antipodal pair") {
        const auto p = peripolar_from_bl(1.5, 0.0, 0.0, a); // on-axis, z > 0
        CHECK(p.zeta == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(p.chi > 0.0);
        CHECK(p.chi < kPi);
        // triangle oracle: angle at q between the two ring points
        const auto rz = os_to_cyl(1.5, 0.0, a);
        const double d1 = std::hypot(rz[0] - a, rz[1]);
        const double d2 = std::hypot(rz[0] + a, rz[1]);
        const double cos_angle =
            (d1 * d1 + d2 * d2 - 4.0 * a * a) / (2.0 * d1 * d2);
        CHECK(std::cos(p.chi) == doctest::Approx(cos_angle).epsilon(1e-12));
    }
    SUBCASE("windows on the two sheets differ by 2 pi") {
        const auto p = peripolar_from_bl(0.8, 1.2, 0.3, a);
        const auto q = peripolar_from_bl(-0.8, kPi - 1.2, 0.3, a);
        CHECK(p.zeta == doctest::Approx(q.zeta).epsilon(1e-12));
        CHECK(q.chi - p.chi == doctest::Approx(2.0 * kPi).epsilon(1e-12));
        CHECK(p.chi > -kPi);
        CHECK(p.chi <= kPi);
        CHECK(q.chi > kPi);
        CHECK(q.chi <= 3.0 * kPi);
    }
    SUBCASE("general placement agrees with the chart version") {
        const auto p = peripolar_from_bl(1.1, 0.9, 1.4, a);
        const auto q = peripolar_from_point(project_cartesian(1.1, 0.9, 1.4, a),
                                            {0, 0, 0}, {0, 0, 1}, +1, a);
        CHECK(p.zeta == doctest::Approx(q.zeta).epsilon(1e-12));
        CHECK(p.chi == doctest::Approx(q.chi).epsilon(1e-12));
        CHECK(p.phi == doctest::Approx(q.phi).epsilon(1e-12));
    }
}

TEST_CASE("ring-relative dual coordinates") {
    const auto d = dual_frame_coords(1.0, kPi / 3, 0.0);
    CHECK(d[0] == doctest::Approx(1.0));
    CHECK(d[1] == doctest::Approx(2.0 * kPi / 3));
    CHECK(d[2] == doctest::Approx(kPi));
    const auto dd = dual_frame_coords(d[0], d[1], d[2]);
    CHECK(dd[0] == doctest::Approx(1.0));
    CHECK(dd[1] == doctest::Approx(kPi / 3));
    CHECK(dd[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dual_frame_coords(2.0, kPi / 2, 1.0)[1] == doctest::Approx(kPi / 2));
}

TEST_CASE("conical angle of meridional circles tends to 4 pi") {
    const double a = 1.3;
    double prev = 1e300;
    for (double vs : {0.3, 0.15, 0.06}) {
        const double err = std::fabs(conical_angle_ratio(a, vs) - 4.0 * kPi);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev / (4.0 * kPi) < 0.01);
}
