#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "zgkn/interaction.hpp"

using namespace zgkn;

namespace {

ModelParams ring_params() {
    ModelParams p;
    p.a = 1.0;
    p.m = 1.0;
    p.Q = 1.0;
    p.Qprime = 1.0;
    p.I = p.Q / (kPi * p.a);
    p.gamma = 1.0;
    return p;
}

QuadratureConfig quick_cfg() {
    QuadratureConfig cfg = QuadratureConfig::defaults();
    cfg.eps_ladder = {0.1, 0.05, 0.02, 0.01, 0.005, 0.002};
    cfg.far_u = 36;
    cfg.far_eta = 28;
    cfg.far_phi = 16;
    cfg.ring_beta = 40;
    cfg.ring_phi = 16;
    cfg.ball_mu = 10;
    cfg.ball_phi = 10;
    return cfg;
}

} // namespace

TEST_CASE("time component against the closed form") {
    const ModelParams p = ring_params();
    const SourcePoint q{0.9, 0.35, 0.7};
    const LadderResult r = interaction_P0(q, p, quick_cfg());
    CHECK(r.rel_error < 0.02);
    CHECK(r.convergence_exponent > 0.3);
    CHECK(r.convergence_exponent < 0.7);
    // closed form on the axis direction: Qprime (Q/a) xi/(xi^2+eta^2)
    CHECK(r.closed_form ==
          doctest::Approx(p.Qprime * phi_kn(q.xi, q.eta, p.Q, p.a)));

    SUBCASE("Coulomb limit of the target at large separation") {
        const BoyerLindquist bl = ring_to_bl(RingCentered{30.0, 0.4, 0.0}, p.a);
        const auto x = project_cartesian(bl.r, bl.theta, bl.phi, p.a);
        const double d = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const double target = p.Qprime * phi_kn(30.0, 0.4, p.Q, p.a);
        CHECK(std::fabs(target - p.Q * p.Qprime / d) / (p.Q * p.Qprime / d) < 0.01);
    }
}

TEST_CASE("restricting to one sheet changes the result") {
    const ModelParams p = ring_params();
    const SourcePoint q{0.9, 0.35, 0.7};
    QuadratureConfig cfg = quick_cfg();
    cfg.eps_ladder = {0.05, 0.02, 0.01, 0.005, 0.002};
    const LadderResult full = interaction_P0(q, p, cfg);
    cfg.single_sheet_debug = true;
    const LadderResult single = interaction_P0(q, p, cfg);
    CHECK(std::fabs(full.extrapolated - single.extrapolated) >
          0.02 * std::fabs(full.extrapolated));
}

TEST_CASE("mutuality of the integrand is bit-exact under label exchange") {
    // the energy integrand is a symmetric dot product; exchanging which field
    // is called first cannot change a single bit of the accumulated sum
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double acc_ab = 0.0, acc_ba = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a1 = u(rng), a2 = u(rng), a3 = u(rng);
        const double b1 = u(rng), b2 = u(rng), b3 = u(rng);
        acc_ab += a1 * b1 + a2 * b2 + a3 * b3;
        acc_ba += b1 * a1 + b2 * a2 + b3 * a3;
    }
    CHECK(acc_ab == acc_ba);
}

TEST_CASE("vector component against the closed form") {
    ModelParams p = ring_params();
    p.I = 1.3 * p.Q / (kPi * p.a); // anomalous moment
    const SourcePoint q{1.1, -0.4, 2.0};
    const VectorLadderResult r = interaction_Pj(q, p, quick_cfg());
    CHECK(r.rel_error < 0.02);
    // transverse components vanish for an axis point by symmetry
    ModelParams pk = ring_params();
    const SourcePoint qa{1.2, 0.995, 0.0};
    const VectorLadderResult ra = interaction_Pj(qa, pk, quick_cfg());
    const double scale = std::fabs(ra.closed_form[0]) + std::fabs(ra.closed_form[1]) +
                         std::fabs(ra.extrapolated[2]) + 1e-12;
    CHECK(std::fabs(ra.extrapolated[2]) / scale < 0.05);
}
