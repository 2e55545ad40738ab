#include "zgkn/bohm.hpp"

#include <cmath>

#include "zgkn/frame.hpp"
#include "zgkn/ode.hpp"

namespace zgkn {

SuperpositionField::SuperpositionField(std::vector<SeparatedState> states,
                                       std::vector<cplx> coeffs)
    : states_(std::move(states)), coeffs_(std::move(coeffs)) {
    if (states_.empty() || states_.size() != coeffs_.size())
        throw ConfigError("superposition needs matching nonempty state/coefficient lists");
    for (const auto& s : states_)
        if (s.params.a != states_.front().params.a)
            throw ConfigError("superposition states must share the manifold");
}

Vec4c SuperpositionField::evaluate(double t, double r, double theta, double phi) const {
    Vec4c acc = Vec4c::Zero();
    for (std::size_t i = 0; i < states_.size(); ++i)
        acc += coeffs_[i] * assemble_eigenstate(states_[i], t, r, theta, phi);
    return acc;
}

namespace {

struct GuidanceRhs {
    const StateField& field;
    const GuidanceOptions& opt;
    mutable bool saw_null = false;

    void operator()(double /*tau*/, const std::array<double, 4>& Q,
                    std::array<double, 4>& dQ) const {
        const double t = Q[0], r = Q[1], th = Q[2], ph = Q[3];
        const double a = field.ring_radius();
        const Vec4c psi = field.evaluate(t, r, th, ph);
        const double rho = psi.squaredNorm();
        if (rho < opt.density_floor)
            throw ZeroDensityError("trajectory left the support of the state");
        Eigen::Vector3d j;
        for (int k = 0; k < 3; ++k)
            j(k) = std::real(psi.dot(dirac::alpha(k + 1) * psi));
        const double jj = rho * rho - j.squaredNorm();

        double norm = 1.0;
        if (jj < opt.null_threshold * rho * rho) {
            saw_null = true; // affine parameterization on null segments
        } else {
            norm = 1.0 / std::sqrt(jj);
        }
        const double w = varpi(r, a);
        const double rho_bl = abs_rho(r, th, a);
        const double s = std::sin(th);
        dQ[0] = norm * (rho * w + j(1) * a * s) / rho_bl;
        dQ[1] = norm * j(2) * w / rho_bl;
        dQ[2] = norm * j(0) / rho_bl;
        dQ[3] = norm * (rho * a / w + j(1) / s) / rho_bl;
    }
};

Eigen::Matrix3d frame_to_cartesian(const OrientationFrame& f, double r, double th,
                                   double ph, double a, Eigen::Vector3d* N_cart) {
    const auto triad = frame_triad_cartesian(r, th, ph, a);
    Eigen::Matrix3d T;
    for (int c = 0; c < 3; ++c)
        T.col(c) = Eigen::Vector3d(triad[c][0], triad[c][1], triad[c][2]);
    // frame-component vectors -> Cartesian
    Eigen::Matrix3d F;
    F.col(0) = T * f.l_hat;
    F.col(1) = T * f.m_hat;
    F.col(2) = T * f.n_hat;
    if (N_cart) *N_cart = T * f.n;
    return F;
}

} // namespace

FourPosition guide_step(const StateField& field, const FourPosition& Q, double dtau,
                        const GuidanceOptions& opt) {
    GuidanceRhs rhs{field, opt};
    DormandPrince<4>::Options o;
    o.rtol = opt.rtol;
    o.atol = opt.atol;
    DormandPrince<4> ode([&rhs](double x, const std::array<double, 4>& y,
                                std::array<double, 4>& dy) { rhs(x, y, dy); },
                         o);
    const auto out = ode.integrate(0.0, {Q.t, Q.r, Q.theta, Q.phi}, dtau);
    return {out[0], out[1], out[2], out[3]};
}

Worldline integrate_trajectory(const StateField& field, const FourPosition& Q0,
                               double tau_span, double cadence,
                               const GuidanceOptions& opt) {
    Worldline w;
    const double a = field.ring_radius();
    GuidanceRhs rhs{field, opt};
    DormandPrince<4>::Options o;
    o.rtol = opt.rtol;
    o.atol = opt.atol;
    DormandPrince<4> ode([&rhs](double x, const std::array<double, 4>& y,
                                std::array<double, 4>& dy) { rhs(x, y, dy); },
                         o);

    Eigen::Matrix3d F0 = Eigen::Matrix3d::Identity();
    bool have_F0 = false;

    std::array<double, 4> Q{Q0.t, Q0.r, Q0.theta, Q0.phi};
    const int n_seg = std::max(1, static_cast<int>(std::llround(tau_span / cadence)));
    for (int k = 0; k <= n_seg; ++k) {
        const double tau = k * (tau_span / n_seg);
        if (k > 0) {
            rhs.saw_null = false;
            try {
                Q = ode.integrate((k - 1) * (tau_span / n_seg), Q, tau);
            } catch (const std::exception& ex) {
                w.termination = ex.what();
                return w;
            }
            if (rhs.saw_null) ++w.null_segments;
        }

        WorldlineSample smp;
        smp.tau = tau;
        smp.Q = {Q[0], Q[1], Q[2], Q[3]};
        const auto xc = project_cartesian(Q[1], Q[2], Q[3], a);
        smp.x = xc;
        const Vec4c psi = field.evaluate(Q[0], Q[1], Q[2], Q[3]);
        const CurrentSample cs = current(psi);
        smp.speed = cs.v.norm();
        smp.null_current = cs.null_current;
        // residual of the unit-norm condition g(u,u) = 1
        std::array<double, 4> dQ;
        rhs(tau, Q, dQ);
        const auto g = metric_coeffs(Q[1], Q[2], a);
        double uu = 0.0;
        for (int m = 0; m < 4; ++m) uu += g[m][m] * dQ[m] * dQ[m];
        smp.u_norm_residual = cs.null_current ? 0.0 : uu - 1.0;

        const OrientationFrame of = orientation(psi);
        smp.degenerate_frame = of.degenerate;
        if (of.degenerate) ++w.degenerate_segments;
        smp.frame = frame_to_cartesian(of, Q[1], Q[2], Q[3], a, &smp.N);
        if (!have_F0 && !of.degenerate) {
            F0 = smp.frame;
            have_F0 = true;
        }
        if (of.degenerate && !w.samples.empty())
            smp.rotation = w.samples.back().rotation; // bridge degenerate gaps
        else
            smp.rotation = smp.frame * F0.transpose();
        w.samples.push_back(std::move(smp));
    }
    w.completed = true;
    return w;
}

RingTrack ring_frame_view(const Worldline& w, const Eigen::Vector3d& ring_normal0) {
    RingTrack rt;
    rt.degenerate_segments = w.degenerate_segments;
    for (const auto& s : w.samples) {
        rt.tau.push_back(s.tau);
        rt.t.push_back(s.Q.t);
        const Eigen::Vector3d Q(s.x[0], s.x[1], s.x[2]);
        const Eigen::Matrix3d Rinv = s.rotation.transpose();
        rt.center.push_back(-Rinv * Q);
        rt.normal.push_back(Rinv * ring_normal0);
    }
    return rt;
}

QuasiStaticReport quasi_static_report(const Worldline& w, const ModelParams& params) {
    QuasiStaticReport q;
    const double alpha = std::fabs(params.gamma);
    q.c_quantum = alpha;
    q.c_larmor = 1e-3 * alpha * alpha * alpha;
    for (const auto& s : w.samples) q.max_speed = std::max(q.max_speed, s.speed);
    q.quasi_static = q.max_speed < 0.1;
    return q;
}

} // namespace zgkn
