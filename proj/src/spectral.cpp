#include "zgkn/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <map>
#include <mutex>
#include <thread>

#include "zgkn/rootfind.hpp"

namespace zgkn {

double sommerfeld_energy(int n, int kappa_d, double alpha, double m) {
    if (n < 1 || kappa_d == 0 || kappa_d < -n || kappa_d > n - 1)
        throw InvalidQuantumNumbersError("sommerfeld_energy: need n>=1, kappa in [-n, n-1], kappa != 0");
    const double ak = std::fabs(static_cast<double>(kappa_d));
    if (alpha >= ak)
        throw InvalidQuantumNumbersError("sommerfeld_energy: alpha >= |kappa|");
    const double denom = n - ak + std::sqrt(ak * ak - alpha * alpha);
    return m / std::sqrt(1.0 + alpha * alpha / (denom * denom));
}

double angular_rhs(double theta, double Theta, double am, double aE, double kappa,
                   double lambda) {
    if (theta <= 0.0 || theta >= kPi) throw PoleEvaluationError(theta);
    const double s = std::sin(theta), c = std::cos(theta);
    return -2.0 * am * c * std::cos(Theta) +
           2.0 * (aE * s - kappa / s) * std::sin(Theta) + 2.0 * lambda;
}

double radial_rhs(double r, double Omega, double m, double a, double gamma,
                  double kappa, double lambda, double E) {
    const double w2 = r * r + a * a;
    const double w = std::sqrt(w2);
    return 2.0 * (m * r / w) * std::cos(Omega) + 2.0 * (lambda / w) * std::sin(Omega) +
           2.0 * (a * kappa + gamma * r) / w2 - 2.0 * E;
}

std::array<double, 2> radial_saddles(double E, double m) {
    if (!(std::fabs(E) < m)) throw NoGapError(E, m);
    const double ac = std::acos(E / m);
    // Decay at both ends needs sin(Omega) < 0.
    return {-ac, -kPi + ac};
}

// ---------------------------------------------------------------------------
// Angular problem.

namespace {

struct AngularShot {
    double mismatch_raw; // Theta_left(pi/2) - Theta_right(pi/2)
    double theta_start;
    double Theta0, Theta_pi;
    double slope0, slope_pi;
};

constexpr double kThetaStart = 1e-6;

AngularShot angular_shoot(double am, double aE, double kappa, double lambda,
                          const SpectralTol& tol,
                          std::vector<DormandPrince<1>::StepRecord>* rec_left = nullptr,
                          std::vector<DormandPrince<1>::StepRecord>* rec_right = nullptr) {
    const double s = (kappa > 0) ? 1.0 : -1.0;
    const double Theta0 = (s > 0) ? 0.0 : kPi;
    const double Theta_pi = (s > 0) ? kPi : 0.0;
    // Regular boundary slopes cancel the csc(theta) singularity.
    const double c0 = (2.0 * lambda - 2.0 * am * s) / (1.0 + 2.0 * kappa * s);
    const double cpi = -c0;

    DormandPrince<1>::Options opt;
    opt.rtol = tol.ode_rtol;
    opt.atol = tol.ode_atol;
    DormandPrince<1> ode(
        [=](double th, const std::array<double, 1>& y, std::array<double, 1>& dy) {
            dy[0] = angular_rhs(th, y[0], am, aE, kappa, lambda);
        },
        opt);

    const double ts = kThetaStart;
    // Theta(pi - u) = Theta_pi + cpi * u near the far pole.
    const auto yl = ode.integrate(ts, {Theta0 + c0 * ts}, kPi / 2, rec_left);
    const auto yr = ode.integrate(kPi - ts, {Theta_pi + cpi * ts}, kPi / 2, rec_right);
    return {yl[0] - yr[0], ts, Theta0, Theta_pi, c0, cpi};
}

// Reference anchor: index of the smallest positive eigenvalue at am=aE=0.
int reference_k0(double kappa, const SpectralTol& tol) {
    static std::map<double, int> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find(kappa);
        if (it != cache.end()) return it->second;
    }
    const double m0 = angular_shoot(0.0, 0.0, kappa, 0.0, tol).mismatch_raw;
    const int k0 = static_cast<int>(std::floor(m0 / (2.0 * kPi))) + 1;
    std::lock_guard<std::mutex> lk(mtx);
    cache[kappa] = k0;
    return k0;
}

int branch_to_k(double kappa, int branch, const SpectralTol& tol) {
    if (branch == 0)
        throw InvalidQuantumNumbersError("angular branch index must be nonzero");
    const int k0 = reference_k0(kappa, tol);
    return (branch > 0) ? k0 + branch - 1 : k0 + branch;
}

} // namespace

double AngularSolution::lnS_at(double theta) const {
    const double lo = theta_start, hi = kPi - theta_start;
    const double ak = std::fabs(kappa);
    if (theta < lo) {
        if (theta <= 0.0) return -1e308;
        return lnS(lo) + ak * std::log(theta / lo);
    }
    if (theta > hi) {
        if (theta >= kPi) return -1e308;
        return lnS(hi) + ak * std::log((kPi - theta) / (kPi - hi));
    }
    return lnS(theta);
}

AngularSolution solve_angular(double am, double aE, double kappa, int branch,
                              const SpectralTol& tol,
                              std::optional<double> lambda_guess) {
    if (std::fabs(std::fabs(std::remainder(2.0 * kappa, 2.0)) - 1.0) > 1e-9)
        throw InvalidQuantumNumbersError("kappa must be half-odd-integer");
    const int k = branch_to_k(kappa, branch, tol);
    const double target = 2.0 * kPi * k;

    auto f = [&](double lam) {
        return angular_shoot(am, aE, kappa, lam, tol).mismatch_raw - target;
    };

    // The mismatch is strictly increasing in lambda; expand a bracket
    // around the guess and bisect/Brent.
    double guess = lambda_guess.value_or(
        ((branch > 0) ? 1.0 : -1.0) * (std::fabs(kappa) + 0.5 + std::fabs(branch) - 1.0));
    double w = 0.5;
    double lo = guess - w, hi = guess + w;
    double flo = f(lo), fhi = f(hi);
    int expand = 0;
    while (flo > 0.0 && expand < 80) {
        hi = lo;
        fhi = flo;
        w *= 2.0;
        lo -= w;
        flo = f(lo);
        ++expand;
    }
    while (fhi < 0.0 && expand < 80) {
        lo = hi;
        flo = fhi;
        w *= 2.0;
        hi += w;
        fhi = f(hi);
        ++expand;
    }
    if (flo > 0.0 || fhi < 0.0)
        throw NoRootInBracketError("solve_angular: bracket expansion failed");
    const double lambda =
        brent_root(f, lo, hi, flo, fhi, tol.tol_lambda, tol.tol_match * 1e-2);

    // Final pass records both half-interval solutions, then glues Theta into
    // one continuous table and integrates the log-amplitude alongside.
    std::vector<DormandPrince<1>::StepRecord> rl, rr;
    const AngularShot shot = angular_shoot(am, aE, kappa, lambda, tol, &rl, &rr);

    DormandPrince<2>::Options opt2;
    opt2.rtol = tol.ode_rtol;
    opt2.atol = tol.ode_atol;
    auto rhs2 = [=](double th, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        const double s = std::sin(th), c = std::cos(th);
        dy[0] = angular_rhs(th, y[0], am, aE, kappa, lambda);
        dy[1] = -am * c * std::sin(y[0]) - (aE * s - kappa / s) * std::cos(y[0]);
    };
    DormandPrince<2> ode2(rhs2, opt2);

    const double ts = shot.theta_start;
    std::vector<DormandPrince<2>::StepRecord> al, ar;
    ode2.integrate(ts, {shot.Theta0 + shot.slope0 * ts, 0.0}, kPi / 2, &al);
    ode2.integrate(kPi - ts, {shot.Theta_pi + shot.slope_pi * ts, 0.0}, kPi / 2, &ar);

    // Continuity of the glued phase at pi/2; the converged mismatch differs
    // from 2*pi*k by at most tol_match, absorbed into the right segment.
    const double shift_T = al.back().y[0] - ar.back().y[0];
    const double shift_S = al.back().y[1] - ar.back().y[1];

    std::vector<double> th, Th, dTh, lS, dlS;
    th.reserve(al.size() + ar.size() + 1);
    // Analytic pole node keeps the Hermite table valid down to theta = 0.
    th.push_back(0.0);
    Th.push_back(shot.Theta0);
    dTh.push_back(shot.slope0);
    lS.push_back(0.0); // placeholder, never used below theta_start
    dlS.push_back(0.0);
    for (const auto& s : al) {
        th.push_back(s.x);
        Th.push_back(s.y[0]);
        dTh.push_back(s.dy[0]);
        lS.push_back(s.y[1]);
        dlS.push_back(s.dy[1]);
    }
    for (auto it = ar.rbegin(); it != ar.rend(); ++it) {
        if (std::fabs(it->x - kPi / 2) < 1e-15) continue;
        th.push_back(it->x);
        Th.push_back(it->y[0] + shift_T);
        dTh.push_back(it->dy[0]);
        lS.push_back(it->y[1] + shift_S);
        dlS.push_back(it->dy[1]);
    }
    // Analytic pole node at theta = pi; the phase there is the continued
    // boundary value and its slope is -cpi (Theta(pi-u) = Theta_pi + cpi*u).
    th.push_back(kPi);
    Th.push_back(shot.Theta_pi + shift_T);
    dTh.push_back(-shot.slope_pi);
    lS.push_back(0.0);
    dlS.push_back(0.0);

    AngularSolution out;
    out.lambda = lambda;
    out.kappa = kappa;
    out.theta_start = ts;
    out.Theta0 = shot.Theta0;
    out.Theta_pi = shot.Theta_pi;
    out.Theta = HermiteTable(th, Th, dTh);

    // Amplitude table only covers the regular interior.
    std::vector<double> th2(th.begin() + 1, th.end() - 1);
    std::vector<double> lS2(lS.begin() + 1, lS.end() - 1);
    std::vector<double> dlS2(dlS.begin() + 1, dlS.end() - 1);
    out.lnS = HermiteTable(th2, lS2, dlS2);
    return out;
}

std::vector<double> angular_dense_spectrum(double am, double aE, double kappa,
                                           int n_nodes) {
    // Pole-clustered map theta = pi sin^2(pi y / 2) turns the theta^(1/2)
    // behavior of half-integer modes into odd smooth functions of y; a
    // skew-symmetrized fourth-order derivative keeps the matrix symmetric.
    const int N = n_nodes;
    const double h = 1.0 / N;
    Eigen::MatrixXd Dy = Eigen::MatrixXd::Zero(N, N);
    const double c1 = 8.0 / (12.0 * h), c2 = -1.0 / (12.0 * h);
    auto add = [&](int i, int j, double v) {
        // fold ghosts by odd reflection about both ends
        if (j < 0) {
            Dy(i, -1 - j) -= v;
        } else if (j >= N) {
            Dy(i, 2 * N - 1 - j) -= v;
        } else {
            Dy(i, j) += v;
        }
    };
    for (int i = 0; i < N; ++i) {
        add(i, i - 2, c2 * -1.0);
        add(i, i - 1, c1 * -1.0);
        add(i, i + 1, c1);
        add(i, i + 2, c2);
    }
    Dy = 0.5 * (Dy - Dy.transpose()).eval();

    Eigen::VectorXd theta(N), gp(N), f(N), diag(N);
    for (int j = 0; j < N; ++j) {
        const double y = (j + 0.5) * h;
        const double sh = std::sin(kPi * y / 2.0);
        theta(j) = kPi * sh * sh;
        gp(j) = kPi * kPi / 2.0 * std::sin(kPi * y);
        const double s = std::sin(theta(j));
        f(j) = aE * s - kappa / s;
        diag(j) = am * std::cos(theta(j));
    }
    Eigen::VectorXd gph = gp.array().sqrt().inverse();
    Eigen::MatrixXd Dt = gph.asDiagonal() * Dy * gph.asDiagonal();

    Eigen::MatrixXd B(2 * N, 2 * N);
    B.topLeftCorner(N, N) = diag.asDiagonal();
    B.topRightCorner(N, N) = Dt - Eigen::MatrixXd(f.asDiagonal());
    B.bottomLeftCorner(N, N) = -Dt - Eigen::MatrixXd(f.asDiagonal());
    B.bottomRightCorner(N, N) = (-diag).asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 2 * N);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// ---------------------------------------------------------------------------
// Radial problem.

namespace {

// Saddle branch value of the phase at the integration start, refined by
// Newton against the full right-hand side with the derivative terms frozen.
double frozen_saddle(double r, const ModelParams& p, double kappa, double lambda,
                     double E, bool plus_end) {
    const auto saddles = radial_saddles(E, p.m);
    double Om = plus_end ? saddles[0] : saddles[1];
    for (int it = 0; it < 60; ++it) {
        const double g = radial_rhs(r, Om, p.m, p.a, p.gamma, kappa, lambda, E);
        const double w = varpi(r, p.a);
        const double dg =
            -2.0 * (p.m * r / w) * std::sin(Om) + 2.0 * (lambda / w) * std::cos(Om);
        if (dg == 0.0) break;
        const double step = g / dg;
        Om -= step;
        if (std::fabs(step) < 1e-14) break;
    }
    return Om;
}

double choose_r_max(const ModelParams& p, double kappa, double lambda, double E) {
    // Sixty decay lengths: the boundary-value error of the frozen-saddle
    // start is damped along the inward integration by the same exponent, so
    // any start error far below pi is invisible at the matching point.
    const double gap = std::sqrt(std::max(p.m * p.m - E * E, 1e-300));
    double r_max = 60.0 / gap;
    r_max = std::max({r_max, 100.0 * (std::fabs(lambda) + std::fabs(p.gamma)) / p.m,
                      100.0 * std::fabs(p.a), 10.0 / p.m});
    // Grow only if the Newton-refined saddle is not yet an honest root of
    // the frozen flow at the boundary.
    for (int it = 0; it < 4; ++it) {
        const double res_plus = std::fabs(radial_rhs(
            r_max, frozen_saddle(r_max, p, kappa, lambda, E, true), p.m, p.a, p.gamma,
            kappa, lambda, E));
        const double res_minus = std::fabs(radial_rhs(
            -r_max, frozen_saddle(-r_max, p, kappa, lambda, E, false), p.m, p.a,
            p.gamma, kappa, lambda, E));
        if (std::max(res_plus, res_minus) < 1e-8 * p.m) break;
        r_max *= 1.5;
    }
    return r_max;
}

} // namespace

RadialShot solve_radial(double lambda, const ModelParams& params, double kappa,
                        double E, const SpectralTol& tol) {
    const double r_max = choose_r_max(params, kappa, lambda, E);
    DormandPrince<1>::Options opt;
    opt.rtol = tol.ode_rtol;
    opt.atol = tol.ode_atol;
    DormandPrince<1> ode(
        [&, lambda, E](double r, const std::array<double, 1>& y, std::array<double, 1>& dy) {
            dy[0] = radial_rhs(r, y[0], params.m, params.a, params.gamma, kappa, lambda, E);
        },
        opt);
    const double om_l = frozen_saddle(-r_max, params, kappa, lambda, E, false);
    const double om_r = frozen_saddle(r_max, params, kappa, lambda, E, true);
    const auto yl = ode.integrate(-r_max, {om_l}, 0.0);
    const auto yr = ode.integrate(r_max, {om_r}, 0.0);
    return {yl[0] - yr[0], yl[0], yr[0], r_max};
}

double SeparatedState::lnR_at(double r) const {
    const double lo = lnR.front_x();
    const double hi = lnR.back_x();
    if (r < lo) return lnR(lo) + lnR.derivative(lo) * (r - lo);
    if (r > hi) return lnR(hi) + lnR.derivative(hi) * (r - hi);
    return lnR(r);
}

namespace {

// Gauss-Legendre 4-point on each Hermite-table interval.
double integrate_table(const HermiteTable& t,
                       const std::function<double(double, double)>& f) {
    static const double xg[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double wg[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    const auto& xs = t.xs();
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double a = xs[i], b = xs[i + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double cell = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double x = mid + half * xg[k];
            cell += wg[k] * f(x, t(x));
        }
        cell *= half;
        // Kahan accumulation keeps the sum order-independent of magnitude.
        const double yk = cell - comp;
        const double tk = acc + yk;
        comp = (tk - acc) - yk;
        acc = tk;
    }
    return acc;
}

struct NormPieces {
    double I_R;      // int R^2 dr
    double I_S;      // int S^2 dtheta
    double I_ROmega; // int (R^2 / varpi) sin(Omega) dr
    double I_STheta; // int S^2 sin(theta) sin(Theta) dtheta
};

NormPieces norm_pieces(const SeparatedState& st) {
    NormPieces n{};
    const double a = st.params.a;
    n.I_R = integrate_table(st.lnR, [&](double, double lr) { return std::exp(2.0 * lr); });
    n.I_ROmega = integrate_table(st.lnR, [&](double r, double lr) {
        return std::exp(2.0 * lr) * std::sin(st.Omega(r)) / varpi(r, a);
    });
    n.I_S = integrate_table(st.angular.lnS,
                            [&](double, double ls) { return std::exp(2.0 * ls); });
    n.I_STheta = integrate_table(st.angular.lnS, [&](double th, double ls) {
        return std::exp(2.0 * ls) * std::sin(th) * std::sin(st.angular.Theta(th));
    });
    // Pole tails of the amplitude, S ~ theta^|kappa|.
    const double ak = std::fabs(st.kappa);
    const double ts = st.angular.theta_start;
    const double Slo = std::exp(2.0 * st.angular.lnS_at(ts));
    const double Shi = std::exp(2.0 * st.angular.lnS_at(kPi - ts));
    n.I_S += (Slo + Shi) * ts / (2.0 * ak + 1.0);
    return n;
}

} // namespace

SeparatedState solve_eigenvalue(const ModelParams& params, double kappa, int branch,
                                int winding, double E_lo, double E_hi,
                                const SpectralTol& tol) {
    ShootingReport report;
    report.winding = winding;
    const double target = 2.0 * kPi * winding;
    double lambda_seed_init =
        ((branch > 0) ? 1.0 : -1.0) * (std::fabs(kappa) + 0.5 + std::fabs(branch) - 1.0);
    double lambda_last = lambda_seed_init;

    auto mismatch = [&](double E) {
        const AngularSolution ang =
            solve_angular(params.a * params.m, params.a * E, kappa, branch, tol,
                          lambda_last);
        lambda_last = ang.lambda;
        ++report.angular_solves;
        const RadialShot shot = solve_radial(ang.lambda, params, kappa, E, tol);
        ++report.energy_iterations;
        const double f = shot.mismatch_raw - target;
        report.bracket_history.emplace_back(E, f);
        report.r_max = shot.r_max;
        return f;
    };

    const double f_lo = mismatch(E_lo);
    const double f_hi = mismatch(E_hi);
    if (f_lo * f_hi > 0.0)
        throw NoRootInBracketError("solve_eigenvalue: no winding-" +
                                   std::to_string(winding) + " crossing in bracket");
    const double E =
        brent_root(mismatch, E_lo, E_hi, f_lo, f_hi, tol.tol_E * params.m, tol.tol_match);

    // Assemble tables at the converged energy.
    const AngularSolution ang = solve_angular(params.a * params.m, params.a * E, kappa,
                                              branch, tol, lambda_last);
    const double lambda = ang.lambda;
    const double r_max = choose_r_max(params, kappa, lambda, E);

    DormandPrince<2>::Options opt2;
    opt2.rtol = tol.ode_rtol;
    opt2.atol = tol.ode_atol;
    auto rhs2 = [&](double r, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        const double w = varpi(r, params.a);
        dy[0] = radial_rhs(r, y[0], params.m, params.a, params.gamma, kappa, lambda, E);
        dy[1] = (params.m * r / w) * std::sin(y[0]) - (lambda / w) * std::cos(y[0]);
    };
    DormandPrince<2> ode2(rhs2, opt2);
    std::vector<DormandPrince<2>::StepRecord> rl, rr;
    const double om_l = frozen_saddle(-r_max, params, kappa, lambda, E, false);
    const double om_r = frozen_saddle(r_max, params, kappa, lambda, E, true);
    ode2.integrate(-r_max, {om_l, 0.0}, 0.0, &rl);
    ode2.integrate(r_max, {om_r, 0.0}, 0.0, &rr);

    const double mism = rl.back().y[0] - rr.back().y[0] - target;
    report.final_mismatch = mism;
    report.converged = std::fabs(mism) <= 10.0 * tol.tol_match * (1.0 + std::fabs(target));

    const double shift_Om = rl.back().y[0] - rr.back().y[0];
    const double lnR0_l = rl.back().y[1];
    const double lnR0_r = rr.back().y[1];

    std::vector<double> r, Om, dOm, lR, dlR;
    r.reserve(rl.size() + rr.size());
    for (const auto& s : rl) {
        r.push_back(s.x);
        Om.push_back(s.y[0]);
        dOm.push_back(s.dy[0]);
        lR.push_back(s.y[1] - lnR0_l);
        dlR.push_back(s.dy[1]);
    }
    for (auto it = rr.rbegin(); it != rr.rend(); ++it) {
        if (std::fabs(it->x) < 1e-300) continue;
        r.push_back(it->x);
        Om.push_back(it->y[0] + shift_Om);
        dOm.push_back(it->dy[0]);
        lR.push_back(it->y[1] - lnR0_r);
        dlR.push_back(it->dy[1]);
    }

    SeparatedState st;
    st.params = params;
    st.kappa = kappa;
    st.branch = branch;
    st.winding = winding;
    st.E = E;
    st.lambda = lambda;
    st.r_max = r_max;
    st.Omega = HermiteTable(r, Om, dOm);
    st.lnR = HermiteTable(r, lR, dlR);
    st.angular = ang;
    st.report = report;

    const NormPieces np = norm_pieces(st);
    const double norm2 =
        4.0 * kPi * (np.I_R * np.I_S + params.a * np.I_ROmega * np.I_STheta);
    st.norm_const = 1.0 / std::sqrt(norm2);
    return st;
}

SeparatedState solve_eigenvalue_near(const ModelParams& params, double kappa,
                                     int branch, double E_seed,
                                     const SpectralTol& tol) {
    // Expand a bracket around the seed, staying inside the gap.
    double lambda_last = ((branch > 0) ? 1.0 : -1.0) *
                         (std::fabs(kappa) + 0.5 + std::fabs(branch) - 1.0);
    auto raw = [&](double E) {
        const AngularSolution ang = solve_angular(params.a * params.m, params.a * E,
                                                  kappa, branch, tol, lambda_last);
        lambda_last = ang.lambda;
        return solve_radial(ang.lambda, params, kappa, E, tol).mismatch_raw;
    };
    const double m_seed = raw(E_seed);
    const int w = static_cast<int>(std::lround(m_seed / (2.0 * kPi)));
    const double target = 2.0 * kPi * w;

    double width = std::max(1e-9 * params.m, 1e-3 * (params.m - std::fabs(E_seed)));
    double lo = E_seed, hi = E_seed;
    double flo = m_seed - target, fhi = flo;
    for (int it = 0; it < 60 && flo * fhi > 0.0; ++it) {
        lo = std::max(E_seed - width, -0.999999999 * params.m);
        hi = std::min(E_seed + width, 0.999999999 * params.m);
        flo = raw(lo) - target;
        fhi = raw(hi) - target;
        width *= 2.0;
    }
    if (flo * fhi > 0.0)
        throw NoRootInBracketError("solve_eigenvalue_near: bracket expansion failed");
    return solve_eigenvalue(params, kappa, branch, w, lo, hi, tol);
}

std::vector<ScanEntry> spectrum_scan(const ModelParams& params,
                                     const std::vector<double>& kappa_list,
                                     const std::vector<int>& branch_list, double E_lo,
                                     double E_hi, int n_grid,
                                     const SpectralTol& tol) {
    if (!(E_lo < E_hi) || E_lo <= -params.m || E_hi >= params.m)
        throw ConfigError("spectrum_scan: window must be a finite interval inside (-m, m)");

    struct Cell {
        double kappa;
        int branch;
    };
    std::vector<Cell> cells;
    for (double k : kappa_list)
        for (int b : branch_list) cells.push_back({k, b});

    auto scan_cell = [&](const Cell& cell) {
        std::vector<ScanEntry> found;
        std::vector<double> Es(n_grid), Ms(n_grid);
        double lambda_last = ((cell.branch > 0) ? 1.0 : -1.0) *
                             (std::fabs(cell.kappa) + 0.5 + std::fabs(cell.branch) - 1.0);
        for (int i = 0; i < n_grid; ++i) {
            const double E = E_lo + (E_hi - E_lo) * i / (n_grid - 1.0);
            const AngularSolution ang =
                solve_angular(params.a * params.m, params.a * E, cell.kappa, cell.branch,
                              tol, lambda_last);
            lambda_last = ang.lambda;
            Es[i] = E;
            Ms[i] = solve_radial(ang.lambda, params, cell.kappa, E, tol).mismatch_raw;
        }
        for (int i = 0; i + 1 < n_grid; ++i) {
            const double mlo = std::min(Ms[i], Ms[i + 1]);
            const double mhi = std::max(Ms[i], Ms[i + 1]);
            for (int w = static_cast<int>(std::ceil(mlo / (2.0 * kPi)));
                 w <= static_cast<int>(std::floor(mhi / (2.0 * kPi))); ++w) {
                try {
                    SeparatedState st = solve_eigenvalue(params, cell.kappa, cell.branch,
                                                         w, Es[i], Es[i + 1], tol);
                    ScanEntry e;
                    e.E = st.E;
                    e.lambda = st.lambda;
                    e.kappa = cell.kappa;
                    e.branch = cell.branch;
                    e.winding = w;
                    e.mismatch = st.report.final_mismatch;
                    e.net_phase_turns =
                        w + (kPi - 2.0 * std::acos(st.E / params.m)) / (2.0 * kPi);
                    found.push_back(e);
                } catch (const NoRootInBracketError&) {
                    // grid-resolution artifact; neighboring cells recover it
                }
            }
        }
        return found;
    };

    const char* wenv = std::getenv("ZGKN_WORKERS");
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t max_workers =
        wenv ? std::max(1, std::atoi(wenv)) : static_cast<int>(hw);

    std::vector<ScanEntry> all;
    for (std::size_t base = 0; base < cells.size(); base += max_workers) {
        std::vector<std::future<std::vector<ScanEntry>>> futures;
        for (std::size_t k = base; k < std::min(cells.size(), base + max_workers); ++k)
            futures.push_back(std::async(std::launch::async, scan_cell, cells[k]));
        for (auto& f : futures) {
            auto v = f.get();
            all.insert(all.end(), v.begin(), v.end());
        }
    }
    std::sort(all.begin(), all.end(), [](const ScanEntry& a, const ScanEntry& b) {
        if (a.E != b.E) return a.E < b.E;
        if (a.kappa != b.kappa) return a.kappa < b.kappa;
        return a.branch < b.branch;
    });
    // Deduplicate repeats of the same state found from adjacent grid cells.
    std::vector<ScanEntry> out;
    for (const auto& e : all) {
        bool dup = false;
        for (const auto& o : out)
            if (o.kappa == e.kappa && o.branch == e.branch &&
                std::fabs(o.E - e.E) < 1e-9 * params.m)
                dup = true;
        if (!dup) out.push_back(e);
    }
    return out;
}

SeparatedState refine_scan_entry(const ModelParams& params, const ScanEntry& hit,
                                 const SpectralTol& tol) {
    const double dE = std::max(1e-7 * (params.m - std::fabs(hit.E)), 1e-13 * params.m);
    return solve_eigenvalue(params, hit.kappa, hit.branch, hit.winding, hit.E - dE,
                            hit.E + dE, tol);
}

double radial_conservation_drift(const SeparatedState& st, int n_samples) {
    // Re-integrate the first-order complex pair from the left asymptote and
    // watch the conserved difference of moduli; this route is independent of
    // the phase-amplitude representation it is checked against.
    const ModelParams& p = st.params;
    const double lambda = st.lambda, E = st.E, kappa = st.kappa;
    auto rhs = [&](double r, const std::array<double, 4>& y, std::array<double, 4>& dy) {
        const double w = varpi(r, p.a);
        const double phase = E - (p.a * kappa + p.gamma * r) / (w * w);
        // y = (Re R1, Im R1, Re R2, Im R2)
        const double mr = p.m * r;
        // R1' = i phase R1 - (i mr + lambda) R2 / w
        dy[0] = -phase * y[1] - (-mr * y[3] + lambda * y[2]) / w;
        dy[1] = phase * y[0] - (mr * y[2] + lambda * y[3]) / w;
        // R2' = -i phase R2 + (i mr - lambda) R1 / w
        dy[2] = phase * y[3] + (-mr * y[1] - lambda * y[0]) / w;
        dy[3] = -phase * y[2] + (mr * y[0] - lambda * y[1]) / w;
    };
    DormandPrince<4>::Options opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-300;
    DormandPrince<4> ode(rhs, opt);

    const double r0 = st.lnR.front_x();
    const double r1 = st.lnR.back_x();
    const double Om0 = st.Omega(r0);
    std::array<double, 4> y{std::cos(-Om0 / 2), std::sin(-Om0 / 2), std::cos(Om0 / 2),
                            std::sin(Om0 / 2)};
    double drift = 0.0;
    double r = r0;
    for (int i = 1; i <= n_samples; ++i) {
        const double rn = r0 + (r1 - r0) * i / n_samples;
        y = ode.integrate(r, y, rn);
        r = rn;
        const double m1 = y[0] * y[0] + y[1] * y[1];
        const double m2 = y[2] * y[2] + y[3] * y[3];
        drift = std::max(drift, std::fabs(m1 - m2) / (m1 + m2));
        const double scale = std::sqrt(m1 + m2);
        if (scale > 1e100) {
            for (auto& v : y) v /= scale;
        }
    }
    return drift;
}

} // namespace zgkn
