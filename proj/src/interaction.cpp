#include "zgkn/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace zgkn {

namespace {

struct GaussRule {
    std::vector<double> x, w; // on [-1, 1]
};

GaussRule gauss_rule(int n) {
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
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
        g.x[i] = x;
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

// Quintic smoothstep: 1 below lo, 0 above hi.
double bump(double d, double lo, double hi) {
    if (d <= lo) return 1.0;
    if (d >= hi) return 0.0;
    const double t = (d - lo) / (hi - lo);
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

struct KahanSum {
    double acc = 0.0, comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
};

// Geometry of the integration: all evaluations go through the ring-centered
// chart.  The integrand is a function of (xi, eta, phi).
struct Integrand {
    const ModelParams& params;
    Peripolar source;
    int source_sheet;
    std::array<double, 3> q_pt_cart;
    bool vector_mode;           // false: E.E，true: E x B
    bool single_sheet = false;

    // f * (cartesian components for the vector case)
    std::array<double, 3> eval(double xi, double eta, double phi) const {
        const double a = params.a;
        if (single_sheet && xi <= 0.0) return {0.0, 0.0, 0.0};
        const BoyerLindquist bl = ring_to_bl(RingCentered{xi, eta, phi}, a);
        const auto Ept = e_pt_cart(bl.r, bl.theta, bl.phi, source, params.Qprime, a);
        if (!vector_mode) {
            const auto E2 = e_kn_cyl(bl.r, bl.theta, params.Q, a);
            const double cp = std::cos(bl.phi), sp = std::sin(bl.phi);
            const std::array<double, 3> Ekn{E2[0] * cp, E2[0] * sp, E2[1]};
            const double dot =
                Ept[0] * Ekn[0] + Ept[1] * Ekn[1] + Ept[2] * Ekn[2];
            return {dot, 0.0, 0.0};
        }
        const auto B2 = b_kn_cyl(bl.r, bl.theta, params.I, a);
        const double cp = std::cos(bl.phi), sp = std::sin(bl.phi);
        const std::array<double, 3> B{B2[0] * cp, B2[0] * sp, B2[1]};
        return {Ept[1] * B[2] - Ept[2] * B[1], Ept[2] * B[0] - Ept[0] * B[2],
                Ept[0] * B[1] - Ept[1] * B[0]};
    }
};

// Euclidean distance of the projected chart point to the ring circle.
double ring_distance(double xi, double eta, double a) {
    const double aa = std::fabs(a);
    const double rho = aa * std::sqrt((1.0 + xi * xi) * (1.0 - eta * eta));
    const double z = a * xi * eta;
    return std::hypot(rho - aa, z);
}

// Polar radius in the (xi,eta) plane at which the ring distance equals d.
double sigma_of_distance(double d, double beta, double a) {
    double s = std::sqrt(2.0 * d / std::fabs(a));
    for (int it = 0; it < 80; ++it) {
        const double f = ring_distance(s * std::cos(beta), s * std::sin(beta), a) - d;
        const double h = 1e-7 * s + 1e-12;
        const double fp = (ring_distance((s + h) * std::cos(beta), (s + h) * std::sin(beta), a) -
                           ring_distance((s - h) * std::cos(beta), (s - h) * std::sin(beta), a)) /
                          (2.0 * h);
        const double step = f / fp;
        s -= step;
        if (std::fabs(step) < 1e-14 * s) break;
    }
    return s;
}

struct Regions {
    // ring tube
    double sigma0;      // outer polar radius of the ring patch
    double d_in_rg, d_out_rg;
    // point ball
    double s0;          // outer radius of the ball patch
    double d_in_pt, d_out_pt;
};

Regions make_regions(const SourcePoint& q_pt, const ModelParams& params) {
    const double a = params.a, aa = std::fabs(a);
    const double rho0 = aa * std::sqrt((1.0 + q_pt.xi * q_pt.xi) * (1.0 - q_pt.eta * q_pt.eta));
    const double z0 = a * q_pt.xi * q_pt.eta;
    const double d_ring = std::hypot(rho0 - aa, z0);
    const double d_disc = (rho0 < aa) ? std::fabs(z0) : d_ring;

    Regions R;
    const double margin_pt = 0.4 * std::min(d_disc, aa);
    R.s0 = margin_pt;
    R.d_out_pt = margin_pt;
    R.d_in_pt = 0.5 * margin_pt;

    R.sigma0 = std::min(0.6, 0.8 * std::sqrt(2.0 * 0.45 * d_ring / aa));
    // the bump must vanish before the patch boundary, for every beta
    double d_min = 1e300;
    for (int k = 0; k < 64; ++k) {
        const double beta = 2.0 * kPi * k / 64;
        d_min = std::min(d_min,
                         ring_distance(R.sigma0 * std::cos(beta), R.sigma0 * std::sin(beta), a));
    }
    R.d_out_rg = 0.98 * d_min;
    R.d_in_rg = 0.5 * R.d_out_rg;
    return R;
}

// Distance-based partition weights evaluated at a chart point.
double w_ring(double xi, double eta, double a, const Regions& R) {
    return bump(ring_distance(xi, eta, a), R.d_in_rg, R.d_out_rg);
}

double w_point(double xi, double eta, double phi, double a, const Regions& R,
               const SourcePoint& q_pt, const std::array<double, 3>& q_cart) {
    if (xi * q_pt.xi <= 0.0) return 0.0; // other sheet (or on the disc)
    const double aa = std::fabs(a);
    const double rho = aa * std::sqrt((1.0 + xi * xi) * (1.0 - eta * eta));
    const double z = a * xi * eta;
    const std::array<double, 3> x{rho * std::cos(phi), rho * std::sin(phi), z};
    const double d = std::sqrt((x[0] - q_cart[0]) * (x[0] - q_cart[0]) +
                               (x[1] - q_cart[1]) * (x[1] - q_cart[1]) +
                               (x[2] - q_cart[2]) * (x[2] - q_cart[2]));
    return bump(d, R.d_in_pt, R.d_out_pt);
}

struct ThreeSums {
    KahanSum s[3];
    void add(const std::array<double, 3>& v, double w) {
        s[0].add(v[0] * w);
        s[1].add(v[1] * w);
        s[2].add(v[2] * w);
    }
    std::array<double, 3> get() const { return {s[0].acc, s[1].acc, s[2].acc}; }
};

// Far contribution: whole chart with the near weights removed.
std::array<double, 3> integrate_far(const Integrand& f, const Regions& R,
                                    const SourcePoint& q_pt, const QuadratureConfig& cfg) {
    const double a = f.params.a;
    const GaussRule gu = gauss_rule(cfg.far_u);
    const GaussRule ge = gauss_rule(cfg.far_eta);
    ThreeSums acc;
    for (int iu = 0; iu < cfg.far_u; ++iu) {
        const double u = 0.5 * kPi * gu.x[iu];
        const double wu = 0.5 * kPi * gu.w[iu];
        const double xi = std::tan(u);
        const double sec2 = 1.0 + xi * xi;
        for (int ie = 0; ie < cfg.far_eta; ++ie) {
            const double eta = ge.x[ie];
            const double we = ge.w[ie];
            const double jac = a * a * a * (xi * xi + eta * eta) * sec2;
            const double wrg = w_ring(xi, eta, a, R);
            for (int ip = 0; ip < cfg.far_phi; ++ip) {
                const double phi = 2.0 * kPi * (ip + 0.5) / cfg.far_phi;
                const double wphi = 2.0 * kPi / cfg.far_phi;
                const double wpt = w_point(xi, eta, phi, a, R, q_pt, f.q_pt_cart);
                const double weight = 1.0 - wrg - wpt;
                if (weight == 0.0) continue;
                acc.add(f.eval(xi, eta, phi), wu * we * wphi * jac * weight);
            }
        }
    }
    return acc.get();
}

// Ring-tube contribution outside the eps excision, in (sigma, beta, phi).
std::array<double, 3> integrate_ring(const Integrand& f, const Regions& R, double eps,
                                     const QuadratureConfig& cfg) {
    const double a = f.params.a;
    const GaussRule gp = gauss_rule(cfg.gauss_per_panel);
    ThreeSums acc;
    for (int ib = 0; ib < cfg.ring_beta; ++ib) {
        const double beta = 2.0 * kPi * (ib + 0.5) / cfg.ring_beta;
        const double wbeta = 2.0 * kPi / cfg.ring_beta;
        const double cb = std::cos(beta), sb = std::sin(beta);
        const double s_eps = sigma_of_distance(eps, beta, a);
        if (s_eps >= R.sigma0)
            throw QuadratureDivergenceError("excision exceeds the ring patch");
        // geometrically graded panels resolve the near-excision behavior
        std::vector<double> knots{s_eps};
        double s = s_eps;
        while (s < R.sigma0) {
            s = std::min(s * 1.9, R.sigma0);
            knots.push_back(s);
        }
        (void)cfg.ring_panels;
        for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
            const double mid = 0.5 * (knots[p] + knots[p + 1]);
            const double half = 0.5 * (knots[p + 1] - knots[p]);
            for (int iq = 0; iq < cfg.gauss_per_panel; ++iq) {
                const double sg = mid + half * gp.x[iq];
                const double wsg = half * gp.w[iq];
                const double xi = sg * cb, eta = sg * sb;
                const double wrg = bump(ring_distance(xi, eta, a), R.d_in_rg, R.d_out_rg);
                if (wrg == 0.0) continue;
                const double jac = std::fabs(a * a * a) * sg * sg * sg;
                for (int ip = 0; ip < cfg.ring_phi; ++ip) {
                    const double phi = 2.0 * kPi * (ip + 0.5) / cfg.ring_phi;
                    const double wphi = 2.0 * kPi / cfg.ring_phi;
                    acc.add(f.eval(xi, eta, phi), wbeta * wsg * wphi * jac * wrg);
                }
            }
        }
    }
    return acc.get();
}

// Ball contribution around the point charge, outside the eps excision.
std::array<double, 3> integrate_ball(const Integrand& f, const Regions& R, double eps,
                                     const QuadratureConfig& cfg) {
    const double a = f.params.a;
    const GaussRule gm = gauss_rule(cfg.ball_mu);
    const GaussRule gp = gauss_rule(cfg.gauss_per_panel);
    if (eps >= R.s0)
        throw QuadratureDivergenceError("excision exceeds the ball patch");
    std::vector<double> knots{eps};
    double s = eps;
    while (s < R.s0) {
        s = std::min(s * 1.9, R.s0);
        knots.push_back(s);
    }
    (void)cfg.ball_panels;
    const int sheet = (f.source_sheet > 0) ? 1 : -1;
    ThreeSums acc;
    for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
        const double mid = 0.5 * (knots[p] + knots[p + 1]);
        const double half = 0.5 * (knots[p + 1] - knots[p]);
        for (int iq = 0; iq < cfg.gauss_per_panel; ++iq) {
            const double sg = mid + half * gp.x[iq];
            const double wsg = half * gp.w[iq];
            const double wb = bump(sg, R.d_in_pt, R.d_out_pt);
            if (wb == 0.0) continue;
            for (int im = 0; im < cfg.ball_mu; ++im) {
                const double mu = gm.x[im];
                const double wmu = gm.w[im];
                const double st = std::sqrt(1.0 - mu * mu);
                for (int ip = 0; ip < cfg.ball_phi; ++ip) {
                    const double phb = 2.0 * kPi * (ip + 0.5) / cfg.ball_phi;
                    const double wphb = 2.0 * kPi / cfg.ball_phi;
                    const std::array<double, 3> x{
                        f.q_pt_cart[0] + sg * st * std::cos(phb),
                        f.q_pt_cart[1] + sg * st * std::sin(phb),
                        f.q_pt_cart[2] + sg * mu};
                    const double rho = std::hypot(x[0], x[1]);
                    const double phi = std::atan2(x[1], x[0]);
                    const auto rt = cyl_to_os(rho, x[2], sheet, a);
                    const double xi = rt[0] / a;
                    const double eta = std::cos(rt[1]);
                    acc.add(f.eval(xi, eta, phi), wsg * wmu * wphb * wb * sg * sg);
                }
            }
        }
    }
    return acc.get();
}

struct LadderRaw {
    std::vector<double> eps;
    std::vector<std::array<double, 3>> vals;
    std::array<double, 3> extrap{};
    double exponent = 0.0;
};

LadderRaw run_ladder(const Integrand& f, const SourcePoint& q_pt,
                     const QuadratureConfig& cfg) {
    const Regions R = make_regions(q_pt, f.params);
    const std::array<double, 3> far = integrate_far(f, R, q_pt, cfg);

    LadderRaw out;
    for (double e_rel : cfg.eps_ladder) {
        const double eps = e_rel * std::fabs(f.params.a);
        const auto ring = integrate_ring(f, R, eps, cfg);
        const auto ball = integrate_ball(f, R, eps, cfg);
        std::array<double, 3> total;
        for (int k = 0; k < 3; ++k)
            total[k] = (far[k] + ring[k] + ball[k]) / (4.0 * kPi);
        out.eps.push_back(eps);
        out.vals.push_back(total);
    }

    // Least-squares fit I(eps) = I0 + c sqrt(eps) on the finest rungs.
    const std::size_t n = out.eps.size();
    const std::size_t k0 = (n > 4) ? n - 4 : 0;
    for (int c = 0; c < 3; ++c) {
        double S = 0, Sx = 0, Sxx = 0, Sy = 0, Sxy = 0;
        for (std::size_t i = k0; i < n; ++i) {
            const double x = std::sqrt(out.eps[i]);
            const double y = out.vals[i][c];
            S += 1;
            Sx += x;
            Sxx += x * x;
            Sy += y;
            Sxy += x * y;
        }
        const double det = S * Sxx - Sx * Sx;
        out.extrap[c] = (Sxx * Sy - Sx * Sxy) / det;
    }

    // Convergence exponent from successive differences of the dominant
    // component, with a monotonicity guard.
    int dominant = 0;
    double dmax = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double d = std::fabs(out.vals.front()[c] - out.extrap[c]);
        if (d > dmax) {
            dmax = d;
            dominant = c;
        }
    }
    std::vector<double> ps;
    int violations = 0;
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double d1 = out.vals[i][dominant] - out.vals[i + 1][dominant];
        const double d2 = out.vals[i + 1][dominant] - out.vals[i + 2][dominant];
        if (d1 * d2 <= 0.0) {
            ++violations;
            continue;
        }
        const double ratio = out.eps[i] / out.eps[i + 1];
        ps.push_back(std::log(std::fabs(d1 / d2)) / std::log(ratio));
    }
    if (ps.empty() || violations > static_cast<int>(n) / 2)
        throw QuadratureDivergenceError("excision ladder is not converging monotonically");
    std::sort(ps.begin(), ps.end());
    out.exponent = ps[ps.size() / 2];
    return out;
}

Integrand make_integrand(const SourcePoint& q_pt, const ModelParams& params,
                         bool vector_mode, bool single_sheet) {
    if (q_pt.xi == 0.0)
        throw ConfigError("source point must be off the branch disc (xi != 0)");
    const BoyerLindquist bl = ring_to_bl(RingCentered{q_pt.xi, q_pt.eta, q_pt.phi},
                                         params.a);
    Integrand f{params,
                peripolar_from_bl(bl.r, bl.theta, bl.phi, params.a),
                q_pt.xi > 0 ? 1 : -1,
                project_cartesian(bl.r, bl.theta, bl.phi, params.a),
                vector_mode,
                single_sheet};
    return f;
}

} // namespace

QuadratureConfig QuadratureConfig::defaults() {
    QuadratureConfig cfg;
    for (int k = 0; k <= 10; ++k) cfg.eps_ladder.push_back(std::pow(10.0, -1.0 - 0.2 * k));
    return cfg;
}

LadderResult interaction_P0(const SourcePoint& q_pt, const ModelParams& params,
                            const QuadratureConfig& cfg) {
    const Integrand f = make_integrand(q_pt, params, false, cfg.single_sheet_debug);
    const LadderRaw raw = run_ladder(f, q_pt, cfg);
    LadderResult out;
    out.eps = raw.eps;
    for (const auto& v : raw.vals) out.value.push_back(v[0]);
    out.extrapolated = raw.extrap[0];
    out.convergence_exponent = raw.exponent;
    out.closed_form = params.Qprime * phi_kn(q_pt.xi, q_pt.eta, params.Q, params.a);
    out.rel_error = std::fabs(out.extrapolated - out.closed_form) /
                    std::max(std::fabs(out.closed_form), 1e-300);
    return out;
}

VectorLadderResult interaction_Pj(const SourcePoint& q_pt, const ModelParams& params,
                                  const QuadratureConfig& cfg) {
    const Integrand f = make_integrand(q_pt, params, true, cfg.single_sheet_debug);
    const LadderRaw raw = run_ladder(f, q_pt, cfg);
    VectorLadderResult out;
    out.eps = raw.eps;
    out.value = raw.vals;
    out.extrapolated = raw.extrap;
    out.convergence_exponent = raw.exponent;
    const BoyerLindquist bl = ring_to_bl(RingCentered{q_pt.xi, q_pt.eta, q_pt.phi},
                                         params.a);
    const double Aphys = a_phys_azimuthal(bl.r, bl.theta, params.I, params.a);
    out.closed_form = {params.Qprime * Aphys * -std::sin(bl.phi),
                       params.Qprime * Aphys * std::cos(bl.phi), 0.0};
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 3; ++k) {
        num += (out.extrapolated[k] - out.closed_form[k]) *
               (out.extrapolated[k] - out.closed_form[k]);
        den += out.closed_form[k] * out.closed_form[k];
    }
    out.rel_error = std::sqrt(num / std::max(den, 1e-300));
    return out;
}

} // namespace zgkn
