#include "zgkn/hamiltonian.hpp"

#include <cmath>

namespace zgkn {

namespace {

using C = std::complex<double>;
constexpr C I_unit{0.0, 1.0};

// Stencil (1, -8, 0, 8, -1)/(12 h).
template <typename Fetch>
inline C stencil5(Fetch&& v, int k, double inv12h) {
    return (v(k - 2) - 8.0 * v(k - 1) + 8.0 * v(k + 1) - v(k + 2)) * inv12h;
}

} // namespace

GridBiSpinor deriv_r(const GridBiSpinor& g) {
    GridBiSpinor out(g.spec, g.kappa);
    out.E = g.E;
    const int nr = g.spec.nr, nt = g.spec.ntheta;
    const double inv12h = 1.0 / (12.0 * g.spec.dx());
    for (int i = 0; i < nr; ++i) {
        const double inv_rp = 1.0 / g.spec.drdx(i);
        for (int j = 0; j < nt; ++j) {
            for (int c = 0; c < 4; ++c) {
                auto v = [&](int k) -> C {
                    if (k < 0 || k >= nr) return {0.0, 0.0};
                    return g.at(k, j, c);
                };
                out.at(i, j, c) = stencil5(v, i, inv12h) * inv_rp;
            }
        }
    }
    return out;
}

GridBiSpinor deriv_theta(const GridBiSpinor& g) {
    GridBiSpinor out(g.spec, g.kappa);
    out.E = g.E;
    const int nr = g.spec.nr, nt = g.spec.ntheta;
    const double inv12h = 1.0 / (12.0 * g.spec.dy());
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            const double inv_tp = 1.0 / g.spec.dthetady(j);
            for (int c = 0; c < 4; ++c) {
                auto v = [&](int k) -> C {
                    if (k < 0) return -g.at(i, -1 - k, c);          // odd at theta=0
                    if (k >= nt) return -g.at(i, 2 * nt - 1 - k, c); // odd at theta=pi
                    return g.at(i, k, c);
                };
                out.at(i, j, c) = stencil5(v, j, inv12h) * inv_tp;
            }
        }
    }
    return out;
}

Mat4c mhat(double r, double theta, double a) {
    const double q = a * std::sin(theta) / varpi(r, a);
    return Mat4c::Identity() + q * dirac::alpha(2);
}

std::array<double, 2> mhat_eigenvalues(double r, double theta, double a) {
    const double q = a * std::sin(theta) / varpi(r, a);
    return {1.0 + q, 1.0 - q};
}

GridBiSpinor hamiltonian_apply(const GridBiSpinor& psi, const ModelParams& params) {
    if (psi.spec.a != params.a)
        throw GridMismatchError("hamiltonian_apply: grid ring radius differs from params");
    const GridBiSpinor dpsi_r = deriv_r(psi);
    const GridBiSpinor dpsi_t = deriv_theta(psi);
    GridBiSpinor out(psi.spec, psi.kappa);
    out.E = psi.E;

    const double a = params.a, m = params.m, kap = psi.kappa;
    const double mu_an = params.Qprime * (params.Q - params.I * kPi * a);
    const int nr = psi.spec.nr, nt = psi.spec.ntheta;

    for (int i = 0; i < nr; ++i) {
        const double r = psi.spec.r_node(i);
        const double w = varpi(r, a);
        for (int j = 0; j < nt; ++j) {
            const double th = psi.spec.theta_node(j);
            const double s = std::sin(th), c = std::cos(th);
            const double rho2 = r * r + a * a * c * c;
            const C rho{r, a * c};
            const C rho_c{r, -a * c};

            const C p0 = psi.at(i, j, 0), p1 = psi.at(i, j, 1), p2 = psi.at(i, j, 2),
                    p3 = psi.at(i, j, 3);
            const C dr0 = dpsi_r.at(i, j, 0), dr1 = dpsi_r.at(i, j, 1),
                    dr2 = dpsi_r.at(i, j, 2), dr3 = dpsi_r.at(i, j, 3);
            const C dt0 = dpsi_t.at(i, j, 0), dt1 = dpsi_t.at(i, j, 1),
                    dt2 = dpsi_t.at(i, j, 2), dt3 = dpsi_t.at(i, j, 3);

            // W = -i varpi gamma^3 (d_r psi) - i gamma^1 (d_theta psi)
            //     + kappa ((a/varpi) gamma^0 + csc(theta) gamma^2) psi
            //     + [V0 gamma^0 + V2 gamma^2] psi + m diag(rho,rho,rho*,rho*) psi
            // with gamma^0 psi = (p2,p3,p0,p1),
            //      gamma^1 psi = (-p3,-p2,p1,p0),
            //      gamma^2 psi = (i p3, -i p2, -i p1, i p0),
            //      gamma^3 psi = (-p2, p3, p0, -p1).
            const double V0 = params.gamma * r / w + mu_an * a * a * r * s * s / (w * rho2);
            const double V2 = mu_an * a * r * s / rho2;
            const double csc = 1.0 / s;

            C W0 = -I_unit * w * (-dr2) - I_unit * (-dt3) +
                   kap * ((a / w) * p2 + csc * (I_unit * p3)) + V0 * p2 +
                   V2 * (I_unit * p3) + m * rho * p0;
            C W1 = -I_unit * w * (dr3) - I_unit * (-dt2) +
                   kap * ((a / w) * p3 + csc * (-I_unit * p2)) + V0 * p3 +
                   V2 * (-I_unit * p2) + m * rho * p1;
            C W2 = -I_unit * w * (dr0) - I_unit * (dt1) +
                   kap * ((a / w) * p0 + csc * (-I_unit * p1)) + V0 * p0 +
                   V2 * (-I_unit * p1) + m * rho_c * p2;
            C W3 = -I_unit * w * (-dr1) - I_unit * (dt0) +
                   kap * ((a / w) * p1 + csc * (I_unit * p0)) + V0 * p1 +
                   V2 * (I_unit * p0) + m * rho_c * p3;

            // (M^0)^{-1} = (varpi gamma^0 + a sin(theta) gamma^2) / |rho|^2.
            const double as = a * s;
            out.at(i, j, 0) = (w * W2 + as * (I_unit * W3)) / rho2;
            out.at(i, j, 1) = (w * W3 + as * (-I_unit * W2)) / rho2;
            out.at(i, j, 2) = (w * W0 + as * (-I_unit * W1)) / rho2;
            out.at(i, j, 3) = (w * W1 + as * (I_unit * W0)) / rho2;
        }
    }
    return out;
}

std::complex<double> inner_product(const GridBiSpinor& psi, const GridBiSpinor& phi) {
    if (!(psi.spec == phi.spec)) throw GridMismatchError("inner_product: grids differ");
    const int nr = psi.spec.nr, nt = psi.spec.ntheta;
    const double dx = psi.spec.dx(), dy = psi.spec.dy();
    const double a = psi.spec.a;
    C acc{0.0, 0.0}, comp{0.0, 0.0};
    for (int i = 0; i < nr; ++i) {
        const double wr = dx * psi.spec.drdx(i);
        const double w = varpi(psi.spec.r_node(i), a);
        for (int j = 0; j < nt; ++j) {
            const double wt = dy * psi.spec.dthetady(j);
            const double q = a * std::sin(psi.spec.theta_node(j)) / w;
            const C a0 = psi.at(i, j, 0), a1 = psi.at(i, j, 1), a2 = psi.at(i, j, 2),
                    a3 = psi.at(i, j, 3);
            const C b0 = phi.at(i, j, 0), b1 = phi.at(i, j, 1), b2 = phi.at(i, j, 2),
                    b3 = phi.at(i, j, 3);
            const C plain = std::conj(a0) * b0 + std::conj(a1) * b1 +
                            std::conj(a2) * b2 + std::conj(a3) * b3;
            // psi^dag alpha^2 phi with alpha^2 phi = (-i b1, i b0, i b3, -i b2)
            const C spin2 = std::conj(a0) * (-I_unit * b1) +
                            std::conj(a1) * (I_unit * b0) +
                            std::conj(a2) * (I_unit * b3) +
                            std::conj(a3) * (-I_unit * b2);
            const C cell = wr * wt * (plain + q * spin2);
            const C y = cell - comp;
            const C t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
    }
    return 2.0 * kPi * acc;
}

double m_norm(const GridBiSpinor& psi) {
    return std::sqrt(std::real(inner_product(psi, psi)));
}

GridBiSpinor symmetry_apply(const GridBiSpinor& psi, SymmetryOp op) {
    const int nr = psi.spec.nr, nt = psi.spec.ntheta;
    GridBiSpinor out(psi.spec, psi.kappa);
    out.E = psi.E;
    switch (op) {
    case SymmetryOp::S_hat: {
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nt; ++j)
                for (int c = 0; c < 4; ++c)
                    out.at(i, j, c) = psi.at(nr - 1 - i, nt - 1 - j, c);
        break;
    }
    case SymmetryOp::K_hat: {
        out.kappa = -psi.kappa;
        out.E = -psi.E;
        for (std::size_t k = 0; k < psi.data.size(); ++k)
            out.data[k] = std::conj(psi.data[k]);
        break;
    }
    case SymmetryOp::C_hat: {
        const GridBiSpinor ks = symmetry_apply(symmetry_apply(psi, SymmetryOp::S_hat),
                                               SymmetryOp::K_hat);
        out.kappa = ks.kappa;
        out.E = ks.E;
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nt; ++j) {
                // gamma^0: swap the two-spinor halves
                out.at(i, j, 0) = ks.at(i, j, 2);
                out.at(i, j, 1) = ks.at(i, j, 3);
                out.at(i, j, 2) = ks.at(i, j, 0);
                out.at(i, j, 3) = ks.at(i, j, 1);
            }
        break;
    }
    case SymmetryOp::C_tilde: {
        const GridBiSpinor k = symmetry_apply(psi, SymmetryOp::K_hat);
        out.kappa = k.kappa;
        out.E = k.E;
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nt; ++j) {
                // i gamma^2: psi -> i(i p3, -i p2, -i p1, i p0)
                out.at(i, j, 0) = -k.at(i, j, 3);
                out.at(i, j, 1) = k.at(i, j, 2);
                out.at(i, j, 2) = k.at(i, j, 1);
                out.at(i, j, 3) = -k.at(i, j, 0);
            }
        break;
    }
    }
    return out;
}

GridBiSpinor grid_from_state(const SeparatedState& st, const GridSpec& spec) {
    if (spec.a != st.params.a)
        throw GridMismatchError("grid_from_state: grid ring radius differs from state");
    GridBiSpinor g(spec, st.kappa);
    g.E = st.E;
    for (int i = 0; i < spec.nr; ++i) {
        const double r = spec.r_node(i);
        const double lr = st.lnR_at(r);
        const double Om = st.Omega_at(r);
        const C em{std::cos(0.5 * Om), -std::sin(0.5 * Om)};
        const C ep = std::conj(em);
        for (int j = 0; j < spec.ntheta; ++j) {
            const double th = spec.theta_node(j);
            const double amp = st.norm_const * std::exp(lr + st.lnS_at(th));
            const double Th = st.Theta_at(th);
            const double ch = std::cos(0.5 * Th), sh = std::sin(0.5 * Th);
            g.at(i, j, 0) = amp * ch * em;
            g.at(i, j, 1) = amp * sh * ep;
            g.at(i, j, 2) = amp * ch * ep;
            g.at(i, j, 3) = amp * sh * em;
        }
    }
    return g;
}

double eigen_residual(const GridBiSpinor& psi, const ModelParams& params, double E) {
    GridBiSpinor hpsi = hamiltonian_apply(psi, params);
    for (std::size_t k = 0; k < hpsi.data.size(); ++k) hpsi.data[k] -= E * psi.data[k];
    return m_norm(hpsi) / m_norm(psi);
}

} // namespace zgkn
