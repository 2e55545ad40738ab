// Command-line front end: spectrum/angular/state/trajectory/interaction/
// fields/verify subcommands over the library, with JSON envelopes for
// machine consumption and CSV for plotting.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "zgkn/bohm.hpp"
#include "zgkn/hamiltonian.hpp"
#include "zgkn/interaction.hpp"
#include "zgkn/io.hpp"
#include "zgkn/verify.hpp"

using namespace zgkn;

namespace {

struct Common {
    std::string config_file;
    bool reproducible = false;
    bool json_stdout = false;
};

json load_config(const Common& c) {
    if (c.config_file.empty()) return json::object();
    std::ifstream is(c.config_file);
    if (!is) throw ConfigError("cannot open config file " + c.config_file);
    json j;
    try {
        j = json::parse(is);
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("malformed config: ") + ex.what());
    }
    return j;
}

ModelParams params_from(const json& cfg) {
    ModelParams p = ModelParams::hydrogenic(1e-3);
    if (cfg.contains("params")) p = params_from_json(cfg.at("params"));
    return p;
}

void apply_param_flags(ModelParams& p, const CLI::Option* oa, double a,
                       const CLI::Option* og, double gamma, const CLI::Option* om,
                       double m) {
    if (oa->count()) {
        p.a = a;
        p.I = p.Q / (kPi * p.a); // keep the separable moment unless overridden
    }
    if (om->count()) p.m = m;
    if (og->count()) {
        p.gamma = gamma;
        const double e = std::sqrt(std::fabs(gamma));
        p.Q = (gamma <= 0.0) ? -e : e;
        p.Qprime = e;
        p.I = p.Q / (kPi * p.a);
    }
}

void emit(const json& env, const std::string& out_path, bool json_stdout) {
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << env.dump(2) << "\n";
    }
    if (json_stdout || out_path.empty()) std::cout << env.dump(2) << "\n";
}

int run_spectrum(const Common& common, const json& cfg, ModelParams p,
                 std::vector<double> kappas, std::vector<int> branches, double lo,
                 double hi, int grid, const std::string& out,
                 const std::string& csv_out, const std::string& states_prefix) {
    const auto scan = spectrum_scan(p, kappas, branches, lo, hi, grid);
    json payload = json::array();
    const std::string h = config_hash(cfg);
    int idx = 0;
    for (const auto& e : scan) {
        payload.push_back(json{{"E", e.E},
                               {"lambda", e.lambda},
                               {"kappa", e.kappa},
                               {"branch", e.branch},
                               {"winding", e.winding},
                               {"net_phase_turns", e.net_phase_turns},
                               {"residual", e.mismatch}});
        if (!states_prefix.empty()) {
            const SeparatedState st = refine_scan_entry(p, e);
            save_state(st, states_prefix + std::to_string(idx) + ".state.json", h);
        }
        ++idx;
    }
    if (!csv_out.empty()) {
        std::ofstream os(csv_out);
        os << "E,lambda,kappa,branch,winding,net_phase_turns,residual\n";
        for (const auto& e : scan)
            os << e.E << "," << e.lambda << "," << e.kappa << "," << e.branch << ","
               << e.winding << "," << e.net_phase_turns << "," << e.mismatch << "\n";
    }
    emit(make_envelope(cfg, payload, json{{"n_found", scan.size()}}, common.reproducible),
         out, common.json_stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the Dirac problem on the double-sheeted "
                 "ring-singularity geometry"};
    app.require_subcommand(1);

    Common common;
    app.add_option("--config", common.config_file, "JSON config file");
    app.add_flag("--reproducible", common.reproducible,
                 "omit timestamps for byte-identical outputs");
    app.add_flag("--json", common.json_stdout, "force JSON envelope on stdout");

    // ---- spectrum ----
    auto* sp = app.add_subcommand("spectrum", "scan the bound-state spectrum");
    double sp_a = 1e-3, sp_gamma = -ModelParams::fine_structure, sp_m = 1.0;
    std::vector<double> sp_kappas{-0.5, 0.5};
    std::vector<int> sp_branches{-1, 1};
    std::pair<double, double> sp_window{-0.999, 0.999};
    int sp_grid = 48;
    double sp_tolE = 1e-12;
    std::string sp_out, sp_csv, sp_states;
    auto* sp_oa = sp->add_option("--a", sp_a, "ring radius");
    auto* sp_og = sp->add_option("--gamma", sp_gamma, "coupling Q*Qprime");
    auto* sp_om = sp->add_option("--mass", sp_m, "particle mass");
    sp->add_option("--kappa-list", sp_kappas, "half-integer kappa values");
    sp->add_option("--branches", sp_branches, "angular branch indices (nonzero)");
    sp->add_option("--window", sp_window, "energy window (lo hi), inside (-m,m)");
    sp->add_option("--grid", sp_grid, "scan grid points");
    sp->add_option("--tol", sp_tolE, "energy tolerance");
    sp->add_option("--out", sp_out, "envelope output path");
    sp->add_option("--csv", sp_csv, "CSV output path");
    sp->add_option("--save-states", sp_states, "prefix for refined state files");

    // ---- angular ----
    auto* an = app.add_subcommand("angular", "angular eigenvalue problem");
    double an_am = 0.0, an_aE = 0.0, an_kappa = -0.5;
    int an_branch = -1, an_dense = 0;
    std::string an_out;
    an->add_option("--am", an_am, "a*m");
    an->add_option("--aE", an_aE, "a*E");
    an->add_option("--kappa", an_kappa, "half-integer kappa")->required();
    an->add_option("--branch", an_branch, "branch index (nonzero)")->required();
    an->add_option("--dense-check", an_dense, "also run the dense oracle with N nodes");
    an->add_option("--out", an_out, "envelope output path");

    // ---- state ----
    auto* stc = app.add_subcommand("state", "evaluate a stored eigenstate on a grid");
    std::string st_file, st_csv, st_grid_out;
    int st_nr = 400, st_ntheta = 80;
    double st_rmax = 0.0, st_rscale = 0.0;
    stc->add_option("--state-file", st_file)->required();
    stc->add_option("--nr", st_nr, "radial nodes");
    stc->add_option("--ntheta", st_ntheta, "polar nodes");
    stc->add_option("--r-max", st_rmax, "grid extent (default: from the state)");
    stc->add_option("--r-scale", st_rscale, "radial map scale");
    stc->add_option("--csv", st_csv, "CSV of polar data and frames");
    stc->add_option("--save-grid", st_grid_out, "binary grid container path");

    // ---- trajectory ----
    auto* tr = app.add_subcommand("trajectory", "integrate the guided worldline");
    std::vector<std::string> tr_states;
    std::vector<double> tr_coeffs;
    std::vector<double> tr_q0{0.0, 1.0, 1.2, 0.0};
    double tr_span = 100.0, tr_cadence = 0.1;
    std::string tr_out;
    tr->add_option("--state-file", tr_states, "state file(s); several = superposition")
        ->required();
    tr->add_option("--coeffs", tr_coeffs, "superposition coefficients (re pairs)");
    tr->add_option("--q0", tr_q0, "initial event t r theta phi")->expected(4);
    tr->add_option("--tau-span", tr_span, "proper-time span");
    tr->add_option("--cadence", tr_cadence, "sample cadence");
    tr->add_option("--output", tr_out, "CSV output path")->required();

    // ---- interaction ----
    auto* in = app.add_subcommand("interaction", "mutual field-momentum quadrature");
    double in_a = 1.0, in_Q = 1.0, in_Qp = 1.0, in_I = 0.0;
    bool in_pure = false;
    std::vector<double> in_qpt{1.2, 0.5, 0.0};
    std::vector<double> in_ladder;
    bool in_target = true;
    std::string in_out;
    in->add_option("--a", in_a, "ring radius");
    in->add_option("--Q", in_Q, "ring charge");
    in->add_option("--Qprime", in_Qp, "point charge");
    in->add_option("--I", in_I, "ring current");
    in->add_flag("--pure-moment", in_pure, "set I = Q/(pi a)");
    in->add_option("--qpt", in_qpt, "source point xi eta phi")->expected(3);
    in->add_option("--eps-ladder", in_ladder, "excision radii in units of |a|");
    in->add_flag("--target-check,!--no-target-check", in_target,
                 "compare against the closed form");
    in->add_option("--out", in_out, "envelope output path");

    // ---- fields ----
    auto* fl = app.add_subcommand("fields", "field slices on a (xi,eta) grid");
    double fl_a = 1.0, fl_Q = 1.0, fl_I = 0.0;
    std::vector<double> fl_xi{-2.0, 2.0}, fl_eta{-0.95, 0.95};
    int fl_nxi = 41, fl_neta = 21;
    std::string fl_out;
    fl->add_option("--a", fl_a);
    fl->add_option("--Q", fl_Q);
    fl->add_option("--I", fl_I);
    fl->add_option("--xi-range", fl_xi)->expected(2);
    fl->add_option("--eta-range", fl_eta)->expected(2);
    fl->add_option("--nxi", fl_nxi);
    fl->add_option("--neta", fl_neta);
    fl->add_option("--out", fl_out, "CSV output path")->required();

    // ---- verify ----
    auto* vf = app.add_subcommand("verify", "run the acceptance suite");
    bool vf_quick = false;
    vf->add_flag("--quick", vf_quick, "reduced point counts");

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = load_config(common);

        if (sp->parsed()) {
            ModelParams p = params_from(cfg);
            apply_param_flags(p, sp_oa, sp_a, sp_og, sp_gamma, sp_om, sp_m);
            cfg["params"] = params_to_json(p);
            cfg["spectrum"] = {{"kappa_list", sp_kappas},
                               {"branches", sp_branches},
                               {"window", {sp_window.first, sp_window.second}},
                               {"grid", sp_grid},
                               {"tol", sp_tolE}};
            return run_spectrum(common, cfg, p, sp_kappas, sp_branches,
                                sp_window.first, sp_window.second, sp_grid, sp_out,
                                sp_csv, sp_states);
        }

        if (an->parsed()) {
            const AngularSolution sol = solve_angular(an_am, an_aE, an_kappa, an_branch);
            json payload{{"lambda", sol.lambda},
                         {"kappa", an_kappa},
                         {"branch", an_branch}};
            if (an_dense > 0) {
                const auto dense = angular_dense_spectrum(an_am, an_aE, an_kappa, an_dense);
                double best = 1e300;
                for (double lam : dense) best = std::min(best, std::fabs(lam - sol.lambda));
                payload["dense_nearest_gap"] = best;
            }
            cfg["angular"] = {{"am", an_am}, {"aE", an_aE}, {"kappa", an_kappa},
                              {"branch", an_branch}};
            emit(make_envelope(cfg, payload, json::object(), common.reproducible), an_out,
                 common.json_stdout);
            return 0;
        }

        if (stc->parsed()) {
            std::string h;
            const SeparatedState st = load_state(st_file, &h);
            GridSpec spec;
            spec.a = st.params.a;
            spec.nr = st_nr;
            spec.ntheta = st_ntheta;
            spec.r_max = (st_rmax > 0.0) ? st_rmax : st.r_max;
            spec.r_scale = (st_rscale > 0.0)
                               ? st_rscale
                               : 1.0 / (st.params.m * std::max(std::fabs(st.params.gamma), 0.05));
            const GridBiSpinor g = grid_from_state(st, spec);
            if (!st_grid_out.empty()) save_grid(g, st.params, st_grid_out, h);
            if (!st_csv.empty()) {
                std::ofstream os(st_csv);
                os << "r,theta,R,S_phase,Sigma,Phi,Theta1,Omega1,Theta2,Omega2,"
                      "n_x,n_y,n_z,v_x,v_y,v_z,speed\n";
                for (int i = 0; i < spec.nr; i += std::max(1, spec.nr / 200)) {
                    for (int j = 0; j < spec.ntheta; j += std::max(1, spec.ntheta / 40)) {
                        Vec4c psi;
                        for (int c = 0; c < 4; ++c) psi(c) = g.at(i, j, c);
                        if (psi.squaredNorm() == 0.0) continue;
                        const GeneralizedCK ck = generalized_ck(psi);
                        const OrientationFrame of = orientation(psi);
                        const CurrentSample cs = current(psi);
                        os << spec.r_node(i) << "," << spec.theta_node(j) << "," << ck.R
                           << "," << ck.S << "," << ck.Sigma << "," << ck.Phi << ","
                           << ck.Theta1 << "," << ck.Omega1 << "," << ck.Theta2 << ","
                           << ck.Omega2 << "," << of.n(0) << "," << of.n(1) << ","
                           << of.n(2) << "," << cs.v(0) << "," << cs.v(1) << ","
                           << cs.v(2) << "," << cs.v.norm() << "\n";
                    }
                }
            }
            return 0;
        }

        if (tr->parsed()) {
            std::vector<SeparatedState> states;
            std::string h0;
            for (const auto& f : tr_states) {
                std::string h;
                states.push_back(load_state(f, &h));
                if (h0.empty())
                    h0 = h;
                else if (!h.empty() && h != h0)
                    throw ConfigError("state files come from different configs");
            }
            std::unique_ptr<StateField> field;
            if (states.size() == 1) {
                field = std::make_unique<EigenstateField>(states[0]);
            } else {
                std::vector<cplx> coeffs;
                for (std::size_t i = 0; i < states.size(); ++i)
                    coeffs.push_back(i < tr_coeffs.size() ? cplx(tr_coeffs[i], 0.0)
                                                          : cplx(1.0, 0.0));
                field = std::make_unique<SuperpositionField>(states, coeffs);
            }
            const Worldline w = integrate_trajectory(
                *field, {tr_q0[0], tr_q0[1], tr_q0[2], tr_q0[3]}, tr_span, tr_cadence);
            const RingTrack rt = ring_frame_view(w);
            std::ofstream os(tr_out);
            os << "tau,t,r,theta,phi,speed,N_x,N_y,N_z,ring_x,ring_y,ring_z,"
                  "normal_x,normal_y,normal_z\n";
            for (std::size_t k = 0; k < w.samples.size(); ++k) {
                const auto& s = w.samples[k];
                os << s.tau << "," << s.Q.t << "," << s.Q.r << "," << s.Q.theta << ","
                   << s.Q.phi << "," << s.speed << "," << s.N(0) << "," << s.N(1) << ","
                   << s.N(2) << "," << rt.center[k](0) << "," << rt.center[k](1) << ","
                   << rt.center[k](2) << "," << rt.normal[k](0) << ","
                   << rt.normal[k](1) << "," << rt.normal[k](2) << "\n";
            }
            if (!w.completed) {
                std::cerr << "trajectory terminated early: " << w.termination << "\n";
                return 3;
            }
            return 0;
        }

        if (in->parsed()) {
            ModelParams p;
            p.a = in_a;
            p.Q = in_Q;
            p.Qprime = in_Qp;
            p.I = in_pure ? in_Q / (kPi * in_a) : in_I;
            p.gamma = p.Q * p.Qprime;
            QuadratureConfig qc = QuadratureConfig::defaults();
            if (!in_ladder.empty()) qc.eps_ladder = in_ladder;
            const SourcePoint q{in_qpt[0], in_qpt[1], in_qpt[2]};
            const LadderResult r0 = interaction_P0(q, p, qc);
            const VectorLadderResult rj = interaction_Pj(q, p, qc);
            json payload;
            payload["P0"] = {{"raw_ladder", r0.value},
                             {"eps", r0.eps},
                             {"extrapolated", r0.extrapolated},
                             {"convergence_exponent", r0.convergence_exponent}};
            payload["Pj"] = {{"extrapolated", rj.extrapolated},
                             {"convergence_exponent", rj.convergence_exponent}};
            if (in_target) {
                payload["P0"]["closed_form"] = r0.closed_form;
                payload["P0"]["rel_error"] = r0.rel_error;
                payload["Pj"]["closed_form"] = rj.closed_form;
                payload["Pj"]["rel_error"] = rj.rel_error;
            }
            cfg["interaction"] = {{"a", in_a}, {"Q", in_Q}, {"Qprime", in_Qp},
                                  {"I", p.I},  {"qpt", in_qpt}};
            emit(make_envelope(cfg, payload, json::object(), common.reproducible), in_out,
                 common.json_stdout);
            return 0;
        }

        if (fl->parsed()) {
            ModelParams p;
            p.a = fl_a;
            p.Q = fl_Q;
            p.I = fl_I;
            std::ofstream os(fl_out);
            os << "xi,eta,phi_kn,psi_kn,A_t,A_phi,E_rho,E_z,B_rho,B_z\n";
            for (int i = 0; i < fl_nxi; ++i) {
                const double xi = fl_xi[0] + (fl_xi[1] - fl_xi[0]) * i /
                                                 std::max(1, fl_nxi - 1);
                for (int j = 0; j < fl_neta; ++j) {
                    const double eta = fl_eta[0] + (fl_eta[1] - fl_eta[0]) * j /
                                                       std::max(1, fl_neta - 1);
                    if (xi == 0.0 && eta == 0.0) continue;
                    const BoyerLindquist bl =
                        ring_to_bl(RingCentered{xi, eta, 0.0}, p.a);
                    const FourPotential A = akn_gen(bl.r, bl.theta, p.Q, p.I, p.a);
                    const auto E2 = e_kn_cyl(bl.r, bl.theta, p.Q, p.a);
                    const auto B2 = b_kn_cyl(bl.r, bl.theta, p.I, p.a);
                    os << xi << "," << eta << "," << phi_kn(xi, eta, p.Q, p.a) << ","
                       << psi_kn(xi, eta, p.Q, p.a) << "," << A.comp[0] << ","
                       << A.comp[3] << "," << E2[0] << "," << E2[1] << "," << B2[0]
                       << "," << B2[1] << "\n";
                }
            }
            return 0;
        }

        if (vf->parsed()) {
            const auto results = run_acceptance(vf_quick);
            return all_passed(results) ? 0 : 3;
        }
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        json err;
        err["error"] = ex.what();
        std::cerr << err.dump() << "\n";
        return 3;
    }
    return 0;
}
