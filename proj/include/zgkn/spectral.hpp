#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "zgkn/geometry.hpp"
#include "zgkn/ode.hpp"

namespace zgkn {

struct SpectralTol {
    double tol_E = 1e-12;      // outer energy tolerance, units of m
    double tol_match = 1e-10;  // phase mismatch tolerance, radians
    double tol_lambda = 1e-12; // inner angular eigenvalue tolerance
    double ode_rtol = 1e-12;
    double ode_atol = 1e-12;
};

/// Diagnostics of a nested shooting solve.
struct ShootingReport {
    bool converged = false;
    double final_mismatch = 0.0;
    int winding = 0;
    int energy_iterations = 0;
    int angular_solves = 0;
    double r_max = 0.0;
    std::vector<std::pair<double, double>> bracket_history; // (E, mismatch)
};

/// Angular eigenpair for one (am, aE, kappa) and branch.
struct AngularSolution {
    double lambda = 0.0;
    double theta_start = 0.0;   // tables cover [theta_start, pi - theta_start]
    double Theta0 = 0.0;        // boundary value of the phase at theta = 0
    double Theta_pi = 0.0;      // ... at theta = pi (before 2*pi shifts)
    HermiteTable Theta;         // continuous phase on [0, pi]
    HermiteTable lnS;           // log-amplitude on [theta_start, pi - theta_start]
    double kappa = 0.0;

    /// Amplitude with the power-law pole extension S ~ theta^|kappa|.
    double lnS_at(double theta) const;
    double Theta_at(double theta) const { return Theta(theta); }
};

/// A separated eigenstate: the radial and angular phase/amplitude tables
/// plus the spectral labels.  Amplitudes are stored unnormalized; norm_const
/// rescales the assembled state to unit norm.
struct SeparatedState {
    ModelParams params;
    double kappa = 0.0;
    int branch = 0;   // angular branch index, nonzero
    int winding = 0;  // radial phase winding label
    double E = 0.0;
    double lambda = 0.0;
    double norm_const = 1.0;
    double r_max = 0.0;
    HermiteTable Omega;  // radial phase, continuous across r = 0
    HermiteTable lnR;    // radial log-amplitude, value 0 at r = 0
    AngularSolution angular;
    ShootingReport report;

    double Omega_at(double r) const { return Omega(r); }
    double lnR_at(double r) const;   // linear tail extension beyond r_max
    double Theta_at(double theta) const { return angular.Theta_at(theta); }
    double lnS_at(double theta) const { return angular.lnS_at(theta); }
};

/// Closed-form relativistic hydrogen level; the a->0 reference ladder.
/// n >= 1 is the principal quantum number, kappa_d the integer Dirac label
/// (kappa_d != 0, -n <= kappa_d <= n-1).
double sommerfeld_energy(int n, int kappa_d, double alpha, double m);

/// Right-hand side of the angular phase equation.
double angular_rhs(double theta, double Theta, double am, double aE, double kappa,
                   double lambda);

/// Right-hand side of the radial phase equation.
double radial_rhs(double r, double Omega, double m, double a, double gamma,
                  double kappa, double lambda, double E);

/// Asymptotic decay branches of the radial phase at r -> +/- infinity.
/// Throws NoGapError when |E| >= m.
std::array<double, 2> radial_saddles(double E, double m);

/// Angular eigenvalue and eigenfunctions by two-sided shooting with the
/// pole-regular boundary data; branch n in Z \ {0}, anchored at the
/// reference point am = aE = 0 where the ladder is integer-valued.
AngularSolution solve_angular(double am, double aE, double kappa, int branch,
                              const SpectralTol& tol = {},
                              std::optional<double> lambda_guess = std::nullopt);

/// Dense-matrix discretization of the angular operator on a pole-clustered
/// grid; returns all eigenvalues sorted ascending.  Independent oracle for
/// solve_angular.
std::vector<double> angular_dense_spectrum(double am, double aE, double kappa,
                                           int n_nodes = 400);

struct RadialShot {
    double mismatch_raw = 0.0; // Omega_left(0) - Omega_right(0)
    double omega_left0 = 0.0;
    double omega_right0 = 0.0;
    double r_max = 0.0;
};

/// Integrate the radial phase from both ends to the matching point r = 0.
/// The raw mismatch is an eigenvalue indicator: a bound state corresponds to
/// a value in 2*pi*Z, the integer being the winding label.
RadialShot solve_radial(double lambda, const ModelParams& params, double kappa,
                        double E, const SpectralTol& tol = {});

/// Nested two-parameter shooting: outer root-find on E with the angular
/// eigenvalue refreshed at every iterate.  [E_lo, E_hi] must bracket the
/// winding-w crossing.  Throws NoRootInBracketError otherwise.
SeparatedState solve_eigenvalue(const ModelParams& params, double kappa, int branch,
                                int winding, double E_lo, double E_hi,
                                const SpectralTol& tol = {});

/// Convenience: seeded search; expands a bracket around E_seed.
SeparatedState solve_eigenvalue_near(const ModelParams& params, double kappa,
                                     int branch, double E_seed,
                                     const SpectralTol& tol = {});

struct ScanEntry {
    double E;
    double lambda;
    double kappa;
    int branch;
    int winding;
    double net_phase_turns; // signed winding of the connecting orbit
    double mismatch;
};

/// Sweep the window, detect all 2*pi crossings of the mismatch per
/// (kappa, branch) cell, and refine each to an eigenvalue.  Results are
/// deduplicated and sorted by E.
std::vector<ScanEntry> spectrum_scan(const ModelParams& params,
                                     const std::vector<double>& kappa_list,
                                     const std::vector<int>& branch_list, double E_lo,
                                     double E_hi, int n_grid = 48,
                                     const SpectralTol& tol = {});

/// Full state (tables, normalization) for a scan hit.
SeparatedState refine_scan_entry(const ModelParams& params, const ScanEntry& hit,
                                 const SpectralTol& tol = {});

/// Independent conservation check: integrates the first-order complex pair
/// and returns the maximal relative drift of |R1|^2 - |R2|^2.
double radial_conservation_drift(const SeparatedState& st, int n_samples = 200);

} // namespace zgkn
