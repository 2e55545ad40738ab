#pragma once

#include "zgkn/dirac_matrices.hpp"
#include "zgkn/grid.hpp"
#include "zgkn/spectral.hpp"

namespace zgkn {

/// Positive-definite weight of the mode inner product at a point.
Mat4c mhat(double r, double theta, double a);

/// Its eigenvalues 1 +/- a sin(theta)/varpi, each with multiplicity two.
std::array<double, 2> mhat_eigenvalues(double r, double theta, double a);

/// Apply the stationary mode Hamiltonian to a grid state (fixed kappa taken
/// from the grid).  Separable and anomalous couplings both supported.
GridBiSpinor hamiltonian_apply(const GridBiSpinor& psi, const ModelParams& params);

/// Weighted inner product <psi, phi> = 2 pi  int psi^dag Mhat phi  dtheta dr.
std::complex<double> inner_product(const GridBiSpinor& psi, const GridBiSpinor& phi);

double m_norm(const GridBiSpinor& psi);

enum class SymmetryOp { S_hat, K_hat, C_hat, C_tilde };

/// Discrete (anti-)symmetries: the sheet swap S, complex conjugation K, the
/// spectrum-reflection operator C = gamma^0 K S, and the charge conjugation
/// C~ = i gamma^2 K.  K-containing operators flip the stored kappa and E.
GridBiSpinor symmetry_apply(const GridBiSpinor& psi, SymmetryOp op);

/// Sample a separated eigenstate onto a grid (normalized, t = 0 slice).
GridBiSpinor grid_from_state(const SeparatedState& st, const GridSpec& spec);

/// Relative residual ||(H - E) psi|| / ||psi|| in the weighted norm.
double eigen_residual(const GridBiSpinor& psi, const ModelParams& params, double E);

} // namespace zgkn
