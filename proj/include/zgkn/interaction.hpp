#pragma once

#include <array>
#include <vector>

#include "zgkn/fields.hpp"
#include "zgkn/geometry.hpp"

namespace zgkn {

/// Excision-quadrature configuration.  The domain is split by a smooth
/// partition of unity into a far region (tensor Gauss over the whole
/// double-sheeted chart), a ring-tube region in polar coordinates of the
/// (xi,eta) plane, and a ball around the point charge; the epsilon excision
/// enters only the near regions, so the far integral is shared by the whole
/// ladder.
struct QuadratureConfig {
    std::vector<double> eps_ladder; // in units of |a|; default 1e-1 .. 1e-3
    int far_u = 48;
    int far_eta = 40;
    int far_phi = 24;
    int ring_beta = 64;
    int ring_phi = 24;
    int ring_panels = 8;
    int ball_mu = 12;
    int ball_phi = 12;
    int ball_panels = 8;
    int gauss_per_panel = 6;
    bool single_sheet_debug = false; // restrict to the xi>0 sheet (tests only)

    static QuadratureConfig defaults();
};

struct LadderResult {
    std::vector<double> eps;
    std::vector<double> value;
    double extrapolated = 0.0;
    double closed_form = 0.0;
    double rel_error = 0.0;
    double convergence_exponent = 0.0;
};

struct VectorLadderResult {
    std::vector<double> eps;
    std::vector<std::array<double, 3>> value;
    std::array<double, 3> extrapolated{};
    std::array<double, 3> closed_form{};
    double rel_error = 0.0;
    double convergence_exponent = 0.0;
};

/// Location of the point charge in the ring-centered chart; the sheet is the
/// sign of xi (points on the branch disc are not valid source locations).
struct SourcePoint {
    double xi;
    double eta;
    double phi;
};

/// Time component of the mutual field momentum:
/// (1/4pi) int E_pt . E_ring over the excised double-sheeted space, laddered
/// in the excision radius and extrapolated in sqrt(eps).  The closed-form
/// target is Qprime * phi_kn(q_pt).
LadderResult interaction_P0(const SourcePoint& q_pt, const ModelParams& params,
                            const QuadratureConfig& cfg = QuadratureConfig::defaults());

/// Spatial components: (1/4pi) int E_pt x B_ring, target Qprime * A(q_pt).
VectorLadderResult interaction_Pj(const SourcePoint& q_pt, const ModelParams& params,
                                  const QuadratureConfig& cfg = QuadratureConfig::defaults());

} // namespace zgkn
