#pragma once

#include <complex>
#include <vector>

#include "zgkn/geometry.hpp"

namespace zgkn {

/// Tensor grid for single-kappa bi-spinor modes.  The radial coordinate is
/// compactified, r = r_scale tan(x) with uniform half-offset nodes in x; the
/// polar coordinate is pole-clustered, theta = pi sin^2(pi y / 2), so that
/// half-integer modes (S ~ theta^|kappa|) become odd smooth functions of the
/// mapped variable at both poles.  Both node sets are symmetric under the
/// sheet swap (x -> -x, y -> 1-y).
struct GridSpec {
    int nr = 0;
    int ntheta = 0;
    double r_scale = 1.0;
    double r_max = 10.0;
    double a = 1.0; // ring radius of the underlying manifold

    double x_max() const { return std::atan(r_max / r_scale); }
    double dx() const { return 2.0 * x_max() / nr; }
    double dy() const { return 1.0 / ntheta; }
    double x_node(int i) const { return -x_max() + (i + 0.5) * dx(); }
    double y_node(int j) const { return (j + 0.5) * dy(); }
    double r_node(int i) const { return r_scale * std::tan(x_node(i)); }
    double theta_node(int j) const {
        const double sh = std::sin(kPi * y_node(j) / 2.0);
        return kPi * sh * sh;
    }
    double drdx(int i) const {
        const double t = std::tan(x_node(i));
        return r_scale * (1.0 + t * t);
    }
    double dthetady(int j) const {
        return kPi * kPi / 2.0 * std::sin(kPi * y_node(j));
    }
    bool operator==(const GridSpec& o) const {
        return nr == o.nr && ntheta == o.ntheta && r_scale == o.r_scale &&
               r_max == o.r_max && a == o.a;
    }
};

/// C^4-valued mode data on a GridSpec; layout ((i*ntheta + j)*4 + c).
struct GridBiSpinor {
    GridSpec spec;
    double kappa = 0.0;
    double E = 0.0; // mode frequency when known (eigenstates), else 0
    std::vector<std::complex<double>> data;

    GridBiSpinor() = default;
    GridBiSpinor(const GridSpec& s, double kap)
        : spec(s), kappa(kap), data(static_cast<std::size_t>(s.nr) * s.ntheta * 4) {}

    std::complex<double>& at(int i, int j, int c) {
        return data[(static_cast<std::size_t>(i) * spec.ntheta + j) * 4 + c];
    }
    const std::complex<double>& at(int i, int j, int c) const {
        return data[(static_cast<std::size_t>(i) * spec.ntheta + j) * 4 + c];
    }
};

/// Fourth-order first derivatives with respect to r and theta on the mapped
/// grid.  Radial ghosts are zero (decayed modes); polar ghosts are odd
/// reflections, valid for half-integer kappa modes.
GridBiSpinor deriv_r(const GridBiSpinor& g);
GridBiSpinor deriv_theta(const GridBiSpinor& g);

} // namespace zgkn
