#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>
#include <vector>

#include "zgkn/errors.hpp"

namespace zgkn {

/// Embedded Dormand-Prince 5(4) pair with adaptive step control.
/// Accepted steps can be recorded through a callback; values inside a step
/// are recovered by cubic Hermite interpolation of (y, y') at the step ends,
/// which at the tolerances used here is as accurate as the step itself.
template <int N>
class DormandPrince {
public:
    using State = std::array<double, N>;
    using Rhs = std::function<void(double, const State&, State&)>;

    struct Options {
        double rtol = 1e-12;
        double atol = 1e-12;
        double h_init = 0.0;   // 0: choose automatically
        double h_min = 0.0;    // 0: (b-a) * 1e-14 floor
        double h_max = 0.0;    // 0: |b-a|
        long max_steps = 40'000'000;
    };

    struct StepRecord {
        double x;
        State y;
        State dy;
    };

    DormandPrince(Rhs rhs, Options opt = {}) : rhs_(std::move(rhs)), opt_(opt) {}

    /// Integrate from (x0,y0) to x1 (either direction).  If `record` is
    /// non-null every accepted step endpoint is appended (including the
    /// initial point).
    State integrate(double x0, const State& y0, double x1,
                    std::vector<StepRecord>* record = nullptr) const {
        const double dir = (x1 >= x0) ? 1.0 : -1.0;
        const double span = std::fabs(x1 - x0);
        if (span == 0.0) return y0;

        double h_max = (opt_.h_max > 0.0) ? opt_.h_max : span;
        State y = y0;
        State f0;
        rhs_(x0, y, f0);
        double x = x0;
        double h = (opt_.h_init > 0.0) ? opt_.h_init : initial_step(x0, y, f0, dir, h_max);
        h = std::min(h, h_max);

        if (record) record->push_back({x, y, f0});

        double err_prev = 1.0;
        for (long step = 0; step < opt_.max_steps; ++step) {
            if (dir * (x + dir * h - x1) > 0.0) h = std::fabs(x1 - x);
            // the floor is local: a step must still move the abscissa
            const double h_min =
                std::max(opt_.h_min, std::max(std::fabs(x) * 4e-16, 1e-300));
            if (h < h_min) throw StiffnessFailureError("step size underflow", x);

            State k2, k3, k4, k5, k6, k7, ytmp, y5;
            const double hd = dir * h;

            for (int i = 0; i < N; ++i) ytmp[i] = y[i] + hd * a21 * f0[i];
            rhs_(x + c2 * hd, ytmp, k2);
            for (int i = 0; i < N; ++i) ytmp[i] = y[i] + hd * (a31 * f0[i] + a32 * k2[i]);
            rhs_(x + c3 * hd, ytmp, k3);
            for (int i = 0; i < N; ++i)
                ytmp[i] = y[i] + hd * (a41 * f0[i] + a42 * k2[i] + a43 * k3[i]);
            rhs_(x + c4 * hd, ytmp, k4);
            for (int i = 0; i < N; ++i)
                ytmp[i] = y[i] + hd * (a51 * f0[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            rhs_(x + c5 * hd, ytmp, k5);
            for (int i = 0; i < N; ++i)
                ytmp[i] = y[i] + hd * (a61 * f0[i] + a62 * k2[i] + a63 * k3[i] +
                                       a64 * k4[i] + a65 * k5[i]);
            rhs_(x + hd, ytmp, k6);
            for (int i = 0; i < N; ++i)
                y5[i] = y[i] + hd * (b1 * f0[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                     b6 * k6[i]);
            rhs_(x + hd, y5, k7);

            double err = 0.0;
            for (int i = 0; i < N; ++i) {
                const double e = hd * (e1 * f0[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
                const double sc =
                    opt_.atol + opt_.rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / N);

            if (err <= 1.0 || h <= h_min * 1.0001) {
                x += hd;
                if (std::fabs(x - x1) < 1e-12 * span) x = x1;
                y = y5;
                f0 = k7; // FSAL
                if (record) record->push_back({x, y, f0});
                if (dir * (x - x1) >= 0.0) return y;
                const double fac = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.7 / 5.0) *
                                   std::pow(err_prev > 0 ? err_prev : 1e-10, 0.4 / 5.0);
                h *= std::clamp(fac, 0.2, 6.0);
                h = std::min(h, h_max);
                err_prev = err;
            } else {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
        }
        throw StiffnessFailureError("max step count exceeded", x);
    }

private:
    double initial_step(double x0, const State& y, const State& f, double dir,
                        double h_max) const {
        double d0 = 0.0, d1 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc = opt_.atol + opt_.rtol * std::fabs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (f[i] / sc) * (f[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        (void)x0;
        (void)dir;
        return std::min(h, h_max);
    }

    Rhs rhs_;
    Options opt_;

    // Dormand-Prince coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

/// Cubic Hermite interpolation on a monotone table of (x, y, y') samples,
/// as produced by the integrator's step recorder.
class HermiteTable {
public:
    HermiteTable() = default;
    HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
        : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {}

    bool empty() const { return x_.empty(); }
    double front_x() const { return x_.front(); }
    double back_x() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }
    const std::vector<double>& dys() const { return dy_; }

    double operator()(double x) const {
        const auto [i, t, h] = locate(x);
        const double y0 = y_[i], y1 = y_[i + 1];
        const double m0 = dy_[i] * h, m1 = dy_[i + 1] * h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
               (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
    }

    double derivative(double x) const {
        const auto [i, t, h] = locate(x);
        const double y0 = y_[i], y1 = y_[i + 1];
        const double m0 = dy_[i] * h, m1 = dy_[i + 1] * h;
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 +
                (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * m1) /
               h;
    }

private:
    std::tuple<std::size_t, double, double> locate(double x) const {
        if (x_.size() < 2) throw OutOfGridError("interpolation table too small");
        const bool inc = x_.back() > x_.front();
        const double lo = inc ? x_.front() : x_.back();
        const double hi = inc ? x_.back() : x_.front();
        const double pad = 1e-9 * (hi - lo) + 1e-300;
        if (x < lo - pad || x > hi + pad)
            throw OutOfGridError("interpolation point outside table");
        std::size_t i;
        if (inc) {
            i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
        } else {
            i = std::upper_bound(x_.begin(), x_.end(), x, std::greater<double>()) -
                x_.begin();
        }
        if (i == 0) i = 1;
        if (i >= x_.size()) i = x_.size() - 1;
        --i;
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        return {i, std::clamp(t, 0.0, 1.0), h};
    }

    std::vector<double> x_, y_, dy_;
};

} // namespace zgkn
