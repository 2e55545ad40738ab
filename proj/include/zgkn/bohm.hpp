#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zgkn/bispinor.hpp"

namespace zgkn {

/// A stationary mode field (eigenstate or finite eigenstate superposition)
/// that can be sampled anywhere off the ring.
class StateField {
public:
    virtual ~StateField() = default;
    virtual Vec4c evaluate(double t, double r, double theta, double phi) const = 0;
    virtual double ring_radius() const = 0;
};

class EigenstateField final : public StateField {
public:
    explicit EigenstateField(SeparatedState st) : st_(std::move(st)) {}
    Vec4c evaluate(double t, double r, double theta, double phi) const override {
        return assemble_eigenstate(st_, t, r, theta, phi);
    }
    double ring_radius() const override { return st_.params.a; }
    const SeparatedState& state() const { return st_; }

private:
    SeparatedState st_;
};

class SuperpositionField final : public StateField {
public:
    SuperpositionField(std::vector<SeparatedState> states, std::vector<cplx> coeffs);
    Vec4c evaluate(double t, double r, double theta, double phi) const override;
    double ring_radius() const override { return states_.front().params.a; }

private:
    std::vector<SeparatedState> states_;
    std::vector<cplx> coeffs_;
};

struct FourPosition {
    double t, r, theta, phi;
};

struct WorldlineSample {
    double tau = 0.0;
    FourPosition Q{};
    std::array<double, 3> x{};     // Cartesian projection
    double speed = 0.0;            // |v| in orthonormal frame components
    double u_norm_residual = 0.0;  // g(u,u) - 1
    Eigen::Vector3d N;             // orientation vector, Cartesian
    Eigen::Matrix3d frame;         // columns: l, m, n (orthonormal Dreibein)
    Eigen::Matrix3d rotation;      // R(tau): frame(0) -> frame(tau)
    bool null_current = false;
    bool degenerate_frame = false;
};

struct Worldline {
    std::vector<WorldlineSample> samples;
    bool completed = false;
    std::string termination; // empty when completed
    int null_segments = 0;
    int degenerate_segments = 0;
};

struct GuidanceOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double null_threshold = 1e-12;  // eta j j < thr * (j^0)^2 -> affine law
    double density_floor = 1e-120;  // rho below this aborts the trajectory
};

/// One guided step of proper time dtau from Q; unit-normalized four-velocity,
/// with the affine fallback on null segments.
FourPosition guide_step(const StateField& field, const FourPosition& Q, double dtau,
                        const GuidanceOptions& opt = {});

/// Integrate the guided worldline over [0, tau_span] emitting samples every
/// `cadence` of proper time, with the attached Dreibein and its rotation
/// relative to tau = 0.  On a guidance failure the partial worldline is
/// returned with the termination reason set.
Worldline integrate_trajectory(const StateField& field, const FourPosition& Q0,
                               double tau_span, double cadence,
                               const GuidanceOptions& opt = {});

/// The same motion read as a moving ring relative to a fixed observer frame:
/// center path q(tau) = -R(tau)^{-1} Q(tau) and evolved ring normal.
struct RingTrack {
    std::vector<double> tau;
    std::vector<double> t;
    std::vector<Eigen::Vector3d> center;
    std::vector<Eigen::Vector3d> normal;
    int degenerate_segments = 0;
};

RingTrack ring_frame_view(const Worldline& w,
                          const Eigen::Vector3d& ring_normal0 = Eigen::Vector3d::UnitZ());

/// Speed diagnostics against the natural velocity scales of the problem.
struct QuasiStaticReport {
    double max_speed = 0.0;
    double c_quantum = 0.0; // alpha
    double c_larmor = 0.0;  // 1e-3 alpha^3
    bool quasi_static = false;
};

QuasiStaticReport quasi_static_report(const Worldline& w, const ModelParams& params);

} // namespace zgkn
