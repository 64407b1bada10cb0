#pragma once

#include <qsc/adapt.hpp>
#include <qsc/sliding.hpp>

#include <array>

namespace qsc {

struct GainConfig {
    Vec3 K = Vec3(5, 5, 5);         // per-axis sliding feedback gains k_i
    Vec3 Phi = Vec3(0.1, 0.1, 0.1); // boundary-layer thickness, rad/s
    Vec3 eta = Vec3(0.1, 0.1, 0.1); // robust reaching margin
    Vec3 Kp = Vec3(10, 10, 10);     // baseline attitude gains
    Vec3 Kd = Vec3(5, 5, 5);        // baseline rate gains
};

// All gain entries must be strictly positive.
void validate(const GainConfig& gains);

struct TorqueCommand {
    Vec3 M_b = Vec3::Zero();
    // Diagnostics: the sliding value and branch the law acted on, which axes
    // of the boundary layer were saturated, and whether the configured K sat
    // below the state-dependent robust gain at this evaluation.
    Vec3 s = Vec3::Zero();
    double branch = 1.0;
    std::array<bool, 3> saturated{{false, false, false}};
    bool gain_deficit = false;
};

// The model view a controller is allowed to see: nominal inertia and nominal
// dynamics plus their uncertainty bounds. Never carries the true values.
struct NominalModel {
    Mat3 J = Mat3::Identity();
    std::function<Vec3(const RigidBodyState&)> f;       // nominal f_hat
    Mat3 J_bound = Mat3::Zero();                        // elementwise |J - J_hat| bound
    std::function<Vec3(const RigidBodyState&)> f_bound; // elementwise |f - f_hat| bound
    Vec3 D = Vec3::Zero();                              // disturbance bound

    static NominalModel exact(const Mat3& j);
};

// Y with Y^T a = J(a) omega_r_dot + omega x (J(a) omega).
Mat63 regressor(const Vec3& omega, const Vec3& omega_r_dot);

// Core sliding control law shared by every variant:
//   M = J omega_r_dot + omega x (J omega) - f - K .* s.
// Exposed so comparison runs can pair it with any of the sliding variables.
TorqueCommand sliding_law_torque(const Mat3& j, const Vec3& f_value,
                                 const RigidBodyState& state,
                                 const TrackingSignals& sig, const GainConfig& gains);

// Exact-model sliding PD law on the proposed variable.
TorqueCommand pd_torque(const RigidBodyState& state, const DesiredSample& desired,
                        const NominalModel& model, const SlidingConfig& cfg,
                        const GainConfig& gains);

// Boundary-layer robust law: feedforward from the nominal model and
// K .* sat(s ./ Phi) feedback. Requires (but does not enforce) gains.K at or
// above robust_gain along the run; a deficit is flagged, never fatal.
TorqueCommand robust_torque(const RigidBodyState& state, const DesiredSample& desired,
                            const NominalModel& model, const SlidingConfig& cfg,
                            const GainConfig& gains);

// State-dependent gain floor for the robust law:
//   k_i = (|[omega]x| Jb |omega|)_i + (Jb |omega_dot_d + lambda sgn qe_dot|)_i
//         + F_i + D_i + eta_i,
// every absolute value elementwise. The first term is the computable bound on
// |omega x J_tilde omega| implied by the elementwise inertia bound Jb.
Vec3 robust_gain(const RigidBodyState& state, const DesiredSample& desired,
                 const Mat3& j_bound, const Vec3& f_bound, const Vec3& d_bound,
                 const Vec3& eta, const SlidingConfig& cfg);

// Certainty-equivalence law M = Y^T a_hat - K .* s on the proposed variable.
// The estimate must embed to a positive-definite matrix.
TorqueCommand adaptive_torque(const RigidBodyState& state, const DesiredSample& desired,
                              const ParamVector& a_hat, const SlidingConfig& cfg,
                              const GainConfig& gains);

// Classical quaternion PD baseline: M = -sgn(qe0) Kp .* qe_vec - Kd .* omega,
// with the standard sign convention (sgn(0) = 0).
TorqueCommand baseline_wie_pd(const RigidBodyState& state, const UnitQuaternion& q_e,
                              const GainConfig& gains);

} // namespace qsc
