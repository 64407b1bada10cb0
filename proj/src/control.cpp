#include <qsc/control.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qsc {

namespace {

void require_positive(const Vec3& v, const char* what) {
    if (!v.allFinite() || v.minCoeff() <= 0.0) {
        throw InvalidArgumentError(std::string(what) + " entries must be strictly positive");
    }
}

Vec3 zero_fn(const RigidBodyState&) { return Vec3::Zero(); }

} // namespace

void validate(const GainConfig& gains) {
    require_positive(gains.K, "K");
    require_positive(gains.Phi, "Phi");
    require_positive(gains.eta, "eta");
    require_positive(gains.Kp, "Kp");
    require_positive(gains.Kd, "Kd");
}

NominalModel NominalModel::exact(const Mat3& j) {
    NominalModel m;
    m.J = j;
    m.f = zero_fn;
    m.J_bound = Mat3::Zero();
    m.f_bound = zero_fn;
    m.D = Vec3::Zero();
    return m;
}

Mat63 regressor(const Vec3& omega, const Vec3& omega_r_dot) {
    const Mat36 yt = param_product_matrix(omega_r_dot) + skew(omega) * param_product_matrix(omega);
    return yt.transpose();
}

TorqueCommand sliding_law_torque(const Mat3& j, const Vec3& f_value,
                                 const RigidBodyState& state,
                                 const TrackingSignals& sig, const GainConfig& gains) {
    TorqueCommand cmd;
    cmd.s = sig.s;
    cmd.branch = sig.branch;
    cmd.M_b = j * sig.omega_r_dot + state.omega.cross(j * state.omega) - f_value -
              gains.K.cwiseProduct(sig.s);
    return cmd;
}

TorqueCommand pd_torque(const RigidBodyState& state, const DesiredSample& desired,
                        const NominalModel& model, const SlidingConfig& cfg,
                        const GainConfig& gains) {
    validate(gains);
    const TrackingSignals sig = tracking_signals(SlidingKind::Proposed, state, desired, cfg);
    return sliding_law_torque(model.J, model.f(state), state, sig, gains);
}

TorqueCommand robust_torque(const RigidBodyState& state, const DesiredSample& desired,
                            const NominalModel& model, const SlidingConfig& cfg,
                            const GainConfig& gains) {
    validate(gains);
    const TrackingSignals sig = tracking_signals(SlidingKind::Proposed, state, desired, cfg);

    TorqueCommand cmd;
    cmd.s = sig.s;
    cmd.branch = sig.branch;

    Vec3 sat;
    for (int i = 0; i < 3; ++i) {
        const double x = sig.s[i] / gains.Phi[i];
        cmd.saturated[i] = std::abs(x) >= 1.0;
        sat[i] = std::clamp(x, -1.0, 1.0);
    }

    cmd.M_b = model.J * sig.omega_r_dot + state.omega.cross(model.J * state.omega) -
              model.f(state) - gains.K.cwiseProduct(sat);

    const Vec3 floor = robust_gain(state, desired, model.J_bound, model.f_bound(state),
                                   model.D, gains.eta, cfg);
    cmd.gain_deficit = (gains.K.array() < floor.array()).any();
    return cmd;
}

Vec3 robust_gain(const RigidBodyState& state, const DesiredSample& desired,
                 const Mat3& j_bound, const Vec3& f_bound, const Vec3& d_bound,
                 const Vec3& eta, const SlidingConfig& cfg) {
    if (j_bound.minCoeff() < 0.0 || f_bound.minCoeff() < 0.0 || d_bound.minCoeff() < 0.0 ||
        eta.minCoeff() < 0.0) {
        throw InvalidArgumentError("robust gain bounds must be nonnegative");
    }
    const UnitQuaternion q_e = error_quaternion(desired.q_d, state.q);
    const Vec3 qe_rate = qe_vec_rate(q_e, state.omega, desired.omega_d);

    const Vec3 gyro_bound =
        skew(state.omega).cwiseAbs() * (j_bound * state.omega.cwiseAbs());
    const Vec3 accel_term =
        j_bound * (desired.omega_dot_d + cfg.lambda * sgn_plus(q_e.w()) * qe_rate).cwiseAbs();
    return gyro_bound + accel_term + f_bound + d_bound + eta;
}

TorqueCommand adaptive_torque(const RigidBodyState& state, const DesiredSample& desired,
                              const ParamVector& a_hat, const SlidingConfig& cfg,
                              const GainConfig& gains) {
    validate(gains);
    const Mat3 j_hat = param_matrix(a_hat);
    Eigen::SelfAdjointEigenSolver<Mat3> es(j_hat);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw EstimateInvalidError("inertia estimate is not positive definite");
    }
    const TrackingSignals sig = tracking_signals(SlidingKind::Proposed, state, desired, cfg);

    TorqueCommand cmd;
    cmd.s = sig.s;
    cmd.branch = sig.branch;
    const Mat63 y = regressor(state.omega, sig.omega_r_dot);
    cmd.M_b = y.transpose() * a_hat - gains.K.cwiseProduct(sig.s);
    return cmd;
}

TorqueCommand baseline_wie_pd(const RigidBodyState& state, const UnitQuaternion& q_e,
                              const GainConfig& gains) {
    validate(gains);
    TorqueCommand cmd;
    cmd.branch = sgn0(q_e.w());
    cmd.s = Vec3::Zero();
    cmd.M_b = -cmd.branch * gains.Kp.cwiseProduct(q_e.vec()) -
              gains.Kd.cwiseProduct(state.omega);
    return cmd;
}

} // namespace qsc
