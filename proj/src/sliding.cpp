#include <qsc/sliding.hpp>

#include <cmath>

namespace qsc {

namespace {

void require_lambda(const SlidingConfig& cfg) {
    if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) {
        throw InvalidArgumentError("sliding lambda must be positive and finite");
    }
}

// T(q) = q0 I + [q_vec]x, the map with q_vec_dot = 1/2 T(q) omega for a
// desired trajectory at rest in the world frame. Singular as q0 -> 0.
Mat3 t_matrix(const UnitQuaternion& q) {
    return q.w() * Mat3::Identity() + skew(q.vec());
}

Mat3 t_matrix_inverse(const UnitQuaternion& q) {
    if (std::abs(q.w()) <= 1e-6) {
        throw SingularityError("attitude map q0 I + [q_vec]x is singular near zero scalar part");
    }
    return t_matrix(q).inverse();
}

} // namespace

SlidingValue s_proposed(const UnitQuaternion& q_e, const Vec3& omega_e,
                        const SlidingConfig& cfg) {
    require_lambda(cfg);
    SlidingValue out;
    out.branch = sgn_plus(q_e.w());
    out.s = omega_e + cfg.lambda * out.branch * q_e.vec();
    return out;
}

Vec3 omega_r(const UnitQuaternion& q_e, const Vec3& omega_d, const SlidingConfig& cfg) {
    require_lambda(cfg);
    return omega_d - cfg.lambda * sgn_plus(q_e.w()) * q_e.vec();
}

Vec3 s_legacy_lo(const UnitQuaternion& q, const UnitQuaternion& q_d,
                 const Vec3& q_dot_d_vec, const Vec3& omega, const SlidingConfig& cfg) {
    require_lambda(cfg);
    const Vec3 omega_tilde = omega - 2.0 * (t_matrix_inverse(q) * q_dot_d_vec);
    return omega_tilde + cfg.lambda * (q.vec() - q_d.vec());
}

Vec3 s_standard_sgn(const UnitQuaternion& q_e, const Vec3& omega_e,
                    const SlidingConfig& cfg) {
    require_lambda(cfg);
    return omega_e + cfg.lambda * sgn0(q_e.w()) * q_e.vec();
}

Vec3 s_so3(const RotationMatrix& r_e, const Vec3& omega_breve_e, const SlidingConfig& cfg) {
    require_lambda(cfg);
    const Mat3 p = 0.5 * (r_e - r_e.transpose());
    return omega_breve_e + cfg.lambda * unskew(p);
}

Vec3 qe_vec_rate(const UnitQuaternion& q_e, const Vec3& omega, const Vec3& omega_d) {
    const Vec3 rel = omega - to_rotation(q_e).transpose() * omega_d;
    return 0.5 * (q_e.w() * Mat3::Identity() + skew(q_e.vec())) * rel;
}

namespace {

TrackingSignals signals_quaternion_branch(const RigidBodyState& state,
                                          const DesiredSample& desired,
                                          const SlidingConfig& cfg, bool closed_positive) {
    TrackingSignals out;
    out.q_e = error_quaternion(desired.q_d, state.q);
    out.branch = closed_positive ? sgn_plus(out.q_e.w()) : sgn0(out.q_e.w());
    out.omega_r = desired.omega_d - cfg.lambda * out.branch * out.q_e.vec();
    out.s = state.omega - out.omega_r;
    // The branch is piecewise constant; between switches the reference
    // acceleration only needs the error-vector rate.
    out.omega_r_dot = desired.omega_dot_d -
                      cfg.lambda * out.branch * qe_vec_rate(out.q_e, state.omega, desired.omega_d);
    return out;
}

TrackingSignals signals_legacy_lo(const RigidBodyState& state, const DesiredSample& desired,
                                  const SlidingConfig& cfg) {
    TrackingSignals out;
    out.q_e = error_quaternion(desired.q_d, state.q);
    out.branch = 1.0;

    const Vec4 q_dot = quat_deriv(state.q, state.omega);
    const Vec3 q_dot_vec(q_dot[1], q_dot[2], q_dot[3]);
    const Vec3 err_vec = state.q.vec() - desired.q_d.vec();

    const Vec4 qd_dot = desired.q_dot_d();
    const Vec4 qd_ddot = desired.q_ddot_d();
    const Vec3 qd_dot_vec(qd_dot[1], qd_dot[2], qd_dot[3]);
    const Vec3 qd_ddot_vec(qd_ddot[1], qd_ddot[2], qd_ddot[3]);

    if (qd_dot_vec.isZero(0.0) && qd_ddot_vec.isZero(0.0)) {
        // Rest trajectory: every T(q)^{-1} term carries a q_dot_d factor and
        // vanishes identically, so skip the inversion (and its singularity).
        out.omega_r = -cfg.lambda * err_vec;
        out.s = state.omega - out.omega_r;
        out.omega_r_dot = -cfg.lambda * q_dot_vec;
        return out;
    }

    const Mat3 t_inv = t_matrix_inverse(state.q);
    const Mat3 t_dot = q_dot[0] * Mat3::Identity() + skew(q_dot_vec);
    out.omega_r = 2.0 * (t_inv * qd_dot_vec) - cfg.lambda * err_vec;
    out.s = state.omega - out.omega_r;
    out.omega_r_dot = 2.0 * (t_inv * qd_ddot_vec - t_inv * (t_dot * (t_inv * qd_dot_vec))) -
                      cfg.lambda * (q_dot_vec - qd_dot_vec);
    return out;
}

TrackingSignals signals_so3(const RigidBodyState& state, const DesiredSample& desired,
                            const SlidingConfig& cfg) {
    TrackingSignals out;
    out.q_e = error_quaternion(desired.q_d, state.q);
    out.branch = 1.0;

    const Mat3 r_e = to_rotation(out.q_e);
    const Vec3 omega_breve = state.omega - r_e.transpose() * desired.omega_d;
    const Vec3 att_term = unskew(Mat3(0.5 * (r_e - r_e.transpose())));

    out.omega_r = r_e.transpose() * desired.omega_d - cfg.lambda * att_term;
    out.s = state.omega - out.omega_r;

    const Vec3 rd = r_e.transpose() * desired.omega_d;
    const Vec3 rd_rate = -omega_breve.cross(rd) + r_e.transpose() * desired.omega_dot_d;
    const Mat3 wb = skew(omega_breve);
    const Vec3 att_rate = 0.5 * unskew(Mat3(r_e * wb + wb * r_e.transpose()));
    out.omega_r_dot = rd_rate - cfg.lambda * att_rate;
    return out;
}

} // namespace

TrackingSignals tracking_signals(SlidingKind kind, const RigidBodyState& state,
                                 const DesiredSample& desired, const SlidingConfig& cfg) {
    require_lambda(cfg);
    switch (kind) {
        case SlidingKind::Proposed:
            return signals_quaternion_branch(state, desired, cfg, true);
        case SlidingKind::StandardSgn:
            return signals_quaternion_branch(state, desired, cfg, false);
        case SlidingKind::LegacyLo:
            return signals_legacy_lo(state, desired, cfg);
        case SlidingKind::So3:
            return signals_so3(state, desired, cfg);
    }
    throw InvalidArgumentError("unknown sliding kind");
}

} // namespace qsc
