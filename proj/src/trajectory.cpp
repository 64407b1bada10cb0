#include <qsc/trajectory.hpp>

#include <cmath>

namespace qsc {

Vec4 DesiredSample::q_dot_d() const {
    return quat_deriv(q_d, omega_d);
}

Vec4 DesiredSample::q_ddot_d() const {
    // Differentiate q_dot = 1/2 q (x) (0, w) once more:
    // q_ddot = 1/2 q_dot (x) (0, w) + 1/2 q (x) (0, w_dot).
    const Vec4 qd = q_dot_d();
    const Vec4 omega4(0, omega_d[0], omega_d[1], omega_d[2]);
    const Vec4 omega_dot4(0, omega_dot_d[0], omega_dot_d[1], omega_dot_d[2]);
    return 0.5 * (quat_mul_raw(qd, omega4) + quat_mul_raw(q_d.as_vec(), omega_dot4));
}

TrajectorySpec::TrajectorySpec(Kind kind, const UnitQuaternion& q_start, const Vec3& axis,
                               double rate, double amplitude, double freq_hz)
    : kind_(kind), q_start_(q_start), rate_(rate), amplitude_(amplitude), freq_hz_(freq_hz) {
    if (kind_ == Kind::ConstantAttitude) {
        return;
    }
    const double n = axis.norm();
    if (!axis.allFinite() || n < 1e-12) {
        throw InvalidArgumentError("trajectory axis must be finite and nonzero");
    }
    axis_ = axis / n;
    if (!std::isfinite(rate_) || !std::isfinite(amplitude_) || !std::isfinite(freq_hz_)) {
        throw InvalidArgumentError("trajectory parameters must be finite");
    }
    if (kind_ == Kind::Sinusoid && freq_hz_ <= 0.0) {
        throw InvalidArgumentError("sinusoid trajectory frequency must be positive");
    }
}

TrajectorySpec TrajectorySpec::constant_attitude(const UnitQuaternion& q_d) {
    return TrajectorySpec(Kind::ConstantAttitude, q_d, Vec3::UnitX(), 0, 0, 0);
}

TrajectorySpec TrajectorySpec::slew(const UnitQuaternion& q_start, const Vec3& axis,
                                    double rate) {
    return TrajectorySpec(Kind::Slew, q_start, axis, rate, 0, 0);
}

TrajectorySpec TrajectorySpec::sinusoid(const UnitQuaternion& q_start, const Vec3& axis,
                                        double amplitude, double freq_hz) {
    return TrajectorySpec(Kind::Sinusoid, q_start, axis, 0, amplitude, freq_hz);
}

DesiredSample TrajectorySpec::sample(double t) const {
    DesiredSample out;
    switch (kind_) {
        case Kind::ConstantAttitude:
            out.q_d = q_start_;
            break;
        case Kind::Slew: {
            // Body rate is constant along a fixed body axis, so the attitude
            // is q_start (x) exp(axis * rate * t / 2) in closed form.
            out.q_d = qmul(q_start_, from_axis_angle(axis_, rate_ * t));
            out.omega_d = rate_ * axis_;
            break;
        }
        case Kind::Sinusoid: {
            const double two_pi_f = 2.0 * M_PI * freq_hz_;
            // angle(t) = integral of amplitude sin(2 pi f tau) dtau
            const double angle = amplitude_ * (1.0 - std::cos(two_pi_f * t)) / two_pi_f;
            out.q_d = qmul(q_start_, from_axis_angle(axis_, angle));
            out.omega_d = amplitude_ * std::sin(two_pi_f * t) * axis_;
            out.omega_dot_d = amplitude_ * two_pi_f * std::cos(two_pi_f * t) * axis_;
            break;
        }
    }
    return out;
}

} // namespace qsc
