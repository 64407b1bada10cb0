#pragma once

#include <qsc/quat.hpp>

namespace qsc {

// Desired attitude, body rate, and body acceleration at one instant, plus the
// induced quaternion derivatives. q_dot_d is always 1/2 q_d (x) (0, omega_d),
// so any sample produced here is self-consistent by construction.
struct DesiredSample {
    UnitQuaternion q_d;
    Vec3 omega_d = Vec3::Zero();
    Vec3 omega_dot_d = Vec3::Zero();

    Vec4 q_dot_d() const;
    Vec4 q_ddot_d() const;
};

// Analytic desired-trajectory generator. All kinds rotate about a fixed body
// axis, which keeps q_d(t) in closed form and the rate/acceleration exact
// (no numerical differentiation anywhere).
class TrajectorySpec {
public:
    enum class Kind { ConstantAttitude, Slew, Sinusoid };

    static TrajectorySpec constant_attitude(const UnitQuaternion& q_d);
    // Constant body rate `rate` about `axis`, starting from q_start.
    static TrajectorySpec slew(const UnitQuaternion& q_start, const Vec3& axis, double rate);
    // omega_d(t) = amplitude * sin(2 pi f t) * axis, starting from q_start.
    static TrajectorySpec sinusoid(const UnitQuaternion& q_start, const Vec3& axis,
                                   double amplitude, double freq_hz);

    DesiredSample sample(double t) const;
    Kind kind() const { return kind_; }
    // True when the desired motion is identically at rest (constant attitude).
    bool at_rest() const { return kind_ == Kind::ConstantAttitude; }

private:
    TrajectorySpec(Kind kind, const UnitQuaternion& q_start, const Vec3& axis,
                   double rate, double amplitude, double freq_hz);

    Kind kind_;
    UnitQuaternion q_start_;
    Vec3 axis_ = Vec3::UnitX();
    double rate_ = 0.0;
    double amplitude_ = 0.0;
    double freq_hz_ = 0.0;
};

} // namespace qsc
