#include <qsc/quat.hpp>

#include <cmath>

namespace qsc {

double sgn_plus(double x) {
    return x >= 0.0 ? 1.0 : -1.0;
}

double sgn0(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
}

Mat3 skew(const Vec3& v) {
    Mat3 m;
    m << 0, -v[2], v[1],
         v[2], 0, -v[0],
         -v[1], v[0], 0;
    return m;
}

Vec3 unskew(const Mat3& a) {
    return Vec3(a(2, 1), a(0, 2), a(1, 0));
}

namespace {

bool finite(double x) { return std::isfinite(x); }

bool finite(const Vec3& v) {
    return finite(v[0]) && finite(v[1]) && finite(v[2]);
}

} // namespace

UnitQuaternion::UnitQuaternion(double w, const Vec3& v) : w_(w), v_(v) {
    if (!finite(w_) || !finite(v_)) {
        throw InvalidArgumentError("quaternion components must be finite");
    }
    const double n = std::sqrt(w_ * w_ + v_.squaredNorm());
    // Accept integration drift, reject values that are not plausibly a unit
    // quaternion at all. Renormalization preserves the sign of every
    // component: no hemisphere is ever canonical.
    if (n < 0.25 || n > 4.0) {
        throw InvalidArgumentError("quaternion norm " + std::to_string(n) +
                                   " too far from 1 to renormalize");
    }
    w_ /= n;
    v_ /= n;
}

UnitQuaternion UnitQuaternion::negated() const {
    return UnitQuaternion(-w_, Vec3(-v_));
}

Vec4 quat_mul_raw(const Vec4& p, const Vec4& q) {
    const double pw = p[0], qw = q[0];
    const Vec3 pv(p[1], p[2], p[3]);
    const Vec3 qv(q[1], q[2], q[3]);
    const double w = pw * qw - pv.dot(qv);
    const Vec3 v = pw * qv + qw * pv + pv.cross(qv);
    return Vec4(w, v[0], v[1], v[2]);
}

UnitQuaternion qmul(const UnitQuaternion& p, const UnitQuaternion& q) {
    return UnitQuaternion(quat_mul_raw(p.as_vec(), q.as_vec()));
}

UnitQuaternion conjugate(const UnitQuaternion& q) {
    return UnitQuaternion(q.w(), Vec3(-q.vec()));
}

UnitQuaternion error_quaternion(const UnitQuaternion& q_d, const UnitQuaternion& q) {
    return qmul(conjugate(q_d), q);
}

Vec4 quat_deriv(const UnitQuaternion& q, const Vec3& omega) {
    if (!finite(omega)) {
        throw InvalidArgumentError("angular rate must be finite");
    }
    return 0.5 * quat_mul_raw(q.as_vec(), Vec4(0, omega[0], omega[1], omega[2]));
}

RotationMatrix to_rotation(const UnitQuaternion& q) {
    const Mat3 vx = skew(q.vec());
    return Mat3::Identity() + 2.0 * q.w() * vx + 2.0 * vx * vx;
}

UnitQuaternion from_axis_angle(const Vec3& axis, double angle) {
    if (!finite(axis) || !finite(angle)) {
        throw InvalidArgumentError("axis and angle must be finite");
    }
    const double n = axis.norm();
    if (n < 1e-12) {
        throw InvalidArgumentError("rotation axis must be nonzero");
    }
    const Vec3 unit = axis / n;
    return UnitQuaternion(std::cos(angle / 2), Vec3(std::sin(angle / 2) * unit));
}

} // namespace qsc
