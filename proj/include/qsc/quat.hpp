#pragma once

#include <qsc/errors.hpp>
#include <qsc/types.hpp>

namespace qsc {

// Sign function with the closed positive branch: +1 for x >= 0, -1 otherwise.
// Note sgn_plus(0) = +1 (and -0.0 >= 0, so the signed zero agrees). This is
// what removes the spurious equilibrium at zero scalar part and what makes
// q and -q select consistent feedback branches.
double sgn_plus(double x);

// Standard sign with sgn0(0) = 0, kept for the comparison sliding variable.
double sgn0(double x);

Mat3 skew(const Vec3& v);
Vec3 unskew(const Mat3& a);

// Unit quaternion (w, v) on S3. The constructor renormalizes but never
// flips sign: q and -q are distinct values and both hemispheres are
// first-class. Inputs whose norm is far from 1 are rejected rather than
// silently rescaled.
class UnitQuaternion {
public:
    UnitQuaternion() : w_(1.0), v_(Vec3::Zero()) {}
    UnitQuaternion(double w, const Vec3& v);
    UnitQuaternion(double w, double x, double y, double z)
        : UnitQuaternion(w, Vec3(x, y, z)) {}
    explicit UnitQuaternion(const Vec4& wxyz)
        : UnitQuaternion(wxyz[0], Vec3(wxyz[1], wxyz[2], wxyz[3])) {}

    double w() const { return w_; }
    const Vec3& vec() const { return v_; }
    Vec4 as_vec() const { return Vec4(w_, v_[0], v_[1], v_[2]); }
    UnitQuaternion negated() const;

private:
    double w_;
    Vec3 v_;
};

// Hamilton product on raw 4-vectors, no unit-norm assumption. Used by the
// integrator and by derivative algebra where the factors are tangents.
Vec4 quat_mul_raw(const Vec4& p, const Vec4& q);

// p (x) q, renormalized.
UnitQuaternion qmul(const UnitQuaternion& p, const UnitQuaternion& q);

UnitQuaternion conjugate(const UnitQuaternion& q);

// q_e = q_d^* (x) q. Both hemispheres of the result are preserved.
UnitQuaternion error_quaternion(const UnitQuaternion& q_d, const UnitQuaternion& q);

// d/dt q = 1/2 q (x) (0, omega), with omega the body angular rate.
Vec4 quat_deriv(const UnitQuaternion& q, const Vec3& omega);

// Direction cosine matrix of the rotation q represents; to_rotation(q) ==
// to_rotation(-q).
RotationMatrix to_rotation(const UnitQuaternion& q);

// (cos(phi/2), sin(phi/2) n). The axis is normalized here; a near-zero axis
// is an error.
UnitQuaternion from_axis_angle(const Vec3& axis, double angle);

} // namespace qsc
