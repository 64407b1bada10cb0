#pragma once

#include <qsc/dynamics.hpp>
#include <qsc/trajectory.hpp>

namespace qsc {

struct SlidingConfig {
    double lambda = 2.0; // attitude feedback rate, 1/s; must be > 0
};

struct SlidingValue {
    Vec3 s;
    double branch; // sgn_plus(qe0) at evaluation: +1 or -1
};

// s = omega_e + lambda * sgn_plus(qe0) * qe_vec. The branch records which of
// the two sliding manifolds (one per hemisphere) the feedback is tracking.
SlidingValue s_proposed(const UnitQuaternion& q_e, const Vec3& omega_e,
                        const SlidingConfig& cfg);

// omega_r = omega_d - lambda * sgn_plus(qe0) * qe_vec, chosen so that
// s_proposed(q_e, omega - omega_d) == omega - omega_r identically.
Vec3 omega_r(const UnitQuaternion& q_e, const Vec3& omega_d, const SlidingConfig& cfg);

// Comparison variable built on the raw vector part: s' = omega_tilde +
// lambda (q_vec - qd_vec) with omega_tilde = omega - 2 T(q)^{-1} qd_vec_dot
// and T(q) = q0 I + [q_vec]x. T is near-singular for |q0| <= 1e-6 and the
// inversion is refused there; conditioning degrades like 1/|q0|.
Vec3 s_legacy_lo(const UnitQuaternion& q, const UnitQuaternion& q_d,
                 const Vec3& q_dot_d_vec, const Vec3& omega, const SlidingConfig& cfg);

// Same shape as s_proposed but with the standard sign convention sgn(0) = 0.
// At qe0 = 0 the attitude term vanishes, which is exactly the spurious
// equilibrium the closed positive branch above removes.
Vec3 s_standard_sgn(const UnitQuaternion& q_e, const Vec3& omega_e,
                    const SlidingConfig& cfg);

// Rotation-matrix variable s_R = omega_breve_e + lambda * vee(P(R_e)) with
// P(A) = (A - A^T)/2. The caller supplies omega_breve_e = omega - R_e^T omega_d.
Vec3 s_so3(const RotationMatrix& r_e, const Vec3& omega_breve_e,
           const SlidingConfig& cfg);

// Exact time derivative of the error-quaternion vector part at the current
// state: 1/2 (qe0 I + [qe_vec]x) (omega - R(q_e)^T omega_d). This is the rate
// the feedforward terms must cancel for s = omega - omega_r to hold exactly
// along trajectories.
Vec3 qe_vec_rate(const UnitQuaternion& q_e, const Vec3& omega, const Vec3& omega_d);

enum class SlidingKind { Proposed, LegacyLo, StandardSgn, So3 };

// Everything a sliding controller needs at one instant, for any of the four
// variables: the sliding value itself, the logged branch, and the reference
// velocity with its analytic time derivative (s = omega - omega_r for every
// kind, by construction).
struct TrackingSignals {
    UnitQuaternion q_e;
    Vec3 s;
    double branch;
    Vec3 omega_r;
    Vec3 omega_r_dot;
};

// For LegacyLo with a desired trajectory at rest (qd_vec_dot == qd_vec_ddot
// == 0) the T(q)^{-1} terms vanish identically and are skipped, so rest
// scenarios run through |q0| = 0 without tripping the singularity guard.
TrackingSignals tracking_signals(SlidingKind kind, const RigidBodyState& state,
                                 const DesiredSample& desired, const SlidingConfig& cfg);

} // namespace qsc
