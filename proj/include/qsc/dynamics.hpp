#pragma once

#include <qsc/quat.hpp>

#include <cstdint>
#include <functional>

namespace qsc {

struct RigidBodyState {
    UnitQuaternion q;
    Vec3 omega = Vec3::Zero();
};

// True inertia, the controller-facing nominal inertia, and the elementwise
// bound on their difference. Eigenvalue bounds of the true inertia are
// computed at construction. Controllers must only ever be handed j_nom and
// j_bound; the simulation plant uses j_true.
class InertiaModel {
public:
    InertiaModel(const Mat3& j_true, const Mat3& j_nom, const Mat3& j_bound);

    const Mat3& j_true() const { return j_true_; }
    const Mat3& j_nom() const { return j_nom_; }
    const Mat3& j_bound() const { return j_bound_; }
    const Mat3& j_true_inv() const { return j_true_inv_; }
    double eig_lo() const { return eig_lo_; }
    double eig_hi() const { return eig_hi_; }

private:
    Mat3 j_true_, j_nom_, j_bound_, j_true_inv_;
    double eig_lo_, eig_hi_;
};

// External disturbance torque d(t) with a known elementwise bound D.
// The seeded-random kind is piecewise constant over 10 ms segments; each
// segment's value is a pure hash of (seed, segment index), so evaluation is
// stateless and runs are reproducible bit for bit.
class DisturbanceModel {
public:
    enum class Kind { None, Constant, Sinusoid, SeededRandom };

    static DisturbanceModel none();
    static DisturbanceModel constant(const Vec3& value);
    static DisturbanceModel sinusoid(const Vec3& amplitude, double freq_hz);
    static DisturbanceModel seeded_random(const Vec3& bound, std::uint64_t seed);

    Vec3 eval(double t) const;
    const Vec3& bound() const { return bound_; }
    Kind kind() const { return kind_; }

private:
    DisturbanceModel(Kind kind, const Vec3& value, double freq, std::uint64_t seed);

    Kind kind_;
    Vec3 value_;
    double freq_;
    std::uint64_t seed_;
    Vec3 bound_;
};

// Additive model torque f(q, omega): the true term, the nominal term the
// controllers see, and an elementwise bound on their difference.
struct UnknownDynamics {
    std::function<Vec3(const RigidBodyState&)> f_true;
    std::function<Vec3(const RigidBodyState&)> f_nom;
    std::function<Vec3(const RigidBodyState&)> f_bound;

    static UnknownDynamics none();
    // f = -c .* omega with per-axis damping; c_bound >= |c_true - c_nom|.
    static UnknownDynamics viscous(const Vec3& c_true, const Vec3& c_nom, const Vec3& c_bound);
};

// J^{-1} (-omega x J omega + f(q, omega) + torque + d(t)) with the true model.
Vec3 angular_accel(const RigidBodyState& state, const Vec3& torque,
                   const InertiaModel& inertia, const UnknownDynamics& dyn,
                   const DisturbanceModel& dist, double t);

struct Derivatives {
    Vec4 q_dot = Vec4::Zero();
    Vec3 omega_dot = Vec3::Zero();
    Eigen::VectorXd extras_dot;
};

// Closed-loop vector field over the stacked (q, omega, extras) state. The
// quaternion argument is the raw integration 4-vector; implementations should
// normalize before interpreting it as an attitude.
using VectorField =
    std::function<Derivatives(double t, const Vec4& q_raw, const Vec3& omega,
                              const Eigen::VectorXd& extras)>;

struct IntegrationStep {
    RigidBodyState state;
    Eigen::VectorXd extras;
};

// One classical RK4 step of the stacked state. The quaternion component is
// integrated as a raw 4-vector and renormalized once at the end of the step;
// stage evaluations see normalized attitudes. A non-finite derivative at any
// stage raises DivergenceError.
IntegrationStep rk4_step(const RigidBodyState& state, const Eigen::VectorXd& extras,
                         double t, double dt, const VectorField& field);

} // namespace qsc
