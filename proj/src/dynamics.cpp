#include <qsc/dynamics.hpp>

#include "mix64.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qsc {

namespace {

void require_finite(const Mat3& m, const char* what) {
    if (!m.allFinite()) {
        throw InvalidArgumentError(std::string(what) + " must be finite");
    }
}

void require_symmetric(const Mat3& m, const char* what) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw InvalidArgumentError(std::string(what) + " must be symmetric");
    }
}

} // namespace

InertiaModel::InertiaModel(const Mat3& j_true, const Mat3& j_nom, const Mat3& j_bound)
    : j_true_(j_true), j_nom_(j_nom), j_bound_(j_bound) {
    require_finite(j_true_, "true inertia");
    require_finite(j_nom_, "nominal inertia");
    require_finite(j_bound_, "inertia bound");
    require_symmetric(j_true_, "true inertia");
    require_symmetric(j_nom_, "nominal inertia");
    if (j_bound_.minCoeff() < 0.0) {
        throw InvalidArgumentError("inertia bound entries must be nonnegative");
    }
    if (((j_true_ - j_nom_).cwiseAbs() - j_bound_).maxCoeff() > 1e-9) {
        throw InvalidArgumentError("true inertia violates the stated nominal bound");
    }

    Eigen::SelfAdjointEigenSolver<Mat3> es(j_true_);
    eig_lo_ = es.eigenvalues().minCoeff();
    eig_hi_ = es.eigenvalues().maxCoeff();
    if (eig_lo_ <= 0.0) {
        throw InvalidArgumentError("true inertia must be positive definite");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es_nom(j_nom_);
    if (es_nom.eigenvalues().minCoeff() <= 0.0) {
        throw InvalidArgumentError("nominal inertia must be positive definite");
    }
    j_true_inv_ = j_true_.inverse();
}

DisturbanceModel::DisturbanceModel(Kind kind, const Vec3& value, double freq,
                                   std::uint64_t seed)
    : kind_(kind), value_(value), freq_(freq), seed_(seed) {
    if (!value_.allFinite() || !std::isfinite(freq_)) {
        throw InvalidArgumentError("disturbance parameters must be finite");
    }
    switch (kind_) {
        case Kind::None:
            bound_ = Vec3::Zero();
            break;
        case Kind::Constant:
            bound_ = value_.cwiseAbs();
            break;
        case Kind::Sinusoid:
        case Kind::SeededRandom:
            if (value_.minCoeff() < 0.0) {
                throw InvalidArgumentError("disturbance amplitude must be nonnegative");
            }
            bound_ = value_;
            break;
    }
}

DisturbanceModel DisturbanceModel::none() {
    return DisturbanceModel(Kind::None, Vec3::Zero(), 0.0, 0);
}

DisturbanceModel DisturbanceModel::constant(const Vec3& value) {
    return DisturbanceModel(Kind::Constant, value, 0.0, 0);
}

DisturbanceModel DisturbanceModel::sinusoid(const Vec3& amplitude, double freq_hz) {
    if (freq_hz <= 0.0) {
        throw InvalidArgumentError("sinusoid frequency must be positive");
    }
    return DisturbanceModel(Kind::Sinusoid, amplitude, freq_hz, 0);
}

DisturbanceModel DisturbanceModel::seeded_random(const Vec3& bound, std::uint64_t seed) {
    return DisturbanceModel(Kind::SeededRandom, bound, 0.0, seed);
}

Vec3 DisturbanceModel::eval(double t) const {
    switch (kind_) {
        case Kind::None:
            return Vec3::Zero();
        case Kind::Constant:
            return value_;
        case Kind::Sinusoid: {
            const double s = std::sin(2.0 * M_PI * freq_ * t);
            return value_ * s;
        }
        case Kind::SeededRandom: {
            // Piecewise constant over 10 ms segments.
            const auto segment = static_cast<std::uint64_t>(std::floor(t * 100.0));
            Vec3 out;
            for (int i = 0; i < 3; ++i) {
                const std::uint64_t h = detail::mix64(detail::mix64(seed_ + segment) +
                                                      static_cast<std::uint64_t>(i));
                out[i] = value_[i] * (2.0 * detail::unit_from_bits(h) - 1.0);
            }
            return out;
        }
    }
    return Vec3::Zero();
}

UnknownDynamics UnknownDynamics::none() {
    UnknownDynamics d;
    auto zero = [](const RigidBodyState&) { return Vec3::Zero(); };
    d.f_true = zero;
    d.f_nom = zero;
    d.f_bound = zero;
    return d;
}

UnknownDynamics UnknownDynamics::viscous(const Vec3& c_true, const Vec3& c_nom,
                                         const Vec3& c_bound) {
    if (!c_true.allFinite() || !c_nom.allFinite() || !c_bound.allFinite()) {
        throw InvalidArgumentError("viscous coefficients must be finite");
    }
    if (((c_true - c_nom).cwiseAbs() - c_bound).maxCoeff() > 1e-9) {
        throw InvalidArgumentError("true viscous coefficient violates the stated bound");
    }
    UnknownDynamics d;
    d.f_true = [c_true](const RigidBodyState& st) {
        return Vec3(-c_true.cwiseProduct(st.omega));
    };
    d.f_nom = [c_nom](const RigidBodyState& st) {
        return Vec3(-c_nom.cwiseProduct(st.omega));
    };
    d.f_bound = [c_bound](const RigidBodyState& st) {
        return Vec3(c_bound.cwiseProduct(st.omega.cwiseAbs()));
    };
    return d;
}

Vec3 angular_accel(const RigidBodyState& state, const Vec3& torque,
                   const InertiaModel& inertia, const UnknownDynamics& dyn,
                   const DisturbanceModel& dist, double t) {
    const Vec3 gyro = state.omega.cross(inertia.j_true() * state.omega);
    const Vec3 rhs = torque + dyn.f_true(state) + dist.eval(t) - gyro;
    return inertia.j_true_inv() * rhs;
}

IntegrationStep rk4_step(const RigidBodyState& state, const Eigen::VectorXd& extras,
                         double t, double dt, const VectorField& field) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgumentError("step size must be positive and finite");
    }

    const Vec4 q0 = state.q.as_vec();
    const Vec3 w0 = state.omega;

    auto check = [&](const Derivatives& d, const char* stage) {
        if (!d.q_dot.allFinite() || !d.omega_dot.allFinite() ||
            (d.extras_dot.size() > 0 && !d.extras_dot.allFinite())) {
            throw DivergenceError(std::string("non-finite derivative at RK4 stage ") + stage, t);
        }
    };

    const Derivatives k1 = field(t, q0, w0, extras);
    check(k1, "1");

    auto stage_q = [&](const Vec4& q_raw) {
        // Stages renormalize so the field always sees a unit quaternion; the
        // intermediate raw vector can drift slightly off the sphere.
        return UnitQuaternion(q_raw).as_vec();
    };

    const double h2 = dt / 2;
    Eigen::VectorXd e1 = extras + h2 * k1.extras_dot;
    const Derivatives k2 = field(t + h2, stage_q(q0 + h2 * k1.q_dot), w0 + h2 * k1.omega_dot, e1);
    check(k2, "2");

    Eigen::VectorXd e2 = extras + h2 * k2.extras_dot;
    const Derivatives k3 = field(t + h2, stage_q(q0 + h2 * k2.q_dot), w0 + h2 * k2.omega_dot, e2);
    check(k3, "3");

    Eigen::VectorXd e3 = extras + dt * k3.extras_dot;
    const Derivatives k4 = field(t + dt, stage_q(q0 + dt * k3.q_dot), w0 + dt * k3.omega_dot, e3);
    check(k4, "4");

    const Vec4 q_raw = q0 + (dt / 6) * (k1.q_dot + 2 * k2.q_dot + 2 * k3.q_dot + k4.q_dot);
    const Vec3 w = w0 + (dt / 6) * (k1.omega_dot + 2 * k2.omega_dot + 2 * k3.omega_dot + k4.omega_dot);
    Eigen::VectorXd e = extras + (dt / 6) * (k1.extras_dot + 2 * k2.extras_dot +
                                             2 * k3.extras_dot + k4.extras_dot);

    if (!q_raw.allFinite() || !w.allFinite() || (e.size() > 0 && !e.allFinite())) {
        throw DivergenceError("non-finite state after RK4 step", t);
    }

    IntegrationStep out;
    out.state.q = UnitQuaternion(q_raw);
    out.state.omega = w;
    out.extras = std::move(e);
    return out;
}

} // namespace qsc
