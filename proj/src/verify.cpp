#include <qsc/verify.hpp>

#include <qsc/adapt.hpp>
#include <qsc/control.hpp>
#include <qsc/dynamics.hpp>
#include <qsc/scenario.hpp>

#include <json.hpp>

#include <cmath>

namespace qsc {

bool VerifyReport::all_pass() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

double manifold_decay_residual(const UnitQuaternion& q_e, double lambda) {
    // Both sides in the design algebra: the error-vector rate along the
    // manifold is qe0 omega_e + qe_vec x omega_e with omega_e set by the
    // manifold condition.
    const Vec3 omega_e = -lambda * sgn_plus(q_e.w()) * q_e.vec();
    const Vec3 rate = q_e.w() * omega_e + q_e.vec().cross(omega_e);
    const double lhs = 2.0 * q_e.vec().dot(rate);
    const double rhs = -2.0 * lambda * std::abs(q_e.w()) * q_e.vec().squaredNorm();
    return std::abs(lhs - rhs);
}

namespace {

Vec3 uniform_vec3(std::uint64_t seed, std::uint64_t& index, double scale) {
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        v[i] = scale * seeded_uniform(seed, index++);
    }
    return v;
}

UnitQuaternion random_unit_quat(std::uint64_t seed, std::uint64_t& index) {
    for (;;) {
        Vec3 axis = uniform_vec3(seed, index, 1.0);
        if (axis.norm() < 1e-3) continue;
        const double angle = M_PI * seeded_uniform(seed, index++);
        return from_axis_angle(axis, angle);
    }
}

VerifyCheck check_quat_rotation_composition(std::uint64_t seed) {
    std::uint64_t index = 0;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const UnitQuaternion p = random_unit_quat(seed, index);
        const UnitQuaternion q = random_unit_quat(seed, index);
        const Mat3 lhs = to_rotation(qmul(p, q));
        const Mat3 rhs = to_rotation(p) * to_rotation(q);
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    VerifyCheck c;
    c.name = "quat_rotation_composition";
    c.value = worst;
    c.lo = 0.0;
    c.hi = 1e-12;
    c.pass = worst <= c.hi;
    c.detail = "max |R(p*q) - R(p)R(q)| over 1000 sample pairs";
    return c;
}

VerifyCheck check_logdet_hessian_fd(std::uint64_t seed, double perturbation) {
    const PsiFunction psi = PsiFunction::logdet();
    std::uint64_t index = 1000;
    double worst_rel = 0.0;
    for (int k = 0; k < 100; ++k) {
        Mat3 a_raw;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                a_raw(i, j) = seeded_uniform(seed, index++);
            }
        }
        const Mat3 m = a_raw * a_raw.transpose() + 0.5 * Mat3::Identity();
        const ParamVector a = matrix_params(m);

        Mat6 analytic = psi.hessian(a);
        analytic.array() += perturbation;

        Mat6 fd;
        for (int j = 0; j < 6; ++j) {
            const double h = 1e-4 * std::max(1.0, std::abs(a[j]));
            ParamVector hi = a, lo = a;
            hi[j] += h;
            lo[j] -= h;
            fd.col(j) = (psi.gradient(hi) - psi.gradient(lo)) / (2.0 * h);
        }
        const double scale = analytic.cwiseAbs().maxCoeff();
        worst_rel = std::max(worst_rel, (fd - analytic).cwiseAbs().maxCoeff() / scale);
    }
    VerifyCheck c;
    c.name = "logdet_hessian_fd";
    c.value = worst_rel;
    c.lo = 0.0;
    c.hi = 1e-6;
    c.pass = worst_rel <= c.hi;
    c.detail = "max relative error vs central differences over 100 PD points";
    return c;
}

VerifyCheck check_regressor_identity(std::uint64_t seed) {
    std::uint64_t index = 5000;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Vec3 omega = uniform_vec3(seed, index, 2.0);
        const Vec3 omega_r_dot = uniform_vec3(seed, index, 2.0);
        ParamVector a;
        for (int i = 0; i < 6; ++i) a[i] = seeded_uniform(seed, index++);

        const Vec3 lhs = regressor(omega, omega_r_dot).transpose() * a;
        const Mat3 j = param_matrix(a);
        const Vec3 rhs = j * omega_r_dot + omega.cross(j * omega);
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    VerifyCheck c;
    c.name = "regressor_identity";
    c.value = worst;
    c.lo = 0.0;
    c.hi = 1e-12;
    c.pass = worst <= c.hi;
    c.detail = "max |Y^T a - (J(a) w_r_dot + w x J(a) w)| over 1000 samples";
    return c;
}

VerifyCheck check_rk4_order() {
    const Mat3 j = Vec3(1, 2, 3).asDiagonal();
    const Mat3 j_inv = j.inverse();
    const VectorField field = [&](double, const Vec4& q_raw, const Vec3& omega,
                                  const Eigen::VectorXd&) {
        Derivatives d;
        d.q_dot = quat_deriv(UnitQuaternion(q_raw), omega);
        d.omega_dot = j_inv * (-omega.cross(j * omega));
        return d;
    };

    auto integrate = [&](double dt) {
        RigidBodyState st;
        st.q = UnitQuaternion(1, 0, 0, 0);
        st.omega = Vec3(1.0, 0.5, -0.5);
        Eigen::VectorXd extras(0);
        const long steps = std::lround(2.0 / dt);
        for (long n = 0; n < steps; ++n) {
            const IntegrationStep next = rk4_step(st, extras, n * dt, dt, field);
            st = next.state;
            extras = next.extras;
        }
        return st;
    };

    // Terminal error against a much finer reference; its own error is 4096
    // times smaller and does not move the ratio.
    const RigidBodyState ref = integrate(0.0025);
    auto err = [&](const RigidBodyState& st) {
        return (st.q.as_vec() - ref.q.as_vec()).norm() + (st.omega - ref.omega).norm();
    };
    const double e1 = err(integrate(0.02));
    const double e2 = err(integrate(0.01));

    VerifyCheck c;
    c.name = "rk4_order";
    c.value = e1 / e2;
    c.lo = 8.0;
    c.hi = 32.0;
    c.pass = c.value >= c.lo && c.value <= c.hi;
    c.detail = "terminal-error factor when halving dt on a torque-free tumble";
    return c;
}

VerifyCheck check_manifold_decay(std::uint64_t seed) {
    std::uint64_t index = 20000;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const UnitQuaternion q_e = random_unit_quat(seed, index);
        worst = std::max(worst, manifold_decay_residual(q_e, 2.0));
    }
    VerifyCheck c;
    c.name = "manifold_decay_identity";
    c.value = worst;
    c.lo = 0.0;
    c.hi = 1e-10;
    c.pass = worst <= c.hi;
    c.detail = "max decay-law residual over 100 random error quaternions";
    return c;
}

} // namespace

VerifyReport verify(const VerifyOptions& opts) {
    VerifyReport report;
    report.checks.push_back(check_quat_rotation_composition(opts.seed));
    report.checks.push_back(check_logdet_hessian_fd(opts.seed, opts.hessian_perturbation));
    report.checks.push_back(check_regressor_identity(opts.seed));
    report.checks.push_back(check_rk4_order());
    report.checks.push_back(check_manifold_decay(opts.seed));
    return report;
}

std::string to_json(const VerifyReport& report) {
    nlohmann::json j;
    j["all_pass"] = report.all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        j["checks"].push_back({
            {"name", c.name},
            {"value", c.value},
            {"lo", c.lo},
            {"hi", c.hi},
            {"pass", c.pass},
            {"detail", c.detail},
        });
    }
    return j.dump(2);
}

} // namespace qsc
