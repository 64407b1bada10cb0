#include <qsc/sliding.hpp>
#include <qsc/errors.hpp>
#include <qsc/verify.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qsc;

namespace {

UnitQuaternion rand_quat(std::mt19937_64& rng, double min_scalar = 0.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Vec3 axis(u(rng), u(rng), u(rng));
        if (axis.norm() < 1e-3) continue;
        const double angle = (u(rng) + 1.0) * 1.5 + 0.05;
        const UnitQuaternion q = from_axis_angle(axis.normalized(), angle);
        if (std::abs(q.w()) > min_scalar) return q;
    }
}

Vec3 rand_vec(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return Vec3(u(rng), u(rng), u(rng)) * scale;
}

// Exact attitude propagation under a constant body rate.
UnitQuaternion propagate(const UnitQuaternion& q0, const Vec3& omega, double t) {
    const double speed = omega.norm();
    if (speed * std::abs(t) < 1e-300) return q0;
    return qmul(q0, from_axis_angle(omega / speed, speed * t));
}

} // namespace

TEST_CASE("proposed sliding variable and its branch") {
    SlidingConfig cfg; // lambda = 2

    const SlidingValue a = s_proposed(UnitQuaternion(0.5, 0.5, 0.5, 0.5), Vec3(0.1, 0, 0), cfg);
    CHECK((a.s - Vec3(1.1, 1.0, 1.0)).norm() < 1e-15);
    CHECK(a.branch == 1.0);

    const SlidingValue b = s_proposed(UnitQuaternion(-0.5, 0.5, 0.5, 0.5), Vec3::Zero(), cfg);
    CHECK((b.s - Vec3(-1, -1, -1)).norm() < 1e-15);
    CHECK(b.branch == -1.0);

    const SlidingValue id = s_proposed(UnitQuaternion(), Vec3::Zero(), cfg);
    CHECK(id.s.norm() == 0.0);
    CHECK(id.branch == 1.0);

    // The boundary scalar commits to the positive manifold.
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(s_proposed(UnitQuaternion(0.0, r, 0.0, -r), Vec3::Zero(), cfg).branch == 1.0);
}

TEST_CASE("reference velocity complements the sliding variable") {
    SlidingConfig cfg;
    const Vec3 w = omega_r(UnitQuaternion(0.5, 0.5, 0.5, 0.5), Vec3::Zero(), cfg);
    CHECK((w - Vec3(-1, -1, -1)).norm() < 1e-15);
    CHECK((omega_r(UnitQuaternion(), Vec3(0.3, 0, 0), cfg) - Vec3(0.3, 0, 0)).norm() == 0.0);

    std::mt19937_64 rng(21);
    for (int n = 0; n < 100; ++n) {
        const UnitQuaternion q_e = rand_quat(rng);
        const Vec3 omega = rand_vec(rng, 2.0);
        const Vec3 omega_d = rand_vec(rng, 1.0);
        const SlidingValue sv = s_proposed(q_e, omega - omega_d, cfg);
        CHECK((sv.s - (omega - omega_r(q_e, omega_d, cfg))).norm() < 1e-15);
    }
}

TEST_CASE("sliding value is invariant under the antipodal representation") {
    SlidingConfig cfg;
    std::mt19937_64 rng(22);
    for (int n = 0; n < 100; ++n) {
        const UnitQuaternion q_e = rand_quat(rng, 1e-6);
        const Vec3 omega_e = rand_vec(rng, 2.0);
        const SlidingValue plus = s_proposed(q_e, omega_e, cfg);
        const SlidingValue minus = s_proposed(q_e.negated(), omega_e, cfg);
        // negated() renormalizes, so the components may move by an ulp.
        CHECK((plus.s - minus.s).norm() < 1e-14);
        CHECK(plus.branch == -minus.branch);
    }
}

TEST_CASE("standard sign variant only differs on the branch boundary") {
    SlidingConfig cfg;
    const UnitQuaternion up(0.5, 0.5, 0.5, 0.5);
    CHECK((s_standard_sgn(up, Vec3(0.1, 0, 0), cfg) -
           s_proposed(up, Vec3(0.1, 0, 0), cfg).s).norm() == 0.0);
    const UnitQuaternion down(-0.5, 0.5, 0.5, 0.5);
    CHECK((s_standard_sgn(down, Vec3::Zero(), cfg) -
           s_proposed(down, Vec3::Zero(), cfg).s).norm() == 0.0);

    // sgn(0) = 0 erases the attitude term: a 180 degree error at rest is a
    // spurious equilibrium of this variant.
    CHECK(s_standard_sgn(UnitQuaternion(0, 1, 0, 0), Vec3::Zero(), cfg).norm() == 0.0);
}

TEST_CASE("legacy vector-part variable and its singularity") {
    SlidingConfig cfg;
    const UnitQuaternion q_d = from_axis_angle(Vec3(0, 1, 0), 0.8);
    CHECK(s_legacy_lo(q_d, q_d, Vec3::Zero(), Vec3::Zero(), cfg).norm() == 0.0);

    // T(identity) = I, so the feedforward reduces to omega - 2 qd_vec_dot.
    const Vec3 qd_dot(0.01, -0.02, 0.03);
    const Vec3 s = s_legacy_lo(UnitQuaternion(), q_d, qd_dot, Vec3(0.5, 0, 0), cfg);
    const Vec3 expect = Vec3(0.5, 0, 0) - 2.0 * qd_dot + 2.0 * (Vec3::Zero() - q_d.vec());
    CHECK((s - expect).norm() < 1e-14);

    CHECK_THROWS_AS(s_legacy_lo(UnitQuaternion(0, 1, 0, 0), q_d, qd_dot, Vec3::Zero(), cfg),
                    SingularityError);
}

TEST_CASE("rotation-matrix variable matches the quaternion bridge") {
    SlidingConfig cfg1;
    cfg1.lambda = 1.0;
    CHECK(s_so3(Mat3::Identity(), Vec3::Zero(), cfg1).norm() == 0.0);

    const RotationMatrix rz = to_rotation(from_axis_angle(Vec3(0, 0, 1), M_PI / 2));
    CHECK((s_so3(rz, Vec3::Zero(), cfg1) - Vec3(0, 0, 1)).norm() < 1e-12);

    // skew part of R(q_e) recovers 2 qe0 qe_vec.
    std::mt19937_64 rng(23);
    SlidingConfig cfg;
    for (int n = 0; n < 500; ++n) {
        const UnitQuaternion q_e = rand_quat(rng);
        const Vec3 via_so3 = s_so3(to_rotation(q_e), Vec3::Zero(), cfg);
        const Vec3 via_quat = cfg.lambda * 2.0 * q_e.w() * q_e.vec();
        CHECK((via_so3 - via_quat).norm() < 1e-12);
    }
}

TEST_CASE("error-vector rate matches a finite difference along exact motion") {
    std::mt19937_64 rng(24);
    const TrajectorySpec traj =
        TrajectorySpec::sinusoid(from_axis_angle(Vec3(1, 0, 0), 0.4), Vec3(0, 0, 1), 0.7, 0.3);
    const double h = 1e-6;
    for (int n = 0; n < 50; ++n) {
        const UnitQuaternion q0 = rand_quat(rng);
        const Vec3 omega = rand_vec(rng, 1.5);
        const double t = 0.2 + 0.05 * n;

        auto qe_at = [&](double tau) {
            const UnitQuaternion q = propagate(q0, omega, tau - t);
            return error_quaternion(traj.sample(tau).q_d, q);
        };
        const Vec3 fd = (qe_at(t + h).vec() - qe_at(t - h).vec()) / (2.0 * h);
        const Vec3 analytic = qe_vec_rate(qe_at(t), omega, traj.sample(t).omega_d);
        CHECK((fd - analytic).norm() < 1e-6);
    }
}

TEST_CASE("reference-rate derivatives match finite differences for every variant") {
    std::mt19937_64 rng(25);
    const TrajectorySpec traj =
        TrajectorySpec::sinusoid(from_axis_angle(Vec3(0, 1, 0), 0.3), Vec3(1, 0, 0), 0.5, 0.25);
    const double h = 1e-6;
    const SlidingConfig cfg;

    for (SlidingKind kind : {SlidingKind::Proposed, SlidingKind::StandardSgn,
                             SlidingKind::LegacyLo, SlidingKind::So3}) {
        for (int n = 0; n < 25; ++n) {
            // Keep scalars comfortably away from zero so branches cannot move
            // inside the difference stencil and T(q) stays well conditioned.
            const UnitQuaternion q0 = rand_quat(rng, 0.35);
            const Vec3 omega = rand_vec(rng, 1.0);
            const double t = 0.15 + 0.07 * n;

            auto omega_r_at = [&](double tau) {
                const UnitQuaternion q = propagate(q0, omega, tau - t);
                const TrackingSignals sig =
                    tracking_signals(kind, {q, omega}, traj.sample(tau), cfg);
                return Vec3(omega - sig.s);
            };
            const TrackingSignals sig = tracking_signals(kind, {q0, omega}, traj.sample(t), cfg);
            if (std::abs(sig.q_e.w()) < 0.05) continue; // stencil could straddle a branch
            const Vec3 fd = (omega_r_at(t + h) - omega_r_at(t - h)) / (2.0 * h);
            CHECK((fd - sig.omega_r_dot).norm() < 2e-5);
            CHECK((sig.s - (omega - sig.omega_r)).norm() < 1e-12);
        }
    }
}

TEST_CASE("on-manifold decay identity holds at random states") {
    std::mt19937_64 rng(26);
    for (int n = 0; n < 200; ++n) {
        CHECK(manifold_decay_residual(rand_quat(rng), 2.0) < 1e-10);
    }
    // At the branch boundary the scalar rate pushes into the positive
    // hemisphere instead of stalling.
    const UnitQuaternion eq(0.0, 0.6, -0.64, std::sqrt(1 - 0.36 - 0.4096));
    const Vec3 omega_e = -2.0 * sgn_plus(eq.w()) * eq.vec();
    const double qe0_rate = -0.5 * eq.vec().dot(omega_e);
    CHECK(qe0_rate > 0.0);
}
