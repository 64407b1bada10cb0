#include <qsc/runlog.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace qsc {

namespace {

long step_count(const Scenario& sc) {
    return std::lround(sc.duration / sc.dt);
}

// Smallest decimation that keeps the row count within budget, preferring a
// divisor of the step count so the final row lands on the decimation grid.
long pick_decimation(long steps, long max_rows) {
    const long k0 = (steps + max_rows) / max_rows; // ceil((steps + 1) / max_rows)
    if (k0 <= 1) return 1;
    for (long k = k0; k <= k0 + 100; ++k) {
        if (steps % k == 0) return k;
    }
    return k0;
}

struct ControlEval {
    TrackingSignals sig;
    TorqueCommand cmd;
};

ControlEval eval_control(const Scenario& sc, const ResolvedModels& models, double t,
                         const RigidBodyState& state, const Vec6& a_hat) {
    const DesiredSample des = sc.trajectory.sample(t);
    ControlEval out;
    out.sig = tracking_signals(sc.sliding, state, des, sc.sliding_cfg);
    switch (sc.controller) {
        case ControllerKind::Pd:
            out.cmd = sliding_law_torque(models.nominal.J, models.nominal.f(state), state,
                                         out.sig, sc.gains);
            break;
        case ControllerKind::Robust:
            out.cmd = robust_torque(state, des, models.nominal, sc.sliding_cfg, sc.gains);
            break;
        case ControllerKind::Adaptive:
            out.cmd = adaptive_torque(state, des, a_hat, sc.sliding_cfg, sc.gains);
            break;
        case ControllerKind::Baseline:
            out.cmd = baseline_wie_pd(state, out.sig.q_e, sc.gains);
            break;
        case ControllerKind::KinematicManifold:
            // The rate loop is assumed ideal: omega is imposed on the sliding
            // manifold, so the torque channel is unused.
            out.cmd = TorqueCommand{};
            out.cmd.s = out.sig.s;
            out.cmd.branch = out.sig.branch;
            break;
    }
    return out;
}

} // namespace

RunLog run_scenario(const Scenario& sc) {
    return run_scenario(sc, StepObserver());
}

RunLog run_scenario(const Scenario& sc, const StepObserver& observer) {
    const ResolvedModels models = resolve_models(sc);
    const long steps = step_count(sc);
    const long decimation = pick_decimation(steps, sc.max_log_rows);
    const bool adaptive = sc.controller == ControllerKind::Adaptive;
    const bool kinematic = sc.controller == ControllerKind::KinematicManifold;

    const PsiFunction psi = (adaptive && sc.adapt.psi == PsiKind::Quadratic)
        ? PsiFunction::quadratic(Mat6(sc.adapt.gamma * Mat6::Identity()))
        : PsiFunction::logdet();

    RunLog log;
    log.scenario = sc;
    log.a_true = models.a_true;
    log.has_estimates = adaptive;
    log.decimation = decimation;
    log.rows.reserve(static_cast<std::size_t>(steps / decimation + 2));

    RigidBodyState state{sc.q0, sc.omega0};
    Eigen::VectorXd extras;
    if (adaptive) {
        extras = models.a0;
    } else {
        extras.resize(0);
    }

    const VectorField field = [&](double t, const Vec4& q_raw, const Vec3& omega,
                                  const Eigen::VectorXd& ex) {
        const RigidBodyState st{UnitQuaternion(q_raw), omega};
        Derivatives d;
        if (kinematic) {
            const DesiredSample des = sc.trajectory.sample(t);
            const UnitQuaternion q_e = error_quaternion(des.q_d, st.q);
            const Vec3 imposed = omega_r(q_e, des.omega_d, sc.sliding_cfg);
            d.q_dot = quat_deriv(st.q, imposed);
            d.omega_dot = Vec3::Zero();
            return d;
        }
        const Vec6 a_hat = adaptive ? Vec6(ex) : models.a0;
        const ControlEval ev = eval_control(sc, models, t, st, a_hat);
        d.q_dot = quat_deriv(st.q, st.omega);
        d.omega_dot = angular_accel(st, ev.cmd.M_b, models.inertia, models.fdyn,
                                    models.disturbance, t);
        if (adaptive) {
            const Mat63 y = regressor(st.omega, ev.sig.omega_r_dot);
            d.extras_dot = adapt_step_deriv(a_hat, y, ev.sig.s, psi);
        }
        return d;
    };

    // The adaptive estimate must stay inside the positive-definite cone. A
    // step that lands (or evaluates a stage) outside is retried as two half
    // steps; beyond four refinement levels the estimate is deemed broken.
    const std::function<IntegrationStep(const RigidBodyState&, const Eigen::VectorXd&, double,
                                        double, int)>
        attempt_step = [&](const RigidBodyState& st, const Eigen::VectorXd& ex, double t,
                           double h, int depth) -> IntegrationStep {
        try {
            return rk4_step(st, ex, t, h, field);
        } catch (const Error& e) {
            const bool cone_violation = dynamic_cast<const EstimateInvalidError*>(&e) != nullptr ||
                                        dynamic_cast<const DomainError*>(&e) != nullptr;
            if (!cone_violation) throw;
            if (depth >= 4) {
                throw EstimateInvalidError(
                    std::string("estimate left the positive-definite cone and step "
                                "refinement could not repair it: ") + e.what());
            }
            const IntegrationStep first = attempt_step(st, ex, t, h / 2, depth + 1);
            return attempt_step(first.state, first.extras, t + h / 2, h / 2, depth + 1);
        }
    };

    bool flipped = false;
    bool prev_inside_layer = false;
    bool have_prev_m = false;
    Vec3 prev_m = Vec3::Zero();

    for (long n = 0; n <= steps; ++n) {
        const double t = n * sc.dt;

        if (!flipped && sc.flip_time && t >= *sc.flip_time - sc.dt / 2) {
            state.q = state.q.negated();
            flipped = true;
        }

        if (kinematic) {
            // Keep the logged rate consistent with the imposed kinematics.
            const DesiredSample des = sc.trajectory.sample(t);
            const UnitQuaternion q_e = error_quaternion(des.q_d, state.q);
            state.omega = omega_r(q_e, des.omega_d, sc.sliding_cfg);
        }

        const Vec6 a_hat = adaptive ? Vec6(extras) : models.a0;
        ControlEval ev;
        try {
            ev = eval_control(sc, models, t, state, a_hat);
        } catch (const DivergenceError& e) {
            throw DivergenceError(e.what(), e.t(), n);
        }
        const DesiredSample des = sc.trajectory.sample(t);

        const double m_norm = ev.cmd.M_b.norm();
        log.acc.peak_torque = std::max(log.acc.peak_torque, m_norm);
        if (have_prev_m) {
            log.acc.max_step_torque_jump =
                std::max(log.acc.max_step_torque_jump, (ev.cmd.M_b - prev_m).norm());
        }
        prev_m = ev.cmd.M_b;
        have_prev_m = true;

        const bool inside_layer =
            (ev.sig.s.cwiseAbs().array() <= sc.gains.Phi.array()).all();
        if (std::isinf(log.acc.bl_hit_time)) {
            if (inside_layer) log.acc.bl_hit_time = t;
        } else {
            if (prev_inside_layer && !inside_layer) ++log.acc.bl_exit_count;
            Vec3 s_delta;
            for (int i = 0; i < 3; ++i) {
                const double sat = std::clamp(ev.sig.s[i] / sc.gains.Phi[i], -1.0, 1.0);
                s_delta[i] = ev.sig.s[i] - sc.gains.Phi[i] * sat;
            }
            log.acc.s_delta_max_after_hit =
                std::max(log.acc.s_delta_max_after_hit, s_delta.cwiseAbs().maxCoeff());
        }
        prev_inside_layer = inside_layer;
        log.acc.any_gain_deficit = log.acc.any_gain_deficit || ev.cmd.gain_deficit;

        if (observer) {
            StepSample sample;
            sample.t = t;
            sample.state = state;
            sample.q_e = ev.sig.q_e;
            sample.s = ev.sig.s;
            sample.branch = ev.cmd.branch;
            sample.omega_r = ev.sig.omega_r;
            sample.omega_r_dot = ev.sig.omega_r_dot;
            sample.M = ev.cmd.M_b;
            sample.a_hat = a_hat;
            sample.has_estimate = adaptive;
            observer(sample);
        }

        if (n % decimation == 0 || n == steps) {
            RunLogRow row;
            row.t = t;
            row.q = state.q.as_vec();
            row.q_d = des.q_d.as_vec();
            row.omega = state.omega;
            row.q_e = ev.sig.q_e.as_vec();
            row.s = ev.sig.s;
            row.branch = ev.cmd.branch;
            row.M = ev.cmd.M_b;
            row.a_hat = a_hat;
            row.cum_travel = log.acc.travel;
            log.rows.push_back(row);
        }

        if (n == steps) break;

        const Vec3 omega_err =
            state.omega - to_rotation(ev.sig.q_e).transpose() * des.omega_d;
        log.acc.travel += omega_err.norm() * sc.dt;
        log.acc.torque_integral += m_norm * sc.dt;

        try {
            const IntegrationStep next = attempt_step(state, extras, t, sc.dt, 0);
            state = next.state;
            extras = next.extras;
        } catch (const DivergenceError& e) {
            throw DivergenceError(e.what(), e.t(), n);
        }
    }

    return log;
}

namespace {

std::size_t settle_row(const RunLog& log) {
    // First row from which |qe_vec| stays under the threshold through the end;
    // log.rows.size() when it never settles.
    const double thr = log.scenario.metrics.settle_threshold;
    std::size_t candidate = log.rows.size();
    for (std::size_t i = 0; i < log.rows.size(); ++i) {
        const double err = log.rows[i].q_e.tail<3>().norm();
        if (err < thr) {
            if (candidate == log.rows.size()) candidate = i;
        } else {
            candidate = log.rows.size();
        }
    }
    return candidate;
}

} // namespace

long detect_manifold_switch(const RunLog& log) {
    const double gate = log.scenario.metrics.switch_gate;
    long count = 0;
    for (std::size_t i = 1; i < log.rows.size(); ++i) {
        if (log.rows[i].branch == log.rows[i - 1].branch) continue;
        const double a = log.rows[i - 1].q_e.tail<3>().norm();
        const double b = log.rows[i].q_e.tail<3>().norm();
        if (a > gate && b > gate) ++count;
    }
    return count;
}

Metrics compute_metrics(const RunLog& log) {
    if (log.rows.empty()) {
        throw InvalidArgumentError("cannot compute metrics of an empty log");
    }
    Metrics m;
    m.name = log.scenario.name;

    const std::size_t settled = settle_row(log);
    if (settled < log.rows.size()) {
        m.settling_time = log.rows[settled].t;
    }

    const std::size_t tail_start = (log.rows.size() * 4) / 5;
    for (std::size_t i = tail_start; i < log.rows.size(); ++i) {
        m.ss_max_s = m.ss_max_s.cwiseMax(log.rows[i].s.cwiseAbs());
    }

    m.peak_torque = log.acc.peak_torque;
    m.torque_integral = log.acc.torque_integral;

    // Traveled rotation over the convergent phase against the initial
    // geodesic. The end of the phase is the settling row when there is one,
    // otherwise the last row; the geodesic still remaining at that point is
    // charged to the maneuver so truncation cannot deflate the ratio.
    const std::size_t end = settled < log.rows.size() ? settled : log.rows.size() - 1;
    const double qe0_initial = std::clamp(std::abs(log.rows.front().q_e[0]), 0.0, 1.0);
    const double geodesic = 2.0 * std::acos(qe0_initial);
    if (geodesic >= 1e-12) {
        const double remaining_sin =
            std::clamp(log.rows[end].q_e.tail<3>().norm(), 0.0, 1.0);
        const double traveled = log.rows[end].cum_travel + 2.0 * std::asin(remaining_sin);
        m.unwinding_ratio = traveled / geodesic;
    }

    m.bl_hit_time = log.acc.bl_hit_time;
    m.bl_exit_count = log.acc.bl_exit_count;
    m.s_delta_max_after_hit = log.acc.s_delta_max_after_hit;
    m.switch_count = detect_manifold_switch(log);
    return m;
}

namespace {

void append_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

void emit_csv(const RunLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    std::string header = "t,qw,qx,qy,qz,qdw,qdx,qdy,qdz,wx,wy,wz,"
                         "qew,qex,qey,qez,sx,sy,sz,branch,Mx,My,Mz";
    if (log.has_estimates) {
        header += ",a1,a2,a3,a4,a5,a6";
    }
    out << header << "\n";

    std::string line;
    for (const RunLogRow& row : log.rows) {
        line.clear();
        append_value(line, row.t);
        for (int i = 0; i < 4; ++i) { line += ','; append_value(line, row.q[i]); }
        for (int i = 0; i < 4; ++i) { line += ','; append_value(line, row.q_d[i]); }
        for (int i = 0; i < 3; ++i) { line += ','; append_value(line, row.omega[i]); }
        for (int i = 0; i < 4; ++i) { line += ','; append_value(line, row.q_e[i]); }
        for (int i = 0; i < 3; ++i) { line += ','; append_value(line, row.s[i]); }
        line += ',';
        append_value(line, row.branch);
        for (int i = 0; i < 3; ++i) { line += ','; append_value(line, row.M[i]); }
        if (log.has_estimates) {
            for (int i = 0; i < 6; ++i) { line += ','; append_value(line, row.a_hat[i]); }
        }
        out << line << "\n";
    }
    if (!out) {
        throw IoError("failed while writing '" + path + "'");
    }
}

void emit_metrics_csv(const std::vector<Metrics>& metrics, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << "name,settling_time,ss_max_sx,ss_max_sy,ss_max_sz,peak_torque,"
           "torque_integral,unwinding_ratio,bl_hit_time,bl_exit_count,"
           "s_delta_max_after_hit,switch_count\n";
    std::string line;
    for (const Metrics& m : metrics) {
        line = m.name;
        line += ',';
        append_value(line, m.settling_time);
        for (int i = 0; i < 3; ++i) { line += ','; append_value(line, m.ss_max_s[i]); }
        line += ','; append_value(line, m.peak_torque);
        line += ','; append_value(line, m.torque_integral);
        line += ','; append_value(line, m.unwinding_ratio);
        line += ','; append_value(line, m.bl_hit_time);
        line += ',';
        line += std::to_string(m.bl_exit_count);
        line += ','; append_value(line, m.s_delta_max_after_hit);
        line += ',';
        line += std::to_string(m.switch_count);
        out << line << "\n";
    }
    if (!out) {
        throw IoError("failed while writing '" + path + "'");
    }
}

} // namespace qsc
