#pragma once

#include <qsc/scenario.hpp>

#include <limits>
#include <vector>

namespace qsc {

struct RunLogRow {
    double t = 0;
    Vec4 q = Vec4(1, 0, 0, 0);
    Vec4 q_d = Vec4(1, 0, 0, 0);
    Vec3 omega = Vec3::Zero();
    Vec4 q_e = Vec4(1, 0, 0, 0);
    Vec3 s = Vec3::Zero();
    double branch = 1.0;
    Vec3 M = Vec3::Zero();
    Vec6 a_hat = Vec6::Zero();
    // Running integral of |omega_e| up to this row, kept at full step rate so
    // decimation does not distort path-length metrics.
    double cum_travel = 0;
};

// Quantities accumulated at every integrator step, independent of the log
// decimation.
struct RunAccumulators {
    double peak_torque = 0;
    double torque_integral = 0;
    double max_step_torque_jump = 0;
    double travel = 0;
    double bl_hit_time = std::numeric_limits<double>::infinity();
    long bl_exit_count = 0;
    double s_delta_max_after_hit = 0;
    bool any_gain_deficit = false;
};

struct RunLog {
    Scenario scenario;
    ParamVector a_true = ParamVector::Zero();
    bool has_estimates = false;
    long decimation = 1;
    std::vector<RunLogRow> rows;
    RunAccumulators acc;
};

// Per-step snapshot handed to an observer: the state and control at time t,
// before the step from t is taken.
struct StepSample {
    double t = 0;
    RigidBodyState state;
    UnitQuaternion q_e;
    Vec3 s = Vec3::Zero();
    double branch = 1.0;
    Vec3 omega_r = Vec3::Zero();
    Vec3 omega_r_dot = Vec3::Zero();
    Vec3 M = Vec3::Zero();
    Vec6 a_hat = Vec6::Zero();
    bool has_estimate = false;
};

using StepObserver = std::function<void(const StepSample&)>;

// Runs the closed loop. Deterministic for a fixed scenario (including seed).
// Logging is decimated to at most scenario.max_log_rows + 1 rows; the final
// state is always logged. The observer, when given, sees every full-rate step.
RunLog run_scenario(const Scenario& sc);
RunLog run_scenario(const Scenario& sc, const StepObserver& observer);

struct Metrics {
    std::string name;
    double settling_time = std::numeric_limits<double>::infinity();
    Vec3 ss_max_s = Vec3::Zero(); // per-axis max |s_i| over the last 20% of the run
    double peak_torque = 0;
    double torque_integral = 0;
    // Traveled rotation over the convergent phase, divided by the initial
    // geodesic distance 2 acos(|qe0(0)|). The traveled rotation counts the
    // integrated |omega_e| plus the geodesic distance still remaining at the
    // end of the phase, so the ratio is 1 for a perfect direct maneuver and
    // cannot drop below 1 beyond integration error.
    double unwinding_ratio = 1.0;
    double bl_hit_time = std::numeric_limits<double>::infinity();
    long bl_exit_count = 0;
    double s_delta_max_after_hit = 0;
    long switch_count = 0;
};

Metrics compute_metrics(const RunLog& log);

// Number of branch changes between consecutive rows while |qe_vec| exceeds
// the switch gate on both sides of the change. Changes inside the converged
// noise ball are deliberately ignored.
long detect_manifold_switch(const RunLog& log);

// Time-series CSV: fixed column order, one header row, round-trip decimal
// formatting. Adaptive runs append the six estimate columns.
void emit_csv(const RunLog& log, const std::string& path);

// One row per metrics entry, named columns.
void emit_metrics_csv(const std::vector<Metrics>& metrics, const std::string& path);

} // namespace qsc
