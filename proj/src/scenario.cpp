#include <qsc/scenario.hpp>

#include "mix64.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace qsc {

double seeded_uniform(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t h = detail::mix64(detail::mix64(seed) + index);
    return 2.0 * detail::unit_from_bits(h) - 1.0;
}

namespace {

long step_count(const Scenario& sc) {
    return std::lround(sc.duration / sc.dt);
}

Mat3 diag_from(const Vec3& v) {
    return v.asDiagonal();
}

} // namespace

ResolvedModels resolve_models(const Scenario& sc) {
    if (!(sc.dt > 0.0) || !std::isfinite(sc.dt)) {
        throw ConfigError("dt must be positive and finite");
    }
    if (!(sc.duration > 0.0) || !std::isfinite(sc.duration)) {
        throw ConfigError("duration must be positive and finite");
    }
    const long steps = step_count(sc);
    if (steps < 1) {
        throw ConfigError("duration must cover at least one step");
    }
    if (steps > 10'000'000L) {
        throw ConfigError("step budget exceeded: duration/dt > 1e7");
    }
    if (sc.max_log_rows < 1) {
        throw ConfigError("log.max_rows must be at least 1");
    }
    if (!(sc.sliding_cfg.lambda > 0.0) || !std::isfinite(sc.sliding_cfg.lambda)) {
        throw ConfigError("lambda must be positive and finite");
    }
    if (!(sc.metrics.settle_threshold > 0.0)) {
        throw ConfigError("metrics.settle_threshold must be positive");
    }
    if (sc.metrics.switch_gate < 0.0) {
        throw ConfigError("metrics.switch_gate must be nonnegative");
    }
    if (sc.flip_time && (!(std::isfinite(*sc.flip_time)) || *sc.flip_time < 0.0)) {
        throw ConfigError("flip.time must be nonnegative and finite");
    }
    try {
        validate(sc.gains);
    } catch (const InvalidArgumentError& e) {
        throw ConfigError(std::string("gains: ") + e.what());
    }

    const bool needs_proposed = sc.controller == ControllerKind::Robust ||
                                sc.controller == ControllerKind::Adaptive ||
                                sc.controller == ControllerKind::KinematicManifold;
    if (needs_proposed && sc.sliding != SlidingKind::Proposed) {
        throw ConfigError("this controller is defined on the proposed sliding variable only");
    }
    if (sc.controller == ControllerKind::Adaptive && sc.fdyn.kind != FdynConfig::Kind::None) {
        throw ConfigError("the adaptive law carries no model for extra dynamics; "
                          "dynamics.kind must be none");
    }
    if (sc.adapt.psi == PsiKind::Quadratic &&
        (!(sc.adapt.gamma > 0.0) || !std::isfinite(sc.adapt.gamma))) {
        throw ConfigError("adapt.gamma must be positive and finite");
    }

    const Mat3 j_nom = param_matrix(sc.inertia.nominal);
    if (sc.inertia.bound.minCoeff() < 0.0) {
        throw ConfigError("inertia.bound entries must be nonnegative");
    }
    const Mat3 j_bound = param_matrix(sc.inertia.bound);

    Mat3 j_true;
    if (sc.inertia.draw == InertiaConfig::Draw::Fixed) {
        j_true = param_matrix(sc.inertia.true_params);
    } else {
        Vec3 delta;
        for (int i = 0; i < 3; ++i) {
            delta[i] = seeded_uniform(sc.seed, static_cast<std::uint64_t>(i)) * sc.inertia.bound[i];
        }
        j_true = j_nom + diag_from(delta);
    }

    ResolvedModels out{
        InertiaModel(Mat3::Identity(), Mat3::Identity(), Mat3::Zero()),
        DisturbanceModel::none(),
        UnknownDynamics::none(),
        NominalModel::exact(Mat3::Identity()),
        ParamVector::Zero(),
        ParamVector::Zero(),
    };

    try {
        out.inertia = InertiaModel(j_true, j_nom, j_bound);
    } catch (const InvalidArgumentError& e) {
        throw ConfigError(std::string("inertia: ") + e.what());
    }

    try {
        switch (sc.disturbance.kind) {
            case DisturbanceConfig::Kind::None:
                out.disturbance = DisturbanceModel::none();
                break;
            case DisturbanceConfig::Kind::Constant:
                out.disturbance = DisturbanceModel::constant(sc.disturbance.value);
                break;
            case DisturbanceConfig::Kind::Sinusoid:
                out.disturbance = DisturbanceModel::sinusoid(sc.disturbance.value,
                                                             sc.disturbance.frequency);
                break;
            case DisturbanceConfig::Kind::SeededRandom:
                out.disturbance = DisturbanceModel::seeded_random(sc.disturbance.value, sc.seed);
                break;
        }
        if (sc.fdyn.kind == FdynConfig::Kind::Viscous) {
            out.fdyn = UnknownDynamics::viscous(sc.fdyn.c_true, sc.fdyn.c_nom, sc.fdyn.c_bound);
        } else {
            out.fdyn = UnknownDynamics::none();
        }
    } catch (const InvalidArgumentError& e) {
        throw ConfigError(e.what());
    }

    out.nominal.J = j_nom;
    out.nominal.f = out.fdyn.f_nom;
    out.nominal.J_bound = j_bound;
    out.nominal.f_bound = out.fdyn.f_bound;
    out.nominal.D = out.disturbance.bound();

    out.a_true = matrix_params(j_true);
    out.a0 = sc.adapt.a0.value_or(matrix_params(j_nom));
    if (sc.controller == ControllerKind::Adaptive && sc.adapt.psi == PsiKind::LogDet) {
        if (!PsiFunction::logdet().in_domain(out.a0)) {
            throw ConfigError("adapt.a0 must embed to a positive-definite matrix "
                              "for the log-det potential");
        }
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& key, const std::string& value,
                                  std::size_t count) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(key + ": '" + item + "' is not a number");
        }
    }
    if (out.size() != count) {
        throw ConfigError(key + ": expected " + std::to_string(count) + " comma-separated values");
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    return parse_numbers(key, value, 1)[0];
}

Vec3 parse_vec3(const std::string& key, const std::string& value) {
    const auto v = parse_numbers(key, value, 3);
    return Vec3(v[0], v[1], v[2]);
}

Vec4 parse_vec4(const std::string& key, const std::string& value) {
    const auto v = parse_numbers(key, value, 4);
    return Vec4(v[0], v[1], v[2], v[3]);
}

Vec6 parse_vec6(const std::string& key, const std::string& value) {
    const auto v = parse_numbers(key, value, 6);
    Vec6 out;
    for (int i = 0; i < 6; ++i) out[i] = v[i];
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + value + "' is not an unsigned integer");
    }
}

UnitQuaternion parse_quat(const std::string& key, const std::string& value) {
    try {
        return UnitQuaternion(parse_vec4(key, value));
    } catch (const InvalidArgumentError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    long line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError("duplicate key '" + key + "'");
        }
    }

    Scenario sc;

    // Trajectory keys are interdependent, so collect them first.
    std::string traj_kind = "constant";
    UnitQuaternion traj_q;
    Vec3 traj_axis = Vec3::UnitX();
    double traj_rate = 0.0, traj_amplitude = 0.0, traj_frequency = 1.0;

    auto take = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("name")) sc.name = *v;
    if (auto v = take("controller")) {
        if (*v == "pd") sc.controller = ControllerKind::Pd;
        else if (*v == "robust") sc.controller = ControllerKind::Robust;
        else if (*v == "adaptive") sc.controller = ControllerKind::Adaptive;
        else if (*v == "baseline") sc.controller = ControllerKind::Baseline;
        else if (*v == "kinematic_manifold") sc.controller = ControllerKind::KinematicManifold;
        else throw ConfigError("controller: unknown value '" + *v + "'");
    }
    if (auto v = take("sliding")) {
        if (*v == "proposed") sc.sliding = SlidingKind::Proposed;
        else if (*v == "legacy_lo") sc.sliding = SlidingKind::LegacyLo;
        else if (*v == "standard_sgn") sc.sliding = SlidingKind::StandardSgn;
        else if (*v == "so3") sc.sliding = SlidingKind::So3;
        else throw ConfigError("sliding: unknown value '" + *v + "'");
    }
    if (auto v = take("lambda")) sc.sliding_cfg.lambda = parse_double("lambda", *v);
    if (auto v = take("dt")) sc.dt = parse_double("dt", *v);
    if (auto v = take("duration")) sc.duration = parse_double("duration", *v);
    if (auto v = take("seed")) sc.seed = parse_u64("seed", *v);

    if (auto v = take("initial.q")) sc.q0 = parse_quat("initial.q", *v);
    if (auto v = take("initial.omega")) sc.omega0 = parse_vec3("initial.omega", *v);

    if (auto v = take("trajectory.kind")) traj_kind = *v;
    if (auto v = take("trajectory.q_d")) traj_q = parse_quat("trajectory.q_d", *v);
    if (auto v = take("trajectory.axis")) traj_axis = parse_vec3("trajectory.axis", *v);
    if (auto v = take("trajectory.rate")) traj_rate = parse_double("trajectory.rate", *v);
    if (auto v = take("trajectory.amplitude"))
        traj_amplitude = parse_double("trajectory.amplitude", *v);
    if (auto v = take("trajectory.frequency"))
        traj_frequency = parse_double("trajectory.frequency", *v);

    if (auto v = take("inertia.true")) sc.inertia.true_params = parse_vec6("inertia.true", *v);
    if (auto v = take("inertia.nominal")) sc.inertia.nominal = parse_vec6("inertia.nominal", *v);
    if (auto v = take("inertia.bound")) sc.inertia.bound = parse_vec6("inertia.bound", *v);
    if (auto v = take("inertia.draw")) {
        if (*v == "fixed") sc.inertia.draw = InertiaConfig::Draw::Fixed;
        else if (*v == "seeded_diagonal") sc.inertia.draw = InertiaConfig::Draw::SeededDiagonal;
        else throw ConfigError("inertia.draw: unknown value '" + *v + "'");
    }

    if (auto v = take("disturbance.kind")) {
        if (*v == "none") sc.disturbance.kind = DisturbanceConfig::Kind::None;
        else if (*v == "constant") sc.disturbance.kind = DisturbanceConfig::Kind::Constant;
        else if (*v == "sinusoid") sc.disturbance.kind = DisturbanceConfig::Kind::Sinusoid;
        else if (*v == "seeded_random")
            sc.disturbance.kind = DisturbanceConfig::Kind::SeededRandom;
        else throw ConfigError("disturbance.kind: unknown value '" + *v + "'");
    }
    if (auto v = take("disturbance.value")) sc.disturbance.value = parse_vec3("disturbance.value", *v);
    if (auto v = take("disturbance.frequency"))
        sc.disturbance.frequency = parse_double("disturbance.frequency", *v);

    if (auto v = take("dynamics.kind")) {
        if (*v == "none") sc.fdyn.kind = FdynConfig::Kind::None;
        else if (*v == "viscous") sc.fdyn.kind = FdynConfig::Kind::Viscous;
        else throw ConfigError("dynamics.kind: unknown value '" + *v + "'");
    }
    if (auto v = take("dynamics.c_true")) sc.fdyn.c_true = parse_vec3("dynamics.c_true", *v);
    if (auto v = take("dynamics.c_nom")) sc.fdyn.c_nom = parse_vec3("dynamics.c_nom", *v);
    if (auto v = take("dynamics.c_bound")) sc.fdyn.c_bound = parse_vec3("dynamics.c_bound", *v);

    if (auto v = take("gains.K")) sc.gains.K = parse_vec3("gains.K", *v);
    if (auto v = take("gains.Phi")) sc.gains.Phi = parse_vec3("gains.Phi", *v);
    if (auto v = take("gains.eta")) sc.gains.eta = parse_vec3("gains.eta", *v);
    if (auto v = take("gains.Kp")) sc.gains.Kp = parse_vec3("gains.Kp", *v);
    if (auto v = take("gains.Kd")) sc.gains.Kd = parse_vec3("gains.Kd", *v);

    if (auto v = take("adapt.psi")) {
        if (*v == "logdet") sc.adapt.psi = PsiKind::LogDet;
        else if (*v == "quadratic") sc.adapt.psi = PsiKind::Quadratic;
        else throw ConfigError("adapt.psi: unknown value '" + *v + "'");
    }
    if (auto v = take("adapt.gamma")) sc.adapt.gamma = parse_double("adapt.gamma", *v);
    if (auto v = take("adapt.a0")) sc.adapt.a0 = parse_vec6("adapt.a0", *v);

    if (auto v = take("flip.time")) sc.flip_time = parse_double("flip.time", *v);

    if (auto v = take("metrics.settle_threshold"))
        sc.metrics.settle_threshold = parse_double("metrics.settle_threshold", *v);
    if (auto v = take("metrics.switch_gate"))
        sc.metrics.switch_gate = parse_double("metrics.switch_gate", *v);

    if (auto v = take("log.max_rows")) {
        const double raw = parse_double("log.max_rows", *v);
        if (raw < 1 || raw != std::floor(raw)) {
            throw ConfigError("log.max_rows must be a positive integer");
        }
        sc.max_log_rows = static_cast<long>(raw);
    }

    if (!kv.empty()) {
        throw ConfigError("unknown key '" + kv.begin()->first + "'");
    }

    if (traj_kind == "constant") {
        sc.trajectory = TrajectorySpec::constant_attitude(traj_q);
    } else if (traj_kind == "slew") {
        sc.trajectory = TrajectorySpec::slew(traj_q, traj_axis, traj_rate);
    } else if (traj_kind == "sinusoid") {
        try {
            sc.trajectory = TrajectorySpec::sinusoid(traj_q, traj_axis, traj_amplitude,
                                                     traj_frequency);
        } catch (const InvalidArgumentError& e) {
            throw ConfigError(std::string("trajectory: ") + e.what());
        }
    } else {
        throw ConfigError("trajectory.kind: unknown value '" + traj_kind + "'");
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scenario file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

namespace {

const char* controller_tag(ControllerKind c) {
    switch (c) {
        case ControllerKind::Pd: return "pd";
        case ControllerKind::Robust: return "robust";
        case ControllerKind::Adaptive: return "adaptive";
        case ControllerKind::Baseline: return "baseline";
        case ControllerKind::KinematicManifold: return "kinematic";
    }
    return "unknown";
}

const char* sliding_tag(SlidingKind k) {
    switch (k) {
        case SlidingKind::Proposed: return "proposed";
        case SlidingKind::LegacyLo: return "legacy_lo";
        case SlidingKind::StandardSgn: return "standard_sgn";
        case SlidingKind::So3: return "so3";
    }
    return "unknown";
}

} // namespace

Scenario pointing_flip_scenario(ControllerKind controller, SlidingKind sliding) {
    const double r = 1.0 / std::sqrt(2.0);
    Scenario sc;
    sc.name = std::string("pointing_flip_") + controller_tag(controller) + "_" +
              sliding_tag(sliding);
    sc.controller = controller;
    sc.sliding = sliding;
    sc.q0 = UnitQuaternion(0.0, 1.0, 0.0, 0.0);
    sc.trajectory = TrajectorySpec::constant_attitude(UnitQuaternion(r, 0.0, -r, 0.0));
    // The initial error scalar part is exactly zero with error vector
    // (r, 0, -r). Starting on the sliding manifold plus the disturbance
    // vector gives d(qe0)/dt = +1 at t = 0 for every controller, so the
    // branch commitment out of the boundary is deterministic, and the
    // sliding value starts at (0.2, -0.2, 0.2) instead of at rest.
    const Vec3 qe_vec(r, 0.0, -r);
    const Vec3 offset(0.2, -0.2, 0.2);
    sc.omega0 = -sc.sliding_cfg.lambda * qe_vec + offset;
    sc.inertia.nominal << 10, 10, 10, 0, 0, 0;
    sc.inertia.true_params = sc.inertia.nominal;
    sc.disturbance.kind = DisturbanceConfig::Kind::Constant;
    sc.disturbance.value = offset;
    sc.dt = 1e-3;
    sc.duration = 10.0;
    sc.flip_time = 7.0;
    // Steady state sits at |qe_vec| ~ 0.035 under this disturbance, so the
    // settled band is wider than the default.
    sc.metrics.settle_threshold = 0.05;
    return sc;
}

Scenario uncertain_inertia_scenario(ControllerKind controller) {
    const double r = 1.0 / std::sqrt(2.0);
    Scenario sc;
    sc.name = std::string("uncertain_inertia_") + controller_tag(controller);
    sc.controller = controller;
    sc.sliding = SlidingKind::Proposed;
    // Rest-to-rest 90 degree slew about body y, the axis where the true
    // inertia is lighter than the nominal model. A nominal feedforward
    // overdrives a lighter plant, so this axis separates the controllers
    // most clearly: the fixed-model loop rings while adaptation removes the
    // overshoot within the first transient.
    sc.q0 = UnitQuaternion();
    sc.trajectory = TrajectorySpec::constant_attitude(UnitQuaternion(r, 0.0, -r, 0.0));
    sc.omega0 = Vec3::Zero();
    sc.inertia.nominal << 10, 10, 10, 0, 0, 0;
    sc.inertia.true_params << 13, 8, 14, 0, 0, 0;
    sc.inertia.bound << 3, 2, 4, 0, 0, 0;
    sc.dt = 1e-3;
    sc.duration = 20.0;

    if (controller == ControllerKind::Robust) {
        const Mat3 j_bound = param_matrix(sc.inertia.bound);
        const Vec3 s0_abs(0.0, 2.0 * r, 0.0);
        sc.gains.K = envelope_robust_gain(s0_abs, j_bound, Vec3::Zero(), Vec3::Zero(),
                                          sc.gains.eta, sc.sliding_cfg.lambda);
    }
    return sc;
}

Vec3 envelope_robust_gain(const Vec3& s0_abs_max, const Mat3& j_bound, const Vec3& f_bound,
                          const Vec3& d_bound, const Vec3& eta, double lambda) {
    if (j_bound.minCoeff() < 0.0 || f_bound.minCoeff() < 0.0 || d_bound.minCoeff() < 0.0 ||
        eta.minCoeff() < 0.0 || s0_abs_max.minCoeff() < 0.0 || !(lambda > 0.0)) {
        throw InvalidArgumentError("envelope inputs must be nonnegative with positive lambda");
    }
    // Worst-case rate magnitude along the run, for a rest target: the sliding
    // value can grow by at most the square root of the true-inertia condition
    // number (bounded by 1.5 here) before re-entering, and |omega| <= |s| +
    // lambda |qe_vec| with |qe_vec| <= 1.
    const double omega_env = 1.5 * (s0_abs_max.norm() + lambda);
    // Elementwise: |[w]x| has off-diagonal entries bounded by omega_env, and
    // |w_i| <= omega_env, so |[w]x| Jb |w| <= omega_env^2 (ones - I) Jb 1.
    const Mat3 offdiag = Mat3::Ones() - Mat3::Identity();
    const Vec3 gyro_env = omega_env * omega_env * (offdiag * (j_bound * Vec3::Ones()));
    // |d(qe_vec)/dt| <= |omega|/2 elementwise for a rest target.
    const Vec3 accel_env = j_bound * Vec3::Constant(lambda * omega_env / 2.0);
    return gyro_env + accel_env + f_bound + d_bound + eta;
}

} // namespace qsc
