// Acceptance suite: end-to-end behavioral criteria for the closed-loop
// attitude control study. Each criterion prints one [PASS]/[FAIL] line with
// the measured numbers; the process exit code is the number of failures.
#include <qsc/runlog.hpp>
#include <qsc/verify.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

using namespace qsc;

namespace {

int failures = 0;

void report(int index, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] %d. %s | %s\n", pass ? "PASS" : "FAIL", index, label.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

void run_criterion(int index, const std::string& label,
                   const std::function<bool(std::ostringstream&)>& body) {
    std::ostringstream detail;
    detail.precision(6);
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail.str("");
        detail << "exception: " << e.what();
    }
    report(index, label, pass, detail.str());
}

double settling(const Scenario& sc) {
    return compute_metrics(run_scenario(sc)).settling_time;
}

} // namespace

int main() {
    run_criterion(1, "on-manifold error decay: exact rate identity, monotone error",
                  [](std::ostringstream& detail) {
        std::mt19937_64 rng(0xAC1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst_residual = 0.0;
        long violations = 0;
        for (int n = 0; n < 100; ++n) {
            Vec4 raw;
            do {
                for (int i = 0; i < 4; ++i) raw[i] = u(rng);
            } while (raw.norm() < 0.1);
            raw /= raw.norm();

            Scenario sc;
            sc.controller = ControllerKind::KinematicManifold;
            sc.q0 = UnitQuaternion(raw);
            sc.duration = 6.0;

            double prev = std::numeric_limits<double>::infinity();
            run_scenario(sc, [&](const StepSample& smp) {
                worst_residual = std::max(
                    worst_residual,
                    manifold_decay_residual(smp.q_e, sc.sliding_cfg.lambda));
                const double err = smp.q_e.vec().norm();
                if (std::isfinite(prev) && prev > 1e-8 && !(err < prev)) ++violations;
                prev = err;
            });
        }
        detail << "max rate residual " << worst_residual << " (limit 1e-10), "
               << violations << " monotonicity violations over 100 starts";
        return worst_residual < 1e-10 && violations == 0;
    });

    run_criterion(2, "steady sliding value stays inside the disturbance bound",
                  [](std::ostringstream& detail) {
        const Scenario sc = pointing_flip_scenario(ControllerKind::Pd, SlidingKind::Proposed);
        double smax = 0.0;
        run_scenario(sc, [&](const StepSample& smp) {
            if (smp.t >= 8.0) smax = std::max(smax, smp.s.cwiseAbs().maxCoeff());
        });
        detail << "max |s_i| over the last 2 s: " << smax << " (limit 0.048)";
        return smax <= 0.048;
    });

    run_criterion(3, "closed-sign variable never unwinds; sign-zero variable does",
                  [](std::ostringstream& detail) {
        const RunLog proposed = run_scenario(
            pointing_flip_scenario(ControllerKind::Pd, SlidingKind::Proposed));
        const Metrics mp = compute_metrics(proposed);
        const RunLog standard = run_scenario(
            pointing_flip_scenario(ControllerKind::Pd, SlidingKind::StandardSgn));
        const Metrics ms = compute_metrics(standard);
        detail << "closed-sign: switches " << mp.switch_count << ", travel ratio "
               << mp.unwinding_ratio << " (need 0 and <= 1.2); sign-zero: switches "
               << ms.switch_count << ", travel ratio " << ms.unwinding_ratio
               << " (need >= 1 and >= 1.5)";
        const bool proposed_ok = mp.switch_count == 0 && mp.unwinding_ratio <= 1.2;
        const bool standard_ok = ms.switch_count >= 1 && ms.unwinding_ratio >= 1.5;
        return proposed_ok && standard_ok;
    });

    run_criterion(4, "settles faster than the vector-part legacy variable",
                  [](std::ostringstream& detail) {
        const double t_proposed =
            settling(pointing_flip_scenario(ControllerKind::Pd, SlidingKind::Proposed));
        const double t_legacy =
            settling(pointing_flip_scenario(ControllerKind::Pd, SlidingKind::LegacyLo));
        detail << "settling " << t_proposed << " s vs legacy " << t_legacy << " s";
        return t_proposed < t_legacy;
    });

    run_criterion(5, "boundary layer captured within 5 s and never exited, 20 inertia draws",
                  [](std::ostringstream& detail) {
        double worst_hit = 0.0;
        long total_exits = 0;
        bool any_deficit = false;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            Scenario sc = uncertain_inertia_scenario(ControllerKind::Robust);
            sc.inertia.draw = InertiaConfig::Draw::SeededDiagonal;
            sc.seed = seed;
            const RunLog log = run_scenario(sc);
            worst_hit = std::max(worst_hit, log.acc.bl_hit_time);
            total_exits += log.acc.bl_exit_count;
            any_deficit = any_deficit || log.acc.any_gain_deficit;
        }
        detail << "worst capture time " << worst_hit << " s (limit 5), exits "
               << total_exits << ", gain deficit " << (any_deficit ? "yes" : "no");
        return worst_hit <= 5.0 && total_exits == 0 && !any_deficit;
    });

    run_criterion(6, "adaptive run: energy never increases, estimate stays physical",
                  [](std::ostringstream& detail) {
        const Scenario sc = uncertain_inertia_scenario(ControllerKind::Adaptive);
        const ResolvedModels models = resolve_models(sc);
        const PsiFunction psi = PsiFunction::logdet();
        const Mat3 j_true = models.inertia.j_true();

        double prev_v = 0.0;
        bool have_prev = false;
        double max_dv = -std::numeric_limits<double>::infinity();
        double min_eig = std::numeric_limits<double>::infinity();
        Vec3 s_final = Vec3::Zero();
        run_scenario(sc, [&](const StepSample& smp) {
            Eigen::SelfAdjointEigenSolver<Mat3> es(param_matrix(smp.a_hat));
            min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
            const double v = smp.s.dot(j_true * smp.s) +
                             2.0 * bregman_div(psi, models.a_true, smp.a_hat);
            if (have_prev) max_dv = std::max(max_dv, v - prev_v);
            prev_v = v;
            have_prev = true;
            s_final = smp.s;
        });
        detail << "|s| at 20 s: " << s_final.norm() << " (limit 1e-3), min estimate eig "
               << min_eig << ", max per-step energy change " << max_dv
               << " (limit 1e-8)";
        return s_final.norm() < 1e-3 && min_eig > 0.0 && max_dv <= 1e-8;
    });

    run_criterion(7, "study orderings: robust settles first, adaptive beats fixed model",
                  [](std::ostringstream& detail) {
        const Metrics m_rob =
            compute_metrics(run_scenario(uncertain_inertia_scenario(ControllerKind::Robust)));
        const Metrics m_ada =
            compute_metrics(run_scenario(uncertain_inertia_scenario(ControllerKind::Adaptive)));
        const Metrics m_pd =
            compute_metrics(run_scenario(uncertain_inertia_scenario(ControllerKind::Pd)));
        detail << "settling robust " << m_rob.settling_time << " < adaptive "
               << m_ada.settling_time << " < fixed-model " << m_pd.settling_time
               << "; peak torque robust " << m_rob.peak_torque << " > adaptive "
               << m_ada.peak_torque;
        return m_rob.settling_time < m_ada.settling_time &&
               m_ada.settling_time < m_pd.settling_time &&
               m_rob.peak_torque > m_ada.peak_torque;
    });

    run_criterion(8, "torque stays continuous across the branch boundary",
                  [](std::ostringstream& detail) {
        auto max_jump = [](Scenario sc) {
            return run_scenario(sc).acc.max_step_torque_jump;
        };
        Scenario fine = pointing_flip_scenario(ControllerKind::Pd, SlidingKind::Proposed);
        Scenario finer = fine;
        finer.dt = 5e-4;
        const double ratio_sliding = max_jump(fine) / max_jump(finer);

        Scenario base = pointing_flip_scenario(ControllerKind::Baseline, SlidingKind::Proposed);
        Scenario base_finer = base;
        base_finer.dt = 5e-4;
        const double base_jump = max_jump(base);
        const double ratio_base = base_jump / max_jump(base_finer);

        detail << "sliding-law jump halves with dt (ratio " << ratio_sliding
               << ", want [1.6, 2.4]); sign-switching baseline jump " << base_jump
               << " persists (ratio " << ratio_base << ", want [0.9, 1.1])";
        return ratio_sliding >= 1.6 && ratio_sliding <= 2.4 && base_jump > 1.0 &&
               ratio_base >= 0.9 && ratio_base <= 1.1;
    });

    run_criterion(9, "independent oracle suite", [](std::ostringstream& detail) {
        const VerifyReport rep = verify();
        const VerifyCheck* quat = nullptr;
        const VerifyCheck* hess = nullptr;
        const VerifyCheck* regr = nullptr;
        const VerifyCheck* rk4 = nullptr;
        for (const VerifyCheck& c : rep.checks) {
            if (c.name == "quat_rotation_composition") quat = &c;
            if (c.name == "logdet_hessian_fd") hess = &c;
            if (c.name == "regressor_identity") regr = &c;
            if (c.name == "rk4_order") rk4 = &c;
        }
        if (!quat || !hess || !regr || !rk4) {
            detail << "missing checks in the report";
            return false;
        }
        detail << "rotation composition " << quat->value << " (< 1e-12), Hessian fd "
               << hess->value << " (< 1e-6), regressor " << regr->value
               << " (< 1e-12), integrator order factor " << rk4->value << " (in [8, 32])";
        return rep.all_pass() && quat->value < 1e-12 && hess->value < 1e-6 &&
               regr->value < 1e-12 && rk4->value >= 8.0 && rk4->value <= 32.0;
    });

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criterion(s) failed\n", failures);
    }
    return failures;
}
