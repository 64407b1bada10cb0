#pragma once

#include <qsc/quat.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qsc {

struct VerifyOptions {
    std::uint64_t seed = 0x5eedULL;
    // Test hook: added to the analytic log-det Hessian before comparison so
    // the finite-difference check can be shown to catch a wrong Hessian.
    double hessian_perturbation = 0.0;
};

struct VerifyCheck {
    std::string name;
    double value = 0;     // residual, or the convergence factor for the order check
    double lo = 0;        // acceptance interval [lo, hi] for value
    double hi = 0;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass() const;
};

// Cross-implementation oracle suite:
//   - quaternion product against rotation-matrix composition
//   - log-det Hessian against central finite differences of the gradient
//   - regressor identity Y^T a = J(a) w_r_dot + w x (J(a) w) against dense
//     matrix arithmetic
//   - integrator order: terminal-error ratio when dt is halved
//   - on-manifold decay identity for the proposed sliding variable
VerifyReport verify(const VerifyOptions& opts = {});

// Residual of the decay identity at one state: with the feedback rate set to
// omega_e = -lambda sgn_plus(qe0) qe_vec, the derivative of |qe_vec|^2 in the
// design algebra equals -2 lambda |qe0| |qe_vec|^2 exactly; this returns the
// absolute difference of the two sides.
double manifold_decay_residual(const UnitQuaternion& q_e, double lambda);

std::string to_json(const VerifyReport& report);

} // namespace qsc
