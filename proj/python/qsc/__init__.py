"""Quaternion sliding-mode attitude control.

Thin wrapper over the compiled core. The quaternion type keeps q and -q
distinct; nothing in this package ever canonicalizes the sign.
"""

from ._core import (
    ConfigError,
    SingularityError,
    UnitQuaternion,
    conjugate,
    error_quaternion,
    from_axis_angle,
    matrix_params,
    omega_r,
    param_matrix,
    qe_vec_rate,
    qmul,
    regressor,
    s_proposed,
    sgn_plus,
    simulate_config,
    simulate_config_to_csv,
    to_rotation,
    verify_report,
)

__all__ = [
    "ConfigError",
    "SingularityError",
    "UnitQuaternion",
    "conjugate",
    "error_quaternion",
    "from_axis_angle",
    "matrix_params",
    "omega_r",
    "param_matrix",
    "qe_vec_rate",
    "qmul",
    "regressor",
    "s_proposed",
    "sgn_plus",
    "simulate_config",
    "simulate_config_to_csv",
    "to_rotation",
    "verify_report",
]
