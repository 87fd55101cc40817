"""Fractional optimal control of a COVID-19 SEIR model.

Thin Python layer over the C++ core: the Caputo predictor-corrector
integrator, the SEIR model, the forward-backward sweep and the scenario
runner that backs the ``fracocp`` command-line tool.
"""

from ._core import (
    AdjointMode,
    ModelParams,
    ObjectiveWeights,
    SweepConfig,
    SweepSolution,
    abm_weights,
    fbsm_solve,
    integrate_adjoint_tvp,
    integrate_caputo_ivp,
    l1_caputo_derivative,
    lanczos_gamma,
    mittag_leffler,
    objective,
    parse_config,
    reference_params,
    rhs_adjoint,
    rhs_controlled,
    rhs_uncontrolled,
    run_cli,
    run_scenario,
    stationary_controls,
    total_population,
)

__all__ = [
    "AdjointMode",
    "ModelParams",
    "ObjectiveWeights",
    "SweepConfig",
    "SweepSolution",
    "abm_weights",
    "fbsm_solve",
    "integrate_adjoint_tvp",
    "integrate_caputo_ivp",
    "l1_caputo_derivative",
    "lanczos_gamma",
    "mittag_leffler",
    "objective",
    "parse_config",
    "reference_params",
    "rhs_adjoint",
    "rhs_controlled",
    "rhs_uncontrolled",
    "run_cli",
    "run_scenario",
    "stationary_controls",
    "total_population",
]
