"""Power tower sliding mode control on the perturbed double integrator."""

from ._core import (
    ChatteringReport,
    ConfigError,
    ControlLaw,
    ControlOutput,
    ControllerSpec,
    ConvergenceReport,
    DisturbanceModel,
    DomainError,
    OverflowError,
    SimConfig,
    SimResult,
    SingularityError,
    chattering_index,
    convergence_time,
    evaluate_control,
    fictive_control,
    integral_control,
    lemma1_oracle,
    load_scenario,
    nominal_control,
    preset,
    preset_names,
    pt_derivative_factor,
    pt_value,
    robust_sign_control,
    run,
    run_scenario,
    sign_surrogate,
    terminal_sm_control,
)

__all__ = [name for name in dir() if not name.startswith("_")]
