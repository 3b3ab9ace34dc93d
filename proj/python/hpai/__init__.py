"""Stochastic herd model of avian influenza in dairy cattle."""

from ._core import (
    NumericError,
    ValidationError,
    compartments,
    default_params,
    disease_free_equilibrium,
    drift,
    invasion_number,
    lhs_sample,
    parse_config,
    prcc,
    r0_closed_form,
    r0_spectral,
    run_ensemble,
    sensitivity_r0,
    simulate_ode,
    simulate_sde,
    solve_endemic,
)

__all__ = [
    "NumericError",
    "ValidationError",
    "compartments",
    "default_params",
    "disease_free_equilibrium",
    "drift",
    "invasion_number",
    "lhs_sample",
    "parse_config",
    "prcc",
    "r0_closed_form",
    "r0_spectral",
    "run_ensemble",
    "sensitivity_r0",
    "simulate_ode",
    "simulate_sde",
    "solve_endemic",
]
