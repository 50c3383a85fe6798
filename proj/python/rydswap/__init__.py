"""Pulse-level simulator of Rydberg SWAP and controlled-SWAP gates."""

from ._rydswap import (  # noqa: F401
    ConfigError,
    GateParams,
    ModelError,
    calibrate_swap_time,
    dark_state,
    doppler_sigma,
    effective_params,
    list_presets,
    monte_carlo_fidelity,
    predict_phases,
    process_fidelity,
    rotation_fidelity,
    run_gate,
    run_scenario,
    swap_time_estimate,
    table1_params,
    variants,
)

__all__ = [name for name in dir() if not name.startswith("_")]
