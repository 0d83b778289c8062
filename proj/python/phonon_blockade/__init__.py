"""Phonon blockade simulator: steady states, g2(0) and analytic limits."""

from ._core import (
    AmplitudeSet,
    PhononError,
    SystemParams,
    Truncation,
    build_heff,
    cooperativity,
    device_preset,
    fidelity,
    figure,
    g2_analytic,
    g2_from_amplitudes,
    g2_resonant,
    g2_two_phonon_resonance,
    g2_zero,
    liouvillian,
    solve,
    solve_steady_state,
    steady_amplitudes,
    thermal_occupation,
    validate,
)

__all__ = [
    "AmplitudeSet",
    "PhononError",
    "SystemParams",
    "Truncation",
    "build_heff",
    "cooperativity",
    "device_preset",
    "fidelity",
    "figure",
    "g2_analytic",
    "g2_from_amplitudes",
    "g2_resonant",
    "g2_two_phonon_resonance",
    "g2_zero",
    "liouvillian",
    "solve",
    "solve_steady_state",
    "steady_amplitudes",
    "thermal_occupation",
    "validate",
]
