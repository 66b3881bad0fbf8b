"""Photon kinetics of a laser beam in a turbulent atmosphere.

Thin Python layer over the C++ core: beam/spectrum parameters, saturated
closed forms, the quadrature tier, fluctuation statistics, beam wandering,
and the kinetic Monte-Carlo simulator.
"""

from ._turbeam import (
    BeamParams,
    ConfigError,
    CorrelationDecomposition,
    InitialWidthMode,
    McConfig,
    McEstimate,
    McRecord,
    Moments,
    NumericalError,
    RadialHistogram,
    RegimeError,
    SimulationError,
    SpectrumModel,
    WanderPart,
    WanderReport,
    collision_alpha,
    collision_nu,
    correlation,
    correlation_classical_quadrature,
    mean_intensity,
    mean_pdf_asymptotic,
    mean_pdf_exact,
    moments,
    r1_squared,
    scintillation_index,
    shot_kernel,
    simulate_photons,
    suppression_factor,
    suppression_ratio_exact,
    wander_crossover_time,
    wander_quadrature,
    wander_report,
)

__all__ = [
    "BeamParams",
    "ConfigError",
    "CorrelationDecomposition",
    "InitialWidthMode",
    "McConfig",
    "McEstimate",
    "McRecord",
    "Moments",
    "NumericalError",
    "RadialHistogram",
    "RegimeError",
    "SimulationError",
    "SpectrumModel",
    "WanderPart",
    "WanderReport",
    "collision_alpha",
    "collision_nu",
    "correlation",
    "correlation_classical_quadrature",
    "mean_intensity",
    "mean_pdf_asymptotic",
    "mean_pdf_exact",
    "moments",
    "r1_squared",
    "scintillation_index",
    "shot_kernel",
    "simulate_photons",
    "suppression_factor",
    "suppression_ratio_exact",
    "wander_crossover_time",
    "wander_quadrature",
    "wander_report",
]
