"""Porous-alumina capacitive humidity sensor simulator."""

from ._core import (
    ConfigError,
    DataError,
    DomainError,
    FitError,
    KelvinParameters,
    Sweep,
    UsageError,
    bet_finite,
    bet_infinite,
    bet_linear_fit,
    bet_transform,
    c_factor,
    default_config,
    effective_permittivity,
    film_thickness,
    fit,
    kelvin_radius,
    kelvin_rh,
    layer_capacitance,
    morphology_exponent,
    parse_path,
    rh_sweep,
    temperature_sweep,
)

__version__ = "0.1.0"
