"""Decay rates of an emitter near a dielectric plate.

First-order Born volume integrals for finite plates, reflection-coefficient
references for infinite slabs and stationary-phase approximations, backed by
a C++ core.
"""

from ._core import (
    ConfigError,
    ConvergenceError,
    DomainError,
    FresnelPair,
    GeometryError,
    Orientation,
    RateResult,
    __version__,
    decay_rate,
    fresnel_cs,
    preset_config,
    preset_names,
    run_config,
    selftest,
    slab_rate,
    slab_rate_linearized,
    spa_rate_parallel,
    spa_rate_parallel_infinite,
    to_csv,
    vacuum_green,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "FresnelPair",
    "GeometryError",
    "Orientation",
    "RateResult",
    "__version__",
    "decay_rate",
    "fresnel_cs",
    "preset_config",
    "preset_names",
    "run_config",
    "selftest",
    "slab_rate",
    "slab_rate_linearized",
    "spa_rate_parallel",
    "spa_rate_parallel_infinite",
    "to_csv",
    "vacuum_green",
]
