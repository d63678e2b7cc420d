"""Gamma-process degradation under imperfect repairs (ARD1 / ARA1).

Submodules: ``gamma_core`` (gamma laws, shapes, sampling), ``repair_models``
(maintained processes), ``stochastic_orders`` (ARD1 vs ARA1 comparisons),
``equivalent_case`` (power-law moment matching), ``policies`` ((n,T) and
(M,T) maintenance optimization) and ``cli``.
"""

from .errors import ConfigError, ConsistencyError, DomainError, InsufficientSampleError, UnsupportedShapeError
from .gamma_core import ExpGrowth, ExpSaturating, GammaDistribution, Linear, PowerLaw, Sum, Tabulated
from .repair_models import RepairProcessSpec, RepairType, marginal, mean_at, simulate, variance_at
from .rng import RngStream

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConsistencyError",
    "DomainError",
    "InsufficientSampleError",
    "UnsupportedShapeError",
    "ExpGrowth",
    "ExpSaturating",
    "GammaDistribution",
    "Linear",
    "PowerLaw",
    "Sum",
    "Tabulated",
    "RepairProcessSpec",
    "RepairType",
    "marginal",
    "mean_at",
    "simulate",
    "variance_at",
    "RngStream",
]
