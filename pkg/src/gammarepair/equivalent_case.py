"""The equivalent case for power-law shapes ``A(t) = alpha t^beta``.

Choosing ``1 - rho1 = (1 - rho2)^beta`` makes the ARD1 and ARA1 expected
levels coincide at every repair time. Between repairs the two models still
differ; for beta > 1 the variance ordering switches inside early periods,
which :func:`variance_crossing` locates.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DomainError, UnsupportedShapeError
from .gamma_core import PowerLaw, ShapeFunction
from .repair_models import repairs_before
from .stochastic_orders import (
    ComparisonScenario,
    OrderVerdict,
    Relation,
    cv_curve,
    cx_curve,
    default_grid,
    icv_curve,
    icx_curve,
    sign_tolerance,
)

LEFT_OF_TWO = 2.0 - 1e-12
ROOT_TOL = 1e-12


def _check_rho(rho2: float):
    if not 0.0 < rho2 < 1.0:
        raise DomainError("rho2 must lie in (0, 1)")


def equivalent_rho1(rho2: float, beta, shape: ShapeFunction | None = None) -> float:
    """ARD1 efficiency matching an ARA1 efficiency ``rho2`` at repair times.

    Passing a ``shape`` other than :class:`PowerLaw` raises
    :class:`UnsupportedShapeError`: outside the power-law family the
    matching condition has no solution in general.
    """
    if shape is not None:
        if not isinstance(shape, PowerLaw):
            raise UnsupportedShapeError("rho matching is only defined for power-law shapes")
        beta = shape.beta
    _check_rho(rho2)
    if not beta > 0:
        raise DomainError("beta must be positive")
    return 1.0 - (1.0 - rho2) ** beta


def equivalent_scenario(beta: float, rho2: float, T: float = 1.0, alpha: float = 1.0, b: float = 1.0) -> ComparisonScenario:
    return ComparisonScenario.build(PowerLaw(alpha, beta), b, T, equivalent_rho1(rho2, beta), rho2)


def g_function(x, beta: float, rho2: float):
    """``g(x) = x^beta - (x - rho2)^beta - (1 - (1 - rho2)^(2 beta))``; its sign on [1, 2) orders the variances."""
    x = np.asarray(x, dtype=float)
    v = x**beta - (x - rho2) ** beta - (1.0 - (1.0 - rho2) ** (2.0 * beta))
    return float(v) if v.ndim == 0 else v


@dataclass
class CrossingReport:
    """Where ``Var(Y_t) <= Var(Z_t)`` may fail in the equivalent case with beta > 1.

    ``intervals`` lists ``(n, switch_time)`` for each ``n < 1/(x* - 1)``:
    the inequality holds on ``[nT, switch_time)`` and is reversed on
    ``[switch_time, (n+1)T)``.
    """

    beta: float
    rho2: float
    rho1: float
    T: float
    g_at_two: float
    x_star: float | None = None
    t_star: float | None = None
    n_star: int | None = None
    intervals: list = field(default_factory=list)

    @property
    def variance_ordered_everywhere(self) -> bool:
        return self.x_star is None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["intervals"] = [{"n": n, "switch_time": s} for n, s in self.intervals]
        d["variance_ordered_everywhere"] = self.variance_ordered_everywhere
        return d

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)


def bisect_root(f, lo: float, hi: float, tol: float = ROOT_TOL, max_iter: int = 200) -> float:
    """Root of an increasing function with ``f(lo) <= 0 < f(hi)``."""
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def variance_crossing(beta: float, rho2: float, T: float = 1.0) -> CrossingReport:
    """Variance ordering between the models in the equivalent case, beta > 1."""
    if not beta > 1.0:
        raise DomainError(
            "variance crossing analysis needs beta > 1; for beta <= 1 Var(Z_t) >= Var(Y_t) holds for all t"
        )
    _check_rho(rho2)
    if not T > 0:
        raise DomainError("T must be positive")
    rho1 = equivalent_rho1(rho2, beta)
    g2 = g_function(LEFT_OF_TWO, beta, rho2)
    rep = CrossingReport(beta, rho2, rho1, T, g2)
    if g2 <= 0:
        return rep
    x_star = bisect_root(lambda x: g_function(x, beta, rho2), 1.0, LEFT_OF_TWO)
    k = 1.0 / (x_star - 1.0)
    n_star = int(math.ceil(k))
    rep.x_star = x_star
    rep.n_star = n_star
    rep.t_star = n_star * T
    rep.intervals = [(n, x_star * n * T) for n in range(1, n_star) if n < k]
    return rep


def equivalent_case_orders(beta: float, rho2: float, T: float, t: float, alpha: float = 1.0, b: float = 1.0) -> list[OrderVerdict]:
    """Orders between ``Y_t`` and ``Z_t`` in the equivalent case, each checked numerically.

    * beta <= 1: ``Y <=icx Z``; beta >= 1: ``Z <=icv Y``;
    * whenever the means coincide (repair times, or beta = 1): ``Y <=cx Z`` and ``Z <=cv Y``.
    """
    sc = equivalent_scenario(beta, rho2, T, alpha, b)
    dY, dZ = sc.laws(t)
    grid = default_grid(dY, dZ)
    expected = []
    if beta <= 1.0:
        expected.append(icx_curve(dY, dZ, grid, "Y", "Z"))
    if beta >= 1.0:
        expected.append(icv_curve(dZ, dY, grid, "Z", "Y"))
    n = int(repairs_before(t, T))
    on_repair = n >= 1 and abs(t - n * T) <= 1e-9 * max(1.0, T)
    if on_repair or beta == 1.0 or abs(dY.mean - dZ.mean) <= sign_tolerance(dY, dZ):
        expected.append(cx_curve(dY, dZ, grid, "Y", "Z"))
        expected.append(cv_curve(dZ, dY, grid, "Z", "Y"))
    for v in expected:
        if v.relation not in (Relation.LessThan, Relation.Equal):
            raise ConsistencyError(
                f"equivalent case implies {v.lhs} <={v.order.value} {v.rhs} at t={t}, criterion gives {v.relation.value}"
            )
        v.source = "theorem+numeric"
    return expected


__all__: Sequence[str] = [
    "equivalent_rho1",
    "equivalent_scenario",
    "g_function",
    "CrossingReport",
    "variance_crossing",
    "equivalent_case_orders",
    "bisect_root",
]
