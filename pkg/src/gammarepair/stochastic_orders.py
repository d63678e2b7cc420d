"""Stochastic-order checks between marginal laws of the two repair models.

Integral criteria use the stop-loss transform ``pi(x) = E[(X - x)^+]``:

* ``X <=icx Y``  iff  ``pi_Y(x) - pi_X(x) >= 0`` for all x >= 0;
* ``X <=icv Y``  iff  ``int_0^x F_X - int_0^x F_Y >= 0`` for all x >= 0,
  where ``int_0^x F = x - E + pi(x)``.

Each check returns an :class:`OrderVerdict` carrying the evidence curve, so
a verdict can always be re-plotted or audited.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distributions import Distribution, ExactGamma
from .errors import ConsistencyError, DomainError
from .gamma_core import GammaDistribution, PowerLaw, ShapeFunction
from .repair_models import RepairProcessSpec, RepairType, marginal, mean_at, repairs_before, variance_at

GRID_POINTS = 400
UPPER_LEVEL = 1.0 - 1e-8
SIGN_TOL = 1e-9
COND_POINTS = 200


class Relation(str, enum.Enum):
    LessThan = "LessThan"
    GreaterThan = "GreaterThan"
    NotComparable = "NotComparable"
    Equal = "Equal"

    def flipped(self) -> "Relation":
        return {Relation.LessThan: Relation.GreaterThan, Relation.GreaterThan: Relation.LessThan}.get(self, self)


class Order(str, enum.Enum):
    sto = "sto"
    lr = "lr"
    lc = "lc"
    icx = "icx"
    icv = "icv"
    cx = "cx"
    cv = "cv"


@dataclass
class OrderVerdict:
    """``lhs <order> rhs`` holds in the direction given by ``relation``.

    ``values`` is the signed criterion on ``grid``: non-negative everywhere
    means ``lhs`` is smaller.
    """

    order: Order
    relation: Relation
    grid: np.ndarray = field(default_factory=lambda: np.zeros(0))
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    crossings: list = field(default_factory=list)
    lhs: str = "A"
    rhs: str = "B"
    source: str = "numeric"
    note: str = ""

    def swapped(self) -> "OrderVerdict":
        return OrderVerdict(
            self.order, self.relation.flipped(), self.grid, -np.asarray(self.values), list(self.crossings),
            self.rhs, self.lhs, self.source, self.note,
        )

    def to_dict(self, with_curve: bool = True) -> dict:
        d = {
            "order": self.order.value,
            "relation": self.relation.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "source": self.source,
            "crossings": [float(c) for c in self.crossings],
        }
        if self.note:
            d["note"] = self.note
        if with_curve:
            d["grid"] = [float(v) for v in self.grid]
            d["values"] = [float(v) for v in self.values]
        return d

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "value"])
            for x, v in zip(self.grid, self.values):
                w.writerow([repr(float(x)), repr(float(v))])


# --------------------------------------------------------------------------
# Sign analysis
# --------------------------------------------------------------------------


def _classify(values: np.ndarray, tol: float) -> Relation:
    if np.all(np.abs(values) <= tol):
        return Relation.Equal
    if np.all(values >= -tol):
        return Relation.LessThan
    if np.all(values <= tol):
        return Relation.GreaterThan
    return Relation.NotComparable


def sign_crossings(grid: np.ndarray, values: np.ndarray, tol: float) -> list[float]:
    """Abscissae where the curve changes sign, ignoring values within ``tol`` of 0."""
    sig = np.flatnonzero(np.abs(values) > tol)
    out = []
    for i, j in zip(sig[:-1], sig[1:]):
        if np.sign(values[i]) != np.sign(values[j]):
            x0, x1, y0, y1 = grid[i], grid[j], values[i], values[j]
            out.append(float(x0 - y0 * (x1 - x0) / (y1 - y0)))
    return out


def _verdict(order, grid, values, tol, lhs, rhs, source="numeric", note="") -> OrderVerdict:
    values = np.asarray(values, dtype=float)
    return OrderVerdict(
        Order(order), _classify(values, tol), np.asarray(grid, dtype=float), values,
        sign_crossings(np.asarray(grid), values, tol), lhs, rhs, source, note,
    )


def default_grid(dA: Distribution, dB: Distribution, n: int = GRID_POINTS) -> np.ndarray:
    """``n`` points from 0 to the upper ``1 - 1e-8`` quantile of the heavier law."""
    hi = max(dA.quantile(UPPER_LEVEL), dB.quantile(UPPER_LEVEL))
    if hi <= 0:
        return np.zeros(1)
    return np.linspace(0.0, hi, n)


def sign_tolerance(dA: Distribution, dB: Distribution) -> float:
    return SIGN_TOL * (1.0 + abs(dA.mean) + abs(dB.mean))


# --------------------------------------------------------------------------
# Analytic gamma criteria
# --------------------------------------------------------------------------


def _gamma_pair_lessthan(a1, b1, a2, b2):
    lr = a1 <= a2 and b1 >= b2
    icx = a1 >= a2 and a1 / b1 <= a2 / b2
    icv = a1 <= a2 and b1 <= b2 and a1 / b1 <= a2 / b2
    return {Order.lr: lr, Order.icx: icx, Order.icv: icv}


def gamma_order(d1: GammaDistribution, d2: GammaDistribution, lhs: str = "A", rhs: str = "B") -> list[OrderVerdict]:
    """Verdicts implied by the sufficient conditions for gamma pairs.

    Only orders whose conditions hold (in either direction) are returned.
    """
    a1, b1, a2, b2 = d1.shape_a, d1.rate_b, d2.shape_a, d2.rate_b
    if a1 == a2 and b1 == b2:
        return [OrderVerdict(o, Relation.Equal, lhs=lhs, rhs=rhs, source="analytic") for o in Order]
    fwd = _gamma_pair_lessthan(a1, b1, a2, b2)
    bwd = _gamma_pair_lessthan(a2, b2, a1, b1)
    out = []
    for o in (Order.lr, Order.icx, Order.icv):
        if fwd[o]:
            out.append(OrderVerdict(o, Relation.LessThan, lhs=lhs, rhs=rhs, source="analytic"))
        elif bwd[o]:
            out.append(OrderVerdict(o, Relation.GreaterThan, lhs=lhs, rhs=rhs, source="analytic"))
    return out


# --------------------------------------------------------------------------
# Integral criteria
# --------------------------------------------------------------------------


def icx_curve(dA: Distribution, dB: Distribution, x_grid=None, lhs: str = "A", rhs: str = "B") -> OrderVerdict:
    """``D(x) = int_x^inf Fbar_B - int_x^inf Fbar_A``; ``A <=icx B`` iff D >= 0."""
    grid = default_grid(dA, dB) if x_grid is None else np.asarray(x_grid, dtype=float)
    if not (math.isfinite(dA.mean) and math.isfinite(dB.mean)):
        raise DomainError("icx criterion needs finite means")
    values = np.asarray(dB.stop_loss(grid)) - np.asarray(dA.stop_loss(grid))
    return _verdict(Order.icx, grid, values, sign_tolerance(dA, dB), lhs, rhs)


def icv_curve(dA: Distribution, dB: Distribution, x_grid=None, lhs: str = "A", rhs: str = "B") -> OrderVerdict:
    """``D(x) = int_0^x F_A - int_0^x F_B``; ``A <=icv B`` iff D >= 0."""
    grid = default_grid(dA, dB) if x_grid is None else np.asarray(x_grid, dtype=float)
    if not (math.isfinite(dA.mean) and math.isfinite(dB.mean)):
        raise DomainError("icv criterion needs finite means")
    values = (dB.mean - dA.mean) + np.asarray(dA.stop_loss(grid)) - np.asarray(dB.stop_loss(grid))
    return _verdict(Order.icv, grid, values, sign_tolerance(dA, dB), lhs, rhs)


def sto_curve(dA: Distribution, dB: Distribution, x_grid=None, lhs: str = "A", rhs: str = "B") -> OrderVerdict:
    """``D(x) = F_A - F_B``; ``A <=st B`` iff D >= 0."""
    grid = default_grid(dA, dB) if x_grid is None else np.asarray(x_grid, dtype=float)
    values = np.asarray(dA.cdf(grid)) - np.asarray(dB.cdf(grid))
    return _verdict(Order.sto, grid, values, 1e-8, lhs, rhs)


def _with_equal_means(v: OrderVerdict, order: Order, dA: Distribution, dB: Distribution) -> OrderVerdict:
    same_mean = abs(dA.mean - dB.mean) <= sign_tolerance(dA, dB)
    rel = v.relation if same_mean else Relation.NotComparable
    note = "" if same_mean else "means differ"
    return OrderVerdict(order, rel, v.grid, v.values, v.crossings, v.lhs, v.rhs, v.source, note)


def cx_curve(dA: Distribution, dB: Distribution, x_grid=None, lhs: str = "A", rhs: str = "B") -> OrderVerdict:
    """Convex order: the icx criterion plus equal means."""
    return _with_equal_means(icx_curve(dA, dB, x_grid, lhs, rhs), Order.cx, dA, dB)


def cv_curve(dA: Distribution, dB: Distribution, x_grid=None, lhs: str = "A", rhs: str = "B") -> OrderVerdict:
    """Concave order: the icv criterion plus equal means."""
    return _with_equal_means(icv_curve(dA, dB, x_grid, lhs, rhs), Order.cv, dA, dB)


# --------------------------------------------------------------------------
# Scenarios
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonScenario:
    """An ARD1 system (efficiency rho1) against an ARA1 system (efficiency rho2)."""

    spec_ard: RepairProcessSpec
    spec_ara: RepairProcessSpec

    def __post_init__(self):
        a, z = self.spec_ard, self.spec_ara
        if a.repair is not RepairType.ARD1 or z.repair is not RepairType.ARA1:
            raise DomainError("scenario needs an ARD1 and an ARA1 spec")
        if a.shape != z.shape or a.rate_b != z.rate_b or a.period_T != z.period_T:
            raise DomainError("scenario specs must share shape, rate_b and period_T")

    @classmethod
    def build(cls, shape: ShapeFunction, rate_b: float, period_T: float, rho1: float, rho2: float):
        return cls(
            RepairProcessSpec(shape, rate_b, RepairType.ARD1, rho1, period_T),
            RepairProcessSpec(shape, rate_b, RepairType.ARA1, rho2, period_T),
        )

    @property
    def shape(self) -> ShapeFunction:
        return self.spec_ard.shape

    @property
    def rho1(self) -> float:
        return self.spec_ard.rho

    @property
    def rho2(self) -> float:
        return self.spec_ara.rho

    @property
    def T(self) -> float:
        return self.spec_ard.period_T

    @property
    def b(self) -> float:
        return self.spec_ard.rate_b

    def laws(self, t: float):
        return marginal(self.spec_ard, t), marginal(self.spec_ara, t)

    def to_dict(self) -> dict:
        return {
            "shape": self.shape.to_dict(),
            "rate_b": self.b,
            "period_T": self.T,
            "rho1": self.rho1,
            "rho2": self.rho2,
        }


def _check_interval(scenario: ComparisonScenario, n: int, t: float):
    T = scenario.T
    if not (n * T - 1e-9 * max(1.0, T) <= t < (n + 1) * T):
        raise DomainError(f"need nT <= t < (n+1)T, got n={n}, t={t}")


def increment_shapes(scenario: ComparisonScenario, n: int, t: float) -> tuple[float, float]:
    """Shapes of the within-period increments ``Y_t - Y_nT`` and ``Z_t - Z_nT``."""
    _check_interval(scenario, n, t)
    A, T, r2 = scenario.shape, scenario.T, scenario.rho2
    dy = float(A(t) - A(n * T))
    dz = float(A(t - r2 * n * T) - A((1.0 - r2) * n * T))
    return dy, dz


def lr_lc_increment_compare(scenario: ComparisonScenario, n: int, t: float) -> tuple[OrderVerdict, OrderVerdict]:
    """Compare the two within-period increments, both gamma with the same rate.

    Returns ``(lr verdict of Z-inc vs Y-inc, lc verdict of Y-inc vs Z-inc)``.
    At equal rates a smaller shape is lr-smaller, and the log density ratio
    has derivative ``(dy - dz) / y``, which is decreasing iff dy > dz.
    """
    dy, dz = increment_shapes(scenario, n, t)
    scale = 1e-12 * max(1.0, abs(dy), abs(dz))
    if abs(dy - dz) <= scale:
        rel = Relation.Equal
    else:
        rel = Relation.LessThan if dz < dy else Relation.GreaterThan
    note = f"shape(Y-inc)={dy!r}, shape(Z-inc)={dz!r}"
    lr = OrderVerdict(Order.lr, rel, lhs="Z-inc", rhs="Y-inc", source="analytic", note=note)
    lc = OrderVerdict(Order.lc, rel, lhs="Y-inc", rhs="Z-inc", source="analytic", note=note)
    return lr, lc


def log_density_ratio(dY: Distribution, dZ: Distribution, x_grid) -> np.ndarray:
    return np.asarray(dY.logpdf(x_grid)) - np.asarray(dZ.logpdf(x_grid))


def lc_full_compare(scenario: ComparisonScenario, n: int, t: float, x_grid=None) -> OrderVerdict:
    """Log-concave order between ``Y_t`` and ``Z_t`` from ``log(f_Y / f_Z)``.

    The evidence curve is minus the second difference of the log ratio
    (placed at interior grid points), so non-negative values mean
    ``f_Y / f_Z`` is log-concave, i.e. ``Y <=lc Z``.
    """
    _check_interval(scenario, n, t)
    dY, dZ = scenario.laws(t)
    if x_grid is None:
        hi = max(dY.quantile(UPPER_LEVEL), dZ.quantile(UPPER_LEVEL))
        x_grid = np.linspace(hi / GRID_POINTS, hi, GRID_POINTS)
    x = np.asarray(x_grid, dtype=float)
    with np.errstate(all="ignore"):
        r = log_density_ratio(dY, dZ, x)
    ok = np.isfinite(r)
    note = ""
    if not ok.all():
        idx = np.flatnonzero(ok)
        lo, hi = (idx[0], idx[-1]) if idx.size else (0, -1)
        x, r = x[lo : hi + 1], r[lo : hi + 1]
        note = "restricted grid: density evaluation failed outside [%r, %r]" % (float(x[0]), float(x[-1])) if x.size else "no finite density values"
    if x.size < 3:
        return OrderVerdict(Order.lc, Relation.NotComparable, lhs="Y", rhs="Z", note=note or "grid too short")
    h1 = x[1:-1] - x[:-2]
    h2 = x[2:] - x[1:-1]
    second = 2.0 * (h2 * r[:-2] - (h1 + h2) * r[1:-1] + h1 * r[2:]) / (h1 * h2 * (h1 + h2))
    values = -second
    # rounding noise of the log densities, amplified by the second difference
    tol = 4e-12 * (1.0 + np.max(np.abs(r))) / np.min(h1 * h2)
    return _verdict(Order.lc, x[1:-1], values, tol, "Y", "Z", note=note)


# --------------------------------------------------------------------------
# Moment dominance
# --------------------------------------------------------------------------


class Dominance(str, enum.Enum):
    ZgeY = "ZgeY"
    YgeZ = "YgeZ"
    Equal = "Equal"
    Neither = "Neither"


@dataclass
class MomentDominance:
    result: Dominance
    source: str
    condition_z_ge_y: bool
    condition_y_ge_z: bool
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "result": self.result.value,
            "source": self.source,
            "condition_z_ge_y": self.condition_z_ge_y,
            "condition_y_ge_z": self.condition_y_ge_z,
            "witnesses": {k: float(v) for k, v in self.witnesses.items()},
        }


def condition_grid(T: float, n: int = COND_POINTS) -> np.ndarray:
    return np.geomspace(T / 100.0, 100.0 * T, n)


def _condition(shape: ShapeFunction, rho1: float, rho2: float, power: int, T: float) -> tuple[bool, bool]:
    """``A((1-rho2) t) >= (<=) (1-rho1)^power A(t)`` for all t > 0."""
    c = (1.0 - rho1) ** power
    if isinstance(shape, PowerLaw):
        lhs = (1.0 - rho2) ** shape.beta
        return lhs >= c, lhs <= c
    t = condition_grid(T)
    with np.errstate(over="ignore", invalid="ignore"):
        left = shape((1.0 - rho2) * t)
        right = c * shape(t)
        d = left - right
    fin = np.isfinite(d)
    tol = 1e-12 * (1.0 + np.abs(np.where(fin, right, 0.0)))
    d = np.where(fin, d, 0.0)
    return bool(np.all(d >= -tol)), bool(np.all(d <= tol))


def _scan(scenario: ComparisonScenario, which: str):
    t = condition_grid(scenario.T)
    f = mean_at if which == "mean" else variance_at
    with np.errstate(over="ignore", invalid="ignore"):
        y = np.asarray(f(scenario.spec_ard, t))
        z = np.asarray(f(scenario.spec_ara, t))
    d = z - y
    fin = np.isfinite(d)
    t, d, y, z = t[fin], d[fin], y[fin], z[fin]
    tol = 1e-12 * (1.0 + np.abs(y) + np.abs(z))
    wit = {}
    pos, neg = np.flatnonzero(d > tol), np.flatnonzero(d < -tol)
    if pos.size:
        wit["Z_gt_Y_at"] = t[pos[np.argmax(d[pos] / (1 + np.abs(y[pos])))]]
    if neg.size:
        wit["Y_gt_Z_at"] = t[neg[np.argmin(d[neg] / (1 + np.abs(y[neg])))]]
    return wit


def _dominance(scenario: ComparisonScenario, power: int, which: str) -> MomentDominance:
    A = scenario.shape
    zy, yz = _condition(A, scenario.rho1, scenario.rho2, power, scenario.T)
    concave, convex = A.concave, A.convex
    exact = isinstance(A, PowerLaw)
    wit = _scan(scenario, which)
    if zy and yz and (concave or convex):
        return MomentDominance(Dominance.Equal, "exact" if exact else "condition", zy, yz, wit)
    if zy and concave:
        return MomentDominance(Dominance.ZgeY, "exact" if exact else "condition", zy, yz, wit)
    if yz and convex:
        return MomentDominance(Dominance.YgeZ, "exact" if exact else "condition", zy, yz, wit)
    if not zy and not yz:
        # the condition is necessary for dominance in either direction
        return MomentDominance(Dominance.Neither, "condition", zy, yz, wit)
    # condition holds but the curvature hypothesis does not: fall back on the scan
    if "Z_gt_Y_at" in wit and "Y_gt_Z_at" in wit:
        return MomentDominance(Dominance.Neither, "scan", zy, yz, wit)
    if "Y_gt_Z_at" not in wit and zy:
        return MomentDominance(Dominance.ZgeY, "scan", zy, yz, wit)
    if "Z_gt_Y_at" not in wit and yz:
        return MomentDominance(Dominance.YgeZ, "scan", zy, yz, wit)
    return MomentDominance(Dominance.Neither, "scan", zy, yz, wit)


def mean_dominance(scenario: ComparisonScenario) -> MomentDominance:
    """Ordering of ``E(Y_t)`` and ``E(Z_t)`` over all t."""
    return _dominance(scenario, 1, "mean")


def variance_dominance(scenario: ComparisonScenario) -> MomentDominance:
    """Ordering of ``Var(Y_t)`` and ``Var(Z_t)`` over all t."""
    return _dominance(scenario, 2, "variance")


def moment_curves(scenario: ComparisonScenario, t_grid) -> dict:
    """Means and variances of both models on a time grid (figure data)."""
    t = np.asarray(t_grid, dtype=float)
    return {
        "t": t,
        "mean_Y": np.asarray(mean_at(scenario.spec_ard, t)),
        "mean_Z": np.asarray(mean_at(scenario.spec_ara, t)),
        "var_Y": np.asarray(variance_at(scenario.spec_ard, t)),
        "var_Z": np.asarray(variance_at(scenario.spec_ara, t)),
    }


# --------------------------------------------------------------------------
# Theorem-level comparison
# --------------------------------------------------------------------------


def theorem_icx_icv(scenario: ComparisonScenario, t: float, x_grid=None) -> list[OrderVerdict]:
    """Orders between ``Y_t`` and ``Z_t`` implied by curvature and the mean condition.

    * concave A and ``A((1-rho2)t) >= (1-rho1)A(t)``: ``Y <=icx Z``;
    * convex A and the reversed condition: ``Z <=icv Y``;
    * when both apply with equal means, also ``Y <=cx Z`` and ``Z <=cv Y``.

    Every implied verdict is recomputed from the integral criterion; a
    disagreement raises :class:`ConsistencyError`. When no hypothesis holds
    the numeric icx and icv verdicts are returned with source ``numeric``.
    """
    A = scenario.shape
    zy, yz = _condition(A, scenario.rho1, scenario.rho2, 1, scenario.T)
    dY, dZ = scenario.laws(t)
    grid = default_grid(dY, dZ) if x_grid is None else np.asarray(x_grid, dtype=float)
    out = []
    implied = False
    if A.concave and zy:
        implied = True
        v = icx_curve(dY, dZ, grid, "Y", "Z")
        if v.relation not in (Relation.LessThan, Relation.Equal):
            raise ConsistencyError(f"hypotheses imply Y <=icx Z at t={t} but the criterion gives {v.relation.value}")
        v.source = "theorem+numeric"
        out.append(v)
    if A.convex and yz:
        implied = True
        v = icv_curve(dZ, dY, grid, "Z", "Y")
        if v.relation not in (Relation.LessThan, Relation.Equal):
            raise ConsistencyError(f"hypotheses imply Z <=icv Y at t={t} but the criterion gives {v.relation.value}")
        v.source = "theorem+numeric"
        out.append(v)
    if A.concave and A.convex and zy and yz:
        for fn, lhs, rhs, a, b in ((cx_curve, "Y", "Z", dY, dZ), (cv_curve, "Z", "Y", dZ, dY)):
            v = fn(a, b, grid, lhs, rhs)
            if v.relation not in (Relation.LessThan, Relation.Equal):
                raise ConsistencyError(f"equal-mean case implies {lhs} <={v.order.value} {rhs} at t={t}")
            v.source = "theorem+numeric"
            out.append(v)
    if not implied:
        out.append(icx_curve(dY, dZ, grid, "Y", "Z"))
        out.append(icv_curve(dZ, dY, grid, "Z", "Y"))
    return out


def repair_time_icx(scenario: ComparisonScenario, n: int) -> tuple[list[OrderVerdict], OrderVerdict]:
    """At ``nT`` both laws are gamma: analytic verdicts and the numeric icx curve."""
    T = scenario.T
    dY, dZ = scenario.laws(n * T)
    ana = gamma_order(dY.gamma, dZ.gamma, "Y", "Z") if isinstance(dY, ExactGamma) and isinstance(dZ, ExactGamma) else []
    return ana, icx_curve(dY, dZ, lhs="Y", rhs="Z")


__all__: Sequence[str] = [
    "Relation",
    "Order",
    "OrderVerdict",
    "ComparisonScenario",
    "Dominance",
    "MomentDominance",
    "gamma_order",
    "icx_curve",
    "icv_curve",
    "sto_curve",
    "cx_curve",
    "cv_curve",
    "sign_crossings",
    "default_grid",
    "increment_shapes",
    "lr_lc_increment_compare",
    "lc_full_compare",
    "log_density_ratio",
    "mean_dominance",
    "variance_dominance",
    "moment_curves",
    "theorem_icx_icv",
    "repair_time_icx",
]
