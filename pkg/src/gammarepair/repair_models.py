"""ARD1 and ARA1 imperfect repairs on a non-homogeneous gamma process.

Both models repair periodically at ``T, 2T, ...`` with efficiency ``rho``.

* ARD1 removes the fraction ``rho`` of the deterioration accumulated since
  the previous repair.
* ARA1 removes the fraction ``rho`` of the virtual age accumulated since the
  previous repair: on ``[nT, (n+1)T)`` the virtual age is ``t - rho n T`` and
  the system degrades along its own law from there.

Values at a repair time ``nT`` are post-repair; the pre-repair value is the
left limit and is available through ``left_limit=True``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distributions import Distribution, ExactGamma, GammaConvolution
from .errors import DomainError, InsufficientSampleError
from .gamma_core import GammaDistribution, ShapeFunction, shape_from_dict, standard_gamma
from .rng import RngStream, as_stream, parallel_map

GRID_TOL = 1e-9
BLOCK = 8192


class RepairType(str, enum.Enum):
    ARD1 = "ARD1"
    ARA1 = "ARA1"


@dataclass(frozen=True)
class RepairProcessSpec:
    """A periodically maintained gamma-deteriorating system."""

    shape: ShapeFunction
    rate_b: float
    repair: RepairType
    rho: float
    period_T: float

    def __post_init__(self):
        object.__setattr__(self, "repair", RepairType(self.repair))
        if not (self.rate_b > 0 and math.isfinite(self.rate_b)):
            raise DomainError("rate_b must be positive")
        if not 0.0 < self.rho < 1.0:
            raise DomainError("rho must lie in (0, 1)")
        if not (self.period_T > 0 and math.isfinite(self.period_T)):
            raise DomainError("period_T must be positive")

    def with_(self, **changes) -> "RepairProcessSpec":
        d = dict(shape=self.shape, rate_b=self.rate_b, repair=self.repair, rho=self.rho, period_T=self.period_T)
        d.update(changes)
        return RepairProcessSpec(**d)

    def to_dict(self) -> dict:
        return {
            "shape": self.shape.to_dict(),
            "rate_b": self.rate_b,
            "repair": self.repair.value,
            "rho": self.rho,
            "period_T": self.period_T,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RepairProcessSpec":
        return cls(
            shape=shape_from_dict(d["shape"]),
            rate_b=float(d["rate_b"]),
            repair=RepairType(d["repair"]),
            rho=float(d["rho"]),
            period_T=float(d["period_T"]),
        )


def repairs_before(t, T: float, left_limit: bool = False) -> np.ndarray:
    """Number of repairs n in effect at time t (``t = nT`` counts as repaired)."""
    t = np.asarray(t, dtype=float)
    n = np.floor(t / T + GRID_TOL)
    if left_limit:
        on_epoch = (n >= 1) & (np.abs(t - n * T) <= GRID_TOL * max(1.0, T))
        n = np.where(on_epoch, n - 1, n)
    return n


def virtual_age(spec: RepairProcessSpec, t, left_limit: bool = False):
    t = np.asarray(t, dtype=float)
    if spec.repair is RepairType.ARD1:
        return t
    n = repairs_before(t, spec.period_T, left_limit)
    return np.maximum(t - spec.rho * n * spec.period_T, 0.0)


# --------------------------------------------------------------------------
# Closed forms
# --------------------------------------------------------------------------


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    return t


def _moment_shapes(spec: RepairProcessSpec, t, left_limit: bool):
    t = _check_time(t)
    A = spec.shape
    n = repairs_before(t, spec.period_T, left_limit)
    if spec.repair is RepairType.ARA1:
        a = A(np.maximum(t - spec.rho * n * spec.period_T, 0.0))
        return a, a
    At, An = A(t), A(n * spec.period_T)
    rho = spec.rho
    return At - rho * An, At - rho * (2.0 - rho) * An


def _ret(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


def mean_at(spec: RepairProcessSpec, t, left_limit: bool = False):
    """Expected deterioration level at time t."""
    m, _ = _moment_shapes(spec, t, left_limit)
    return _ret(m / spec.rate_b)


def variance_at(spec: RepairProcessSpec, t, left_limit: bool = False):
    """Variance of the deterioration level at time t."""
    _, v = _moment_shapes(spec, t, left_limit)
    return _ret(v / spec.rate_b**2)


def marginal(spec: RepairProcessSpec, t: float, left_limit: bool = False) -> Distribution:
    """Exact law of the deterioration level at time t."""
    t = float(_check_time(t))
    A, b, T, rho = spec.shape, spec.rate_b, spec.period_T, spec.rho
    n = int(repairs_before(t, T, left_limit))
    if spec.repair is RepairType.ARA1:
        return ExactGamma(GammaDistribution(float(A(max(t - rho * n * T, 0.0))), b))
    if n == 0:
        return ExactGamma(GammaDistribution(float(A(t)), b))
    a_rep = float(A(n * T))
    first = GammaDistribution(a_rep, b / (1.0 - rho))
    rest = float(A(t)) - a_rep
    if abs(t - n * T) <= GRID_TOL * max(1.0, T) or rest <= 0.0:
        return ExactGamma(first)
    return GammaConvolution(first, GammaDistribution(rest, b))


def sample_marginal(spec: RepairProcessSpec, t: float, size: int, rng: RngStream, left_limit: bool = False):
    """Draws of the level at time t straight from its marginal law."""
    d = marginal(spec, t, left_limit)
    return d.sample(rng, size)


# --------------------------------------------------------------------------
# Path simulation
# --------------------------------------------------------------------------


@dataclass
class MaintainedTrajectory:
    """One simulated path on a time grid.

    ``levels`` and ``virtual_ages`` are post-repair at repair epochs;
    ``pre_repair_levels[k]`` is the left limit at ``times[repair_epochs[k]]``.
    """

    times: np.ndarray
    levels: np.ndarray
    virtual_ages: np.ndarray
    repair_epochs: np.ndarray
    pre_repair_levels: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_csv(self, path) -> None:
        is_rep = np.zeros(self.times.size, dtype=int)
        is_rep[self.repair_epochs] = 1
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time", "level", "virtual_age", "is_repair_epoch"])
            for row in zip(self.times, self.levels, self.virtual_ages, is_rep):
                w.writerow([repr(float(row[0])), repr(float(row[1])), repr(float(row[2])), int(row[3])])


def time_grid(horizon: float, dt: float, T: float) -> tuple[np.ndarray, np.ndarray]:
    """Union of the dt-steps, the repair times kT and the horizon.

    Points within ``GRID_TOL`` of a repair time are snapped onto it.
    Returns the grid and the indices of the repair epochs (kT, k >= 1).
    """
    tol = GRID_TOL * max(1.0, T)
    n_rep = int(math.floor(horizon / T + GRID_TOL))
    reps = T * np.arange(1, n_rep + 1)
    steps = dt * np.arange(0, int(math.floor(horizon / dt + GRID_TOL)) + 1)
    pts = np.concatenate([steps, reps, [horizon]])
    pts = pts[pts <= horizon + tol]
    if reps.size:
        near = np.abs(pts[:, None] - reps[None, :]) <= tol
        hit = near.any(axis=1)
        pts[hit] = reps[near[hit].argmax(axis=1)]
    pts = np.unique(pts)
    keep = np.concatenate([[True], np.diff(pts) > tol])
    pts = pts[keep]
    epochs = np.searchsorted(pts, reps - tol)
    return pts, epochs


def _bridge(rng: RngStream, lo, hi, a1: float, a2: float):
    """Level at an interior point of a step, given both endpoint levels."""
    if a1 <= 0.0:
        return lo.copy()
    if a2 <= 0.0:
        return hi.copy()
    g1 = standard_gamma(a1, rng, lo.size)
    g2 = standard_gamma(a2, rng, lo.size)
    s = g1 + g2
    frac = np.divide(g1, s, out=np.full(lo.size, a1 / (a1 + a2)), where=s > 0)
    return lo + frac * (hi - lo)


def _simulate_block(spec: RepairProcessSpec, grid: np.ndarray, epochs: np.ndarray, n_paths: int, rng: RngStream):
    A, b, T, rho = spec.shape, spec.rate_b, spec.period_T, spec.rho
    tol = GRID_TOL * max(1.0, T)
    m = grid.size
    levels = np.zeros((n_paths, m))
    pre = np.zeros((n_paths, epochs.size))
    n_of = repairs_before(grid, T)
    # virtual ages used for the increment over (grid[k], grid[k+1]): left-limit age at the right end
    n_step = repairs_before(grid[1:], T, left_limit=True)
    if spec.repair is RepairType.ARA1:
        v_left = grid[:-1] - rho * n_step * T
        v_right = grid[1:] - rho * n_step * T
        vages = grid - rho * n_of * T
    else:
        v_left, v_right = grid[:-1], grid[1:]
        vages = grid.copy()
    dA = np.maximum(A(v_right) - A(v_left), 0.0)

    epoch_of = {int(e): i for i, e in enumerate(epochs)}
    cur = np.zeros(n_paths)
    last_rep = np.zeros(n_paths)
    period_start = 0
    for k in range(m - 1):
        if dA[k] > 0:
            cur = cur + standard_gamma(float(dA[k]), rng, n_paths) / b
        j = k + 1
        if j in epoch_of:
            i = epoch_of[j]
            pre[:, i] = cur
            if spec.repair is RepairType.ARD1:
                cur = last_rep + (1.0 - rho) * (cur - last_rep)
            else:
                # restore the level the current period's path had at calendar offset (1 - rho) T
                tau = grid[j] - rho * T
                p = int(np.searchsorted(grid, tau - tol))
                if abs(grid[p] - tau) <= tol:
                    cur = levels[:, p].copy() if p < j else cur
                else:
                    lo_k = p - 1
                    lo_lvl = levels[:, lo_k]
                    hi_lvl = levels[:, p] if p < j else cur
                    n_p = n_step[lo_k]
                    va = grid[lo_k] - rho * n_p * T
                    vb = tau - rho * n_p * T
                    vc = grid[p] - rho * n_p * T
                    cur = _bridge(rng, lo_lvl, hi_lvl, float(A(vb) - A(va)), float(A(vc) - A(vb)))
            last_rep = cur
            period_start = j
        levels[:, j] = cur
    return levels, pre, vages


def simulate_many(
    spec: RepairProcessSpec,
    horizon: float,
    dt: float,
    n_paths: int,
    rng: RngStream | int | None = None,
    threads: int = 1,
    block: int = BLOCK,
):
    """Simulate ``n_paths`` trajectories on a common grid.

    Returns ``(grid, levels, pre_repair_levels, virtual_ages, epochs)``;
    ``levels`` has shape ``(n_paths, grid.size)``. Paths are generated in
    blocks, each on its own stream, so the output is independent of the
    thread count.
    """
    if not horizon > 0:
        raise DomainError("horizon must be positive")
    if not dt > 0 or dt > spec.period_T * (1.0 + GRID_TOL):
        raise DomainError("need 0 < dt <= period_T")
    rng = as_stream(rng)
    grid, epochs = time_grid(horizon, dt, spec.period_T)
    sizes = [min(block, n_paths - s) for s in range(0, n_paths, block)]
    parts = parallel_map(
        lambda ib: _simulate_block(spec, grid, epochs, ib[1], rng.derive("paths", ib[0])),
        list(enumerate(sizes)),
        threads,
    )
    levels = np.concatenate([p[0] for p in parts]) if parts else np.zeros((0, grid.size))
    pre = np.concatenate([p[1] for p in parts]) if parts else np.zeros((0, epochs.size))
    vages = parts[0][2] if parts else grid
    return grid, levels, pre, vages, epochs


def simulate(spec: RepairProcessSpec, horizon: float, dt: float, rng: RngStream | int | None = None) -> MaintainedTrajectory:
    """One maintained trajectory, exact in distribution at the grid points."""
    grid, levels, pre, vages, epochs = simulate_many(spec, horizon, dt, 1, rng)
    return MaintainedTrajectory(grid, levels[0], vages, epochs, pre[0])


# --------------------------------------------------------------------------
# Conditional mean
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Estimate:
    value: float
    std_error: float
    n_used: int = 0


def conditional_mean_above(
    spec: RepairProcessSpec,
    t: float,
    h: float,
    n_reps: int,
    rng: RngStream | int | None = None,
    threads: int = 1,
    min_exceedances: int = 100,
    left_limit: bool = False,
) -> Estimate:
    """Monte-Carlo estimate of ``E[level_t | level_t > h]`` with its standard error."""
    if h < 0:
        raise DomainError("threshold h must be non-negative")
    rng = as_stream(rng)
    sizes = [min(BLOCK * 16, n_reps - s) for s in range(0, n_reps, BLOCK * 16)]

    def run(ib):
        x = sample_marginal(spec, t, ib[1], rng.derive("cond", ib[0]), left_limit)
        x = x[x > h]
        return x.size, float(x.sum()), float((x * x).sum())

    parts = parallel_map(run, list(enumerate(sizes)), threads)
    k = sum(p[0] for p in parts)
    if k < min_exceedances:
        raise InsufficientSampleError(f"only {k} of {n_reps} draws exceed h={h}")
    s1 = sum(p[1] for p in parts)
    s2 = sum(p[2] for p in parts)
    m = s1 / k
    var = max(s2 / k - m * m, 0.0) * k / max(k - 1, 1)
    return Estimate(m, math.sqrt(var / k), k)


__all__: Sequence[str] = [
    "RepairType",
    "RepairProcessSpec",
    "MaintainedTrajectory",
    "Estimate",
    "repairs_before",
    "virtual_age",
    "mean_at",
    "variance_at",
    "marginal",
    "sample_marginal",
    "time_grid",
    "simulate",
    "simulate_many",
    "conditional_mean_above",
]
