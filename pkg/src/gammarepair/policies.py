"""Reward function and the (n,T) and (M,T) maintenance policies.

The reward per unit time at deterioration level x is piecewise exponential,

    g(x) = b1 - k1 exp(alpha1 x)   for x <= c,
    g(x) = b2 - k2 exp(alpha2 x)   for x > c,

with b2 fixed by continuity at c. ``g`` is concave, decreasing and changes
sign at ``L = ln(b2 / k2) / alpha2``.

Long-run profit rates follow from the renewal reward theorem. The (n,T)
rate integrates ``E[g(level_s)]`` over one cycle by composite Simpson; the
(M,T) rate simulates whole renewal cycles and reports a ratio of means.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .distributions import Distribution, ExactGamma, GammaConvolution
from .errors import ConfigError, DomainError
from .gamma_core import GammaDistribution, regularized_gamma_p, regularized_gamma_q, standard_gamma
from .quadrature import simpson_weights
from .repair_models import (
    Estimate,
    RepairProcessSpec,
    RepairType,
    _bridge,
    marginal,
    sample_marginal,
    simulate_many,
)
from .rng import RngStream, parallel_map

SCHEMA_VERSION = 1


# --------------------------------------------------------------------------
# Reward and costs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RewardSpec:
    """Piecewise-exponential reward ``g`` with derived ``b2`` and critical level ``L``."""

    alpha1: float
    alpha2: float
    k1: float
    k2: float
    b1: float
    c: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "k1", "k2", "b1", "c"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive")
        if self.alpha1 > self.alpha2 or self.k1 > self.k2:
            raise DomainError("need alpha1 <= alpha2 and k1 <= k2")
        if self.b1 - self.k1 * math.exp(self.alpha1 * self.c) <= 0:
            raise DomainError("reward must be positive on [0, c): need b1 > k1 exp(alpha1 c)")

    @property
    def b2(self) -> float:
        return self.b1 - self.k1 * math.exp(self.alpha1 * self.c) + self.k2 * math.exp(self.alpha2 * self.c)

    @property
    def L(self) -> float:
        return math.log(self.b2 / self.k2) / self.alpha2

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        low = x <= self.c
        out = np.empty(x.shape)
        out[low] = self.b1 - self.k1 * np.exp(self.alpha1 * x[low])
        hi = ~low
        with np.errstate(over="ignore"):
            out[hi] = self.b2 - self.k2 * np.exp(self.alpha2 * x[hi])
        return float(out) if out.ndim == 0 else out

    def _shifted_gamma(self, u, a: float, b: float):
        """``E[g(u + V)]`` for ``V ~ Gamma(a, b)``, vectorized over the shift u."""
        u = np.asarray(u, dtype=float)
        if b <= self.alpha2:
            raise DomainError("E[g] is infinite when the gamma rate does not exceed alpha2")
        if a == 0:
            return np.asarray(self(u))
        m1 = (b / (b - self.alpha1)) ** a
        m2 = (b / (b - self.alpha2)) ** a
        cr = np.maximum(self.c - u, 0.0)
        p0 = regularized_gamma_p(a, b * cr)
        p1 = regularized_gamma_p(a, (b - self.alpha1) * cr)
        q2 = regularized_gamma_q(a, (b - self.alpha2) * cr)
        with np.errstate(over="ignore", invalid="ignore"):
            out = (
                self.b1 * p0
                - self.k1 * np.exp(self.alpha1 * u) * m1 * p1
                + self.b2 * (1.0 - p0)
                - self.k2 * np.exp(self.alpha2 * u) * m2 * q2
            )
        return out

    def expected(self, dist: Distribution, tol: float = 1e-10) -> float:
        """``E[g(X)]`` in closed form (exact gamma) or by one quadrature (convolution)."""
        if isinstance(dist, ExactGamma):
            return float(self._shifted_gamma(0.0, dist.gamma.shape_a, dist.gamma.rate_b))
        if isinstance(dist, GammaConvolution):
            g2 = dist.g2
            if dist.g1.degenerate:
                return float(self._shifted_gamma(0.0, g2.shape_a, g2.rate_b))
            inner = lambda u, i: self._shifted_gamma(u, g2.shape_a, g2.rate_b)  # noqa: E731
            return float(dist._integrate_against_g1(inner, np.array([dist._q1]), tol)[0])
        raise TypeError(f"no closed form for {type(dist).__name__}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = "piecewise_exp"
        return d


@dataclass(frozen=True)
class ConstantReward:
    """``g = kappa`` everywhere; a test double with a known policy rate."""

    kappa: float

    @property
    def L(self) -> float:
        return math.inf

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        v = np.full(x.shape, float(self.kappa))
        return float(v) if v.ndim == 0 else v

    def expected(self, dist: Distribution, tol: float = 1e-10) -> float:
        return float(self.kappa)

    def to_dict(self) -> dict:
        return {"kind": "constant", "kappa": self.kappa}


def reward_from_dict(d: dict):
    d = dict(d)
    kind = d.pop("kind", "piecewise_exp")
    if kind == "constant":
        return ConstantReward(float(d["kappa"]))
    if kind != "piecewise_exp":
        raise ConfigError(f"unknown reward kind {kind!r}")
    d.pop("b2", None)
    d.pop("L", None)
    return RewardSpec(**{k: float(v) for k, v in d.items()})


def reward_eval(r: RewardSpec, x):
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise DomainError("reward level must be non-negative")
    return r(x)


@dataclass(frozen=True)
class CostSpec:
    repair_cost: float = 0.0
    replacement_cost: float = 0.0
    preventive_cost: float = 0.0
    corrective_cost: float = 0.0

    def __post_init__(self):
        for k, v in asdict(self).items():
            if not (v >= 0 and math.isfinite(v)):
                raise DomainError(f"{k} must be a non-negative number")
        if self.preventive_cost > self.corrective_cost:
            warnings.warn("preventive replacement costs more than corrective replacement", stacklevel=2)

    def to_dict(self) -> dict:
        return asdict(self)


# --------------------------------------------------------------------------
# Results
# --------------------------------------------------------------------------


def _argmax(rates: np.ndarray, axis1, axis2) -> tuple[int, int]:
    """Maximum cell; ties go to the smaller axis1 value, then the smaller axis2 value."""
    best = np.nanmax(rates)
    cand = np.argwhere(rates == best)
    key = [(axis1[i], axis2[j]) for i, j in cand]
    i, j = cand[min(range(len(cand)), key=lambda k: key[k])]
    return int(i), int(j)


@dataclass
class PolicyResult:
    """Profit-rate surface over ``axis1 x axis2`` for one repair model."""

    policy: str
    model: str
    axis1_name: str
    axis2_name: str
    axis1: np.ndarray
    axis2: np.ndarray
    rates: np.ndarray
    std_errors: np.ndarray
    n_replications: int
    seed: int
    argmax: tuple = field(init=False)

    def __post_init__(self):
        self.axis1 = np.asarray(self.axis1, dtype=float)
        self.axis2 = np.asarray(self.axis2, dtype=float)
        self.rates = np.asarray(self.rates, dtype=float)
        self.std_errors = np.asarray(self.std_errors, dtype=float)
        if self.rates.shape != (self.axis1.size, self.axis2.size) or self.std_errors.shape != self.rates.shape:
            raise ConfigError("rates and std_errors must match the grid dimensions")
        self.argmax = _argmax(self.rates, self.axis1, self.axis2)

    @property
    def best(self) -> tuple[float, float, float, float]:
        i, j = self.argmax
        return float(self.axis1[i]), float(self.axis2[j]), float(self.rates[i, j]), float(self.std_errors[i, j])

    def at(self, a1: float, a2: float, tol: float = 1e-3) -> tuple[float, float]:
        i = int(np.argmin(np.abs(self.axis1 - a1)))
        j = int(np.argmin(np.abs(self.axis2 - a2)))
        if abs(self.axis1[i] - a1) > tol or abs(self.axis2[j] - a2) > tol:
            raise KeyError(f"({a1}, {a2}) is not a grid cell")
        return float(self.rates[i, j]), float(self.std_errors[i, j])

    def to_dict(self, with_surface: bool = False) -> dict:
        a1, a2, rate, se = self.best
        d = {
            "schema_version": SCHEMA_VERSION,
            "policy": self.policy,
            "model": self.model,
            "argmax": {self.axis1_name: a1, self.axis2_name: a2, "index": list(self.argmax)},
            "rate": rate,
            "se": se,
            "n_replications": self.n_replications,
            "seed": self.seed,
        }
        if with_surface:
            d["axis1"] = self.axis1.tolist()
            d["axis2"] = self.axis2.tolist()
            d["rates"] = self.rates.tolist()
            d["std_errors"] = self.std_errors.tolist()
        return d

    def to_csv(self, path) -> None:
        write_surface_csv(path, self.axis1, self.axis2, self.rates, self.std_errors)


def write_surface_csv(path, axis1, axis2, rates, ses) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["axis1", "axis2", "rate", "se"])
        for i, a in enumerate(axis1):
            for j, b in enumerate(axis2):
                w.writerow([repr(float(a)), repr(float(b)), repr(float(rates[i, j])), repr(float(ses[i, j]))])


def difference_surface(r_ard: PolicyResult, r_ara: PolicyResult) -> tuple[np.ndarray, np.ndarray]:
    """``rate_ARD - rate_ARA`` and its joint standard error (independent estimates)."""
    d = r_ard.rates - r_ara.rates
    se = np.sqrt(r_ard.std_errors**2 + r_ara.std_errors**2)
    return d, se


# --------------------------------------------------------------------------
# (n,T) policy
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NTConfig:
    """Monte-Carlo settings for the (n,T) policy.

    ``method``: ``nodewise`` draws fresh replications at every Simpson node,
    ``pathwise`` integrates along simulated paths, ``exact`` replaces the
    Monte-Carlo node values by ``E[g]`` computed from the marginal law.
    """

    n_reps: int = 20_000
    simpson_intervals: int = 20
    seed: int = 0
    method: str = "nodewise"

    def __post_init__(self):
        if self.simpson_intervals < 2 or self.simpson_intervals % 2:
            raise ConfigError(f"Simpson needs an even number of subintervals, got {self.simpson_intervals}")
        if self.n_reps < 2:
            raise ConfigError("n_reps must be at least 2")
        if self.method not in ("nodewise", "pathwise", "exact"):
            raise ConfigError(f"unknown method {self.method!r}")


def _nt_nodes(n: int, T: float, m: int):
    nodes = np.linspace(0.0, n * T, m + 1)
    return nodes, simpson_weights(m, n * T / m)


def expected_reward_integral(spec: RepairProcessSpec, reward, n: int, T: float, m: int = 20) -> float:
    """Simpson integral of ``E[g(level_s)]`` over ``[0, nT]`` with exact node values."""
    sp = spec.with_(period_T=T)
    nodes, w = _nt_nodes(n, T, m)
    vals = [reward.expected(marginal(sp, s, left_limit=(j == m))) for j, s in enumerate(nodes)]
    return float(w @ np.asarray(vals))


def evaluate_nt(
    spec: RepairProcessSpec,
    reward,
    costs: CostSpec,
    n: int,
    T: float,
    mc: NTConfig = NTConfig(),
) -> Estimate:
    """Long-run profit rate of the (n,T) policy with its Monte-Carlo standard error.

    The system is repaired at ``T, ..., (n-1)T`` and replaced at ``nT``; the
    last Simpson node uses the level just before the replacement. Node
    streams depend on ``(n, T, node)`` only, so ARD1 and ARA1 evaluated with
    the same seed share random numbers.
    """
    if n < 1 or int(n) != n:
        raise DomainError("n must be a positive integer")
    if not T > 0:
        raise DomainError("T must be positive")
    n = int(n)
    m = mc.simpson_intervals
    sp = spec.with_(period_T=T)
    nodes, w = _nt_nodes(n, T, m)
    cost = (n - 1) * costs.repair_cost + costs.replacement_cost
    horizon = n * T
    base = RngStream(mc.seed).derive("nt", n, repr(float(T)))

    if mc.method == "exact":
        integral = expected_reward_integral(spec, reward, n, T, m)
        return Estimate((integral - cost) / horizon, 0.0, 0)

    if mc.method == "pathwise":
        h = horizon / m
        dt = h / math.ceil(h / T - 1e-12)
        grid, levels, pre, _, _ = simulate_many(sp, horizon, dt, mc.n_reps, base.derive("paths"))
        cols = np.searchsorted(grid, nodes - 1e-9 * max(1.0, T))
        lv = levels[:, cols]
        lv[:, -1] = pre[:, -1] if pre.shape[1] else lv[:, -1]
        per_path = np.asarray(reward(lv)) @ w
        mean = float(per_path.mean())
        se = float(per_path.std(ddof=1) / math.sqrt(per_path.size))
        return Estimate((mean - cost) / horizon, se / horizon, mc.n_reps)

    means = np.empty(m + 1)
    vars_ = np.zeros(m + 1)
    for j, s in enumerate(nodes):
        if s == 0.0:
            means[j] = float(reward(0.0))
            continue
        x = sample_marginal(sp, float(s), mc.n_reps, base.derive("node", j), left_limit=(j == m))
        gx = np.asarray(reward(x))
        means[j] = gx.mean()
        vars_[j] = gx.var(ddof=1) / mc.n_reps
    integral = float(w @ means)
    se = math.sqrt(float((w * w) @ vars_))
    return Estimate((integral - cost) / horizon, se / horizon, mc.n_reps)


def _specs_by_model(specs) -> list[RepairProcessSpec]:
    if hasattr(specs, "spec_ard"):
        return [specs.spec_ard, specs.spec_ara]
    if isinstance(specs, RepairProcessSpec):
        return [specs]
    return list(specs)


def optimize_nt(
    specs,
    reward,
    costs: CostSpec,
    n_grid: Sequence[int],
    T_grid: Sequence[float],
    mc: NTConfig = NTConfig(),
    threads: int = 1,
) -> dict[str, PolicyResult]:
    """(n,T) surfaces and argmax cells for each spec (a scenario gives both models)."""
    n_grid = [int(v) for v in n_grid]
    T_grid = [float(v) for v in T_grid]
    if not n_grid or not T_grid:
        raise ConfigError("grids must be non-empty")
    out = {}
    for spec in _specs_by_model(specs):
        cells = [(i, j) for i in range(len(n_grid)) for j in range(len(T_grid))]
        res = parallel_map(lambda c: evaluate_nt(spec, reward, costs, n_grid[c[0]], T_grid[c[1]], mc), cells, threads)
        rates = np.array([r.value for r in res]).reshape(len(n_grid), len(T_grid))
        ses = np.array([r.std_error for r in res]).reshape(len(n_grid), len(T_grid))
        out[spec.repair.value] = PolicyResult("nT", spec.repair.value, "n", "T", n_grid, T_grid, rates, ses, mc.n_reps, mc.seed)
    return out


# --------------------------------------------------------------------------
# (M,T) policy
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MTConfig:
    """Monte-Carlo settings for the (M,T) policy.

    ``clip_negative`` integrates ``max(g, 0)`` instead of ``g`` (the system
    stops earning rather than losing money beyond L). Off by default; it
    exists for sensitivity checks only.
    """

    n_cycles: int = 50_000
    substeps: int = 50
    seed: int = 0
    block: int = 12_500
    max_periods: int = 100_000
    clip_negative: bool = False

    def __post_init__(self):
        if self.n_cycles < 2:
            raise ConfigError("n_cycles must be at least 2")
        if self.substeps < 1:
            raise ConfigError("substeps must be positive")
        if self.block < 1:
            raise ConfigError("block must be positive")


@dataclass(frozen=True)
class CycleSums:
    """Sufficient statistics of a batch of renewal cycles (profit Y, length R)."""

    n: int
    sy: float
    sr: float
    syy: float
    srr: float
    syr: float
    n_corrective: int = 0

    def __add__(self, o: "CycleSums") -> "CycleSums":
        return CycleSums(*(a + b for a, b in zip(astuple_sums(self), astuple_sums(o))))

    def ratio(self) -> Estimate:
        """Ratio of means with a delta-method standard error."""
        n = self.n
        my, mr = self.sy / n, self.sr / n
        r = my / mr
        vy = (self.syy - n * my * my) / (n - 1)
        vr = (self.srr - n * mr * mr) / (n - 1)
        cyr = (self.syr - n * my * mr) / (n - 1)
        var = max(vy - 2.0 * r * cyr + r * r * vr, 0.0) / (n * mr * mr)
        return Estimate(r, math.sqrt(var), n)


def astuple_sums(s: CycleSums):
    return (s.n, s.sy, s.sr, s.syy, s.srr, s.syr, s.n_corrective)


def _check_threshold(M: float, L: float):
    if not M >= 0:
        raise DomainError("M must be non-negative")
    if M > L * (1.0 + 1e-12):
        raise DomainError(f"M={M} exceeds the critical level L={L}")


def simulate_cycles(
    spec: RepairProcessSpec,
    reward,
    costs: CostSpec,
    M: float,
    T: float,
    n_cycles: int,
    rng: RngStream,
    substeps: int = 50,
    max_periods: int = 100_000,
    clip_negative: bool = False,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Simulate renewal cycles of the (M,T) policy.

    Returns per-cycle ``(profit, length, corrective flag)``. Within a
    period the path is sampled on ``substeps`` equal steps and the reward
    is integrated by the trapezoid rule. At each inspection the pre-repair
    level decides: ``<= M`` repair, ``(M, L)`` preventive replacement,
    ``>= L`` corrective replacement.
    """
    A, b, rho, L = spec.shape, spec.rate_b, spec.rho, reward.L
    S = substeps
    h = T / S
    offs = np.arange(S + 1) * h
    profit = np.zeros(n_cycles)
    length = np.zeros(n_cycles)
    corrective = np.zeros(n_cycles, dtype=bool)
    active = np.arange(n_cycles)
    level = np.zeros(n_cycles)
    last_rep = np.zeros(n_cycles)
    tau = (1.0 - rho) * S
    t_idx = int(round(tau))
    on_grid = abs(tau - t_idx) <= 1e-9
    k = 0
    while active.size:
        if k >= max_periods:
            raise RuntimeError("cycle did not terminate within max_periods inspections")
        v0 = (1.0 - rho) * k * T if spec.repair is RepairType.ARA1 else k * T
        a_nodes = A(v0 + offs)
        dA = np.maximum(np.diff(a_nodes), 0.0)
        na = active.size
        path = np.empty((na, S + 1))
        path[:, 0] = level
        if np.all(dA == dA[0]):
            inc = standard_gamma(float(dA[0]), rng, (na, S))
        else:
            inc = standard_gamma(np.broadcast_to(dA, (na, S)), rng, (na, S))
        np.cumsum(inc / b, axis=1, out=path[:, 1:])
        path[:, 1:] += level[:, None]
        gv = np.asarray(reward(path))
        if clip_negative:
            gv = np.maximum(gv, 0.0)
        profit[active] += h * (0.5 * (gv[:, 0] + gv[:, -1]) + gv[:, 1:-1].sum(axis=1))
        pre = path[:, -1]
        corr = pre >= L
        prev = ~corr & (pre > M)
        stop = corr | prev
        done = active[stop]
        length[done] = (k + 1) * T
        corrective[active[corr]] = True
        profit[active[corr]] -= costs.corrective_cost
        profit[active[prev]] -= costs.preventive_cost
        keep = ~stop
        profit[active[keep]] -= costs.repair_cost
        if spec.repair is RepairType.ARD1:
            post = last_rep[keep] + (1.0 - rho) * (pre[keep] - last_rep[keep])
        elif on_grid:
            post = path[keep, t_idx]
        else:
            lo = int(math.floor(tau))
            a1 = float(A(v0 + tau * h) - a_nodes[lo])
            a2 = float(a_nodes[lo + 1] - A(v0 + tau * h))
            post = _bridge(rng, path[keep, lo], path[keep, lo + 1], a1, a2)
        active = active[keep]
        level = post
        last_rep = post.copy()
        k += 1
    return profit, length, corrective


def _cycle_sums(profit, length, corrective) -> CycleSums:
    return CycleSums(
        int(profit.size),
        float(profit.sum()),
        float(length.sum()),
        float((profit * profit).sum()),
        float((length * length).sum()),
        float((profit * length).sum()),
        int(corrective.sum()),
    )


def evaluate_mt(
    spec: RepairProcessSpec,
    reward,
    costs: CostSpec,
    M: float,
    T: float,
    mc: MTConfig = MTConfig(),
    threads: int = 1,
) -> Estimate:
    """Long-run profit rate of the (M,T) policy (ratio of means over renewal cycles).

    ``M`` may equal ``L`` (no preventive zone); ``M > L`` is a domain error.
    Cycle blocks use streams keyed by ``(M, T, block)``, shared between the
    two repair models.
    """
    _check_threshold(M, reward.L)
    if not T > 0:
        raise DomainError("T must be positive")
    return _mt_sums(spec, reward, costs, M, T, mc, threads).ratio()


def _mt_sums(spec, reward, costs, M, T, mc: MTConfig, threads: int = 1) -> CycleSums:
    base = RngStream(mc.seed).derive("mt", repr(float(M)), repr(float(T)))
    sizes = [min(mc.block, mc.n_cycles - s) for s in range(0, mc.n_cycles, mc.block)]

    def run(ib):
        p, l, c = simulate_cycles(spec, reward, costs, M, T, ib[1], base.derive("block", ib[0]), mc.substeps, mc.max_periods, mc.clip_negative)
        return _cycle_sums(p, l, c)

    parts = parallel_map(run, list(enumerate(sizes)), threads)
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


def optimize_mt(
    specs,
    reward,
    costs: CostSpec,
    M_grid: Sequence[float],
    T_grid: Sequence[float],
    mc: MTConfig = MTConfig(),
    threads: int = 1,
) -> dict[str, PolicyResult]:
    """(M,T) surfaces and argmax cells for each spec; axis1 is M, axis2 is T."""
    M_grid = [float(v) for v in M_grid]
    T_grid = [float(v) for v in T_grid]
    if not M_grid or not T_grid:
        raise ConfigError("grids must be non-empty")
    for M in M_grid:
        _check_threshold(M, reward.L)
    out = {}
    for spec in _specs_by_model(specs):
        cells = [(i, j) for i in range(len(M_grid)) for j in range(len(T_grid))]
        res = parallel_map(
            lambda c: _mt_sums(spec, reward, costs, M_grid[c[0]], T_grid[c[1]], mc).ratio(), cells, threads
        )
        rates = np.array([r.value for r in res]).reshape(len(M_grid), len(T_grid))
        ses = np.array([r.std_error for r in res]).reshape(len(M_grid), len(T_grid))
        out[spec.repair.value] = PolicyResult("MT", spec.repair.value, "M", "T", M_grid, T_grid, rates, ses, mc.n_cycles, mc.seed)
    return out


def mt_single_inspection_rate(spec: RepairProcessSpec, reward, costs: CostSpec, T: float, m: int = 200) -> float:
    """Rate of the (M,T) policy with M = 0 when the level at T is a.s. positive.

    Every cycle then ends at the first inspection, so the rate is
    ``(int_0^T E g(level_s) ds - Cp P(level_T < L) - Cc P(level_T >= L)) / T``.
    """
    sp = spec.with_(period_T=T)
    nodes = np.linspace(0.0, T, m + 1)
    w = simpson_weights(m, T / m)
    vals = np.array([reward.expected(marginal(sp, s, left_limit=True)) for s in nodes])
    d = marginal(sp, T, left_limit=True)
    p_corr = float(d.sf(reward.L)) if math.isfinite(reward.L) else 0.0
    return float((w @ vals - costs.preventive_cost * (1.0 - p_corr) - costs.corrective_cost * p_corr) / T)


__all__: Sequence[str] = [
    "SCHEMA_VERSION",
    "RewardSpec",
    "ConstantReward",
    "reward_from_dict",
    "reward_eval",
    "CostSpec",
    "PolicyResult",
    "difference_surface",
    "write_surface_csv",
    "NTConfig",
    "MTConfig",
    "CycleSums",
    "expected_reward_integral",
    "evaluate_nt",
    "optimize_nt",
    "simulate_cycles",
    "evaluate_mt",
    "optimize_mt",
    "mt_single_inspection_rate",
]
