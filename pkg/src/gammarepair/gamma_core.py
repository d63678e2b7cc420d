"""Shape functions, gamma-distribution numerics and gamma-process increments.

The gamma law Gamma(a, b) is parameterized by shape ``a`` and *rate* ``b``
(density ``b^a x^(a-1) exp(-b x) / Gamma(a)``). A shape of exactly 0 is
accepted and denotes the point mass at 0, which is what a gamma-process
increment over an empty time interval is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DomainError
from .rng import RngStream

# --------------------------------------------------------------------------
# Shape functions
# --------------------------------------------------------------------------


class ShapeFunction:
    """Non-decreasing, continuous ``A: R+ -> R+`` with ``A(0) = 0``."""

    concave: bool = False
    convex: bool = False

    def _eval(self, t: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0):
            raise DomainError("shape function evaluated at negative time")
        out = self._eval(arr)
        return float(out) if out.ndim == 0 else out

    def to_dict(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class PowerLaw(ShapeFunction):
    """``A(t) = alpha t^beta``."""

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ConfigError("PowerLaw needs alpha > 0 and beta > 0")

    @property
    def concave(self) -> bool:
        return self.beta <= 1.0

    @property
    def convex(self) -> bool:
        return self.beta >= 1.0

    def _eval(self, t):
        return self.alpha * np.power(t, self.beta)

    def to_dict(self):
        return {"kind": "power", "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class Linear(ShapeFunction):
    """``A(t) = a t`` (homogeneous gamma process)."""

    a: float = 1.0
    concave = True
    convex = True

    def __post_init__(self):
        if not self.a > 0:
            raise ConfigError("Linear shape needs a > 0")

    def _eval(self, t):
        return self.a * t

    def to_dict(self):
        return {"kind": "linear", "a": self.a}


@dataclass(frozen=True)
class ExpGrowth(ShapeFunction):
    """``A(t) = exp(t) - 1``."""

    concave = False
    convex = True

    def _eval(self, t):
        return np.expm1(t)

    def to_dict(self):
        return {"kind": "exp_growth"}


@dataclass(frozen=True)
class ExpSaturating(ShapeFunction):
    """``A(t) = 1 - exp(-t)``."""

    concave = True
    convex = False

    def _eval(self, t):
        return -np.expm1(-t)

    def to_dict(self):
        return {"kind": "exp_saturating"}


@dataclass(frozen=True)
class Sum(ShapeFunction):
    terms: tuple = ()

    def __post_init__(self):
        if not self.terms:
            raise ConfigError("Sum shape needs at least one term")
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def concave(self) -> bool:
        return all(s.concave for s in self.terms)

    @property
    def convex(self) -> bool:
        return all(s.convex for s in self.terms)

    def _eval(self, t):
        out = np.zeros_like(t, dtype=float)
        for s in self.terms:
            out = out + s._eval(t)
        return out

    def to_dict(self):
        return {"kind": "sum", "terms": [s.to_dict() for s in self.terms]}


@dataclass(frozen=True)
class Tabulated(ShapeFunction):
    """Piecewise-linear interpolation of ``(times, values)``, linear extrapolation past the end."""

    times: tuple = (0.0, 1.0)
    values: tuple = (0.0, 1.0)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.size < 2 or t.shape != v.shape:
            raise ConfigError("Tabulated shape needs two equal-length lists of at least 2 points")
        if t[0] != 0.0 or v[0] != 0.0:
            raise ConfigError("Tabulated shape must start at (0, 0)")
        if np.any(np.diff(t) <= 0) or np.any(np.diff(v) < 0):
            raise ConfigError("Tabulated shape needs increasing times and non-decreasing values")
        object.__setattr__(self, "times", tuple(t.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))

    def _slopes(self):
        return np.diff(self.values) / np.diff(self.times)

    @property
    def concave(self) -> bool:
        return bool(np.all(np.diff(self._slopes()) <= 0))

    @property
    def convex(self) -> bool:
        return bool(np.all(np.diff(self._slopes()) >= 0))

    def _eval(self, t):
        tt = np.asarray(self.times)
        vv = np.asarray(self.values)
        out = np.interp(t, tt, vv)
        last = self._slopes()[-1]
        return np.where(t > tt[-1], vv[-1] + last * (t - tt[-1]), out)

    def to_dict(self):
        return {"kind": "tabulated", "times": list(self.times), "values": list(self.values)}


def shape_eval(s: ShapeFunction, t):
    """``A(t)``; raises :class:`DomainError` for negative ``t``."""
    return s(t)


def shape_from_dict(d: dict) -> ShapeFunction:
    d = dict(d)
    kind = d.pop("kind", None)
    builders = {
        "power": lambda: PowerLaw(**d),
        "linear": lambda: Linear(**d),
        "exp_growth": lambda: ExpGrowth(**d),
        "exp_saturating": lambda: ExpSaturating(**d),
        "sum": lambda: Sum(tuple(shape_from_dict(x) for x in d.pop("terms")), **d),
        "tabulated": lambda: Tabulated(tuple(d.pop("times")), tuple(d.pop("values")), **d),
    }
    if kind not in builders:
        raise ConfigError(f"unknown shape kind {kind!r}")
    try:
        return builders[kind]()
    except TypeError as exc:
        raise ConfigError(f"bad parameters for shape {kind!r}: {exc}") from None


# --------------------------------------------------------------------------
# Regularized incomplete gamma
# --------------------------------------------------------------------------

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000


def _lgamma(a: np.ndarray) -> np.ndarray:
    uniq, inv = np.unique(a, return_inverse=True)
    vals = np.array([math.lgamma(u) for u in uniq])
    return vals[inv].reshape(a.shape)


def _log_prefactor(a, x):
    # log(x^a e^-x / Gamma(a))
    return a * np.log(x) - x - _lgamma(a)


def _series_p(a, x):
    """P(a, x) by the power series, valid (and used) for x < a + 1."""
    term = 1.0 / a
    total = term.copy()
    ap = a.copy()
    active = np.ones(a.shape, dtype=bool)
    for _ in range(_MAX_ITER):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ap[idx] += 1.0
        term[idx] *= x[idx] / ap[idx]
        total[idx] += term[idx]
        active[idx] = np.abs(term[idx]) > np.abs(total[idx]) * _EPS
    return total * np.exp(_log_prefactor(a, x))


def _contfrac_q(a, x):
    """Q(a, x) by Legendre's continued fraction (modified Lentz), for x >= a + 1."""
    b = x + 1.0 - a
    c = np.full(a.shape, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(a.shape, dtype=bool)
    for i in range(1, _MAX_ITER):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        an = -i * (i - a[idx])
        b[idx] += 2.0
        dd = an * d[idx] + b[idx]
        dd = np.where(np.abs(dd) < _TINY, _TINY, dd)
        cc = b[idx] + an / c[idx]
        cc = np.where(np.abs(cc) < _TINY, _TINY, cc)
        dd = 1.0 / dd
        delta = dd * cc
        d[idx], c[idx] = dd, cc
        h[idx] *= delta
        active[idx] = np.abs(delta - 1.0) > _EPS
    return h * np.exp(_log_prefactor(a, x))


def _incomplete(a, x):
    a, x = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(x, dtype=float))
    p = np.zeros(a.shape)
    q = np.ones(a.shape)
    point_mass = (a == 0) & (x >= 0)
    p[point_mass], q[point_mass] = 1.0, 0.0
    pos = (a > 0) & (x > 0)
    inf = pos & np.isinf(x)
    p[inf], q[inf] = 1.0, 0.0
    pos &= ~inf
    ser = pos & (x < a + 1.0)
    cf = pos & ~ser
    if ser.any():
        p[ser] = np.minimum(_series_p(a[ser], x[ser]), 1.0)
        q[ser] = 1.0 - p[ser]
    if cf.any():
        q[cf] = np.minimum(_contfrac_q(a[cf], x[cf]), 1.0)
        p[cf] = 1.0 - q[cf]
    return p, q


def regularized_gamma_p(a, x):
    """Lower regularized incomplete gamma ``P(a, x)``."""
    p, _ = _incomplete(a, x)
    return p if p.ndim else float(p)


def regularized_gamma_q(a, x):
    """Upper regularized incomplete gamma ``Q(a, x) = 1 - P(a, x)``, without cancellation."""
    _, q = _incomplete(a, x)
    return q if q.ndim else float(q)


# --------------------------------------------------------------------------
# Gamma distribution
# --------------------------------------------------------------------------


def _ret(v):
    v = np.asarray(v)
    return float(v) if v.ndim == 0 else v


@dataclass(frozen=True)
class GammaDistribution:
    """Gamma(shape_a, rate_b); ``shape_a == 0`` is the point mass at 0."""

    shape_a: float
    rate_b: float

    def __post_init__(self):
        if not (self.shape_a >= 0 and np.isfinite(self.shape_a)):
            raise DomainError(f"gamma shape must be >= 0, got {self.shape_a}")
        if not (self.rate_b > 0 and np.isfinite(self.rate_b)):
            raise DomainError(f"gamma rate must be > 0, got {self.rate_b}")

    @property
    def degenerate(self) -> bool:
        return self.shape_a == 0

    @property
    def mean(self) -> float:
        return self.shape_a / self.rate_b

    @property
    def variance(self) -> float:
        return self.shape_a / self.rate_b**2

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.shape_a, self.rate_b
        if self.degenerate:
            return _ret(np.where(x == 0, np.inf, -np.inf))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = a * math.log(b) + (a - 1.0) * np.log(x) - b * x - math.lgamma(a)
        out = np.where(x > 0, out, -np.inf)
        if a == 1.0:
            out = np.where(x == 0, math.log(b), out)
        elif a < 1.0:
            out = np.where(x == 0, np.inf, out)
        return _ret(out)

    def pdf(self, x):
        return _ret(np.exp(self.logpdf(x)))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _ret(np.where(x < 0, 0.0, regularized_gamma_p(self.shape_a, self.rate_b * np.maximum(x, 0.0))))

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return _ret(np.where(x < 0, 1.0, regularized_gamma_q(self.shape_a, self.rate_b * np.maximum(x, 0.0))))

    survival = sf

    def stop_loss(self, x):
        """``E[(X - x)^+] = int_x^inf sf(u) du``, closed form."""
        x = np.asarray(x, dtype=float)
        a, b = self.shape_a, self.rate_b
        xp = np.maximum(x, 0.0)
        tail = a / b * regularized_gamma_q(a + 1.0, b * xp) - xp * regularized_gamma_q(a, b * xp)
        return _ret(np.where(x < 0, self.mean - x, np.maximum(tail, 0.0)))

    def partial_mean_above(self, x):
        """``E[X 1{X > x}]``."""
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return _ret(self.mean * np.asarray(regularized_gamma_q(self.shape_a + 1.0, self.rate_b * x)))

    def quantile(self, p: float) -> float:
        return bisect_quantile(self.cdf, p, self.mean + 10 * math.sqrt(self.variance) + 1.0, self.sf)

    def sample(self, rng: RngStream, size=None):
        return gamma_sample(self, rng, size)


def bisect_quantile(cdf, p: float, hi: float, sf=None, tol: float = 1e-12) -> float:
    """Smallest x with ``cdf(x) >= p`` by bracketing and bisection.

    For upper-tail probabilities (p close to 1) the survival function, when
    given, is used to decide the bracket so the search is not limited by the
    resolution of ``1 - p``.
    """
    if not 0.0 <= p < 1.0:
        raise DomainError("quantile level must be in [0, 1)")
    if sf is not None and p > 0.5:
        q = 1.0 - p
        test = lambda x: sf(x) <= q  # noqa: E731
    else:
        test = lambda x: cdf(x) >= p  # noqa: E731
    if p == 0.0:
        return 0.0
    lo = 0.0
    hi = max(hi, 1e-300)
    while not test(hi):
        lo, hi = hi, 2.0 * hi
    # relative tolerance, so deep lower-tail quantiles keep their digits
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if test(mid):
            hi = mid
        else:
            lo = mid
    return hi


# --------------------------------------------------------------------------
# Sampling
# --------------------------------------------------------------------------


def _mt_scalar(a: float, n: int, gen: np.random.Generator) -> np.ndarray:
    """n draws of Gamma(a, 1), a >= 1, all sharing one shape."""
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    pending = np.arange(n)
    while pending.size:
        m = pending.size
        x = gen.standard_normal(m)
        u = gen.random(m)
        v = 1.0 + c * x
        v3 = v * v * v
        x2 = x * x
        accept = (v > 0) & (u < 1.0 - 0.0331 * x2 * x2)
        rest = np.flatnonzero(~accept & (v > 0))
        if rest.size:
            vr = v3[rest]
            accept[rest] = np.log(u[rest]) < 0.5 * x2[rest] + d * (1.0 - vr + np.log(vr))
        out[pending[accept]] = d * v3[accept]
        pending = pending[~accept]
    return out


def standard_gamma(shape, rng: RngStream, size=None) -> np.ndarray:
    """Gamma(shape, 1) variates by Marsaglia-Tsang, with the ``U^(1/a)`` boost for a < 1.

    ``shape`` may be a scalar or an array broadcastable to ``size``.
    Zero shapes give exactly 0.
    """
    gen = rng.generator
    shape = np.asarray(shape, dtype=float)
    if size is None:
        size = shape.shape
    size = tuple(int(k) for k in np.atleast_1d(size))
    if shape.ndim == 0:
        a = float(shape)
        if a < 0 or not math.isfinite(a):
            raise DomainError("gamma shape must be finite and >= 0")
        n = int(np.prod(size))
        if a == 0:
            return np.zeros(size)
        out = _mt_scalar(a + 1.0 if a < 1.0 else a, n, gen)
        if a < 1.0:
            with np.errstate(divide="ignore"):
                out *= np.exp(np.log(gen.random(n)) / a)
        return out.reshape(size)

    a = np.broadcast_to(shape, size).ravel()
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise DomainError("gamma shape must be finite and >= 0")
    out = np.zeros(a.size)
    pos = a > 0
    small = pos & (a < 1.0)
    a_eff = np.where(small, a + 1.0, a)
    d = a_eff - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * np.where(pos, d, 1.0))

    idx = np.flatnonzero(pos)
    while idx.size:
        x = gen.standard_normal(idx.size)
        u = gen.random(idx.size)
        v = 1.0 + c[idx] * x
        ok = v > 0
        v3 = np.where(ok, v * v * v, 1.0)
        x2 = x * x
        with np.errstate(divide="ignore"):
            accept = ok & (
                (u < 1.0 - 0.0331 * x2 * x2) | (np.log(u) < 0.5 * x2 + d[idx] * (1.0 - v3 + np.log(v3)))
            )
        hit = idx[accept]
        out[hit] = d[hit] * v3[accept]
        idx = idx[~accept]

    sidx = np.flatnonzero(small)
    if sidx.size:
        u = gen.random(sidx.size)
        with np.errstate(divide="ignore"):
            out[sidx] *= np.exp(np.log(u) / a[sidx])
    return out.reshape(size)


def gamma_sample(d: GammaDistribution, rng: RngStream, size=None):
    """Draw from Gamma(a, b). Scalar when ``size`` is None."""
    draws = standard_gamma(d.shape_a, rng, 1 if size is None else size) / d.rate_b
    return float(draws[0]) if size is None else draws


def process_increment(s: ShapeFunction, b: float, t0: float, t1: float, rng: RngStream, size=None):
    """Sample ``X_t1 - X_t0`` for the gamma process with shape ``s`` and rate ``b``."""
    if t0 < 0 or t1 < t0:
        raise DomainError(f"need 0 <= t0 <= t1, got t0={t0}, t1={t1}")
    da = max(s(t1) - s(t0), 0.0)
    if da == 0.0:
        return 0.0 if size is None else np.zeros(size)
    return gamma_sample(GammaDistribution(da, b), rng, size)


__all__: Sequence[str] = [
    "ShapeFunction",
    "PowerLaw",
    "Linear",
    "ExpGrowth",
    "ExpSaturating",
    "Sum",
    "Tabulated",
    "shape_eval",
    "shape_from_dict",
    "regularized_gamma_p",
    "regularized_gamma_q",
    "GammaDistribution",
    "bisect_quantile",
    "standard_gamma",
    "gamma_sample",
    "process_increment",
]
