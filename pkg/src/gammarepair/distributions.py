"""Marginal-law descriptors: exact gamma, two-gamma convolution, empirical.

All descriptors expose ``cdf``, ``sf``, ``stop_loss`` (the integrated
survival ``E[(X - x)^+]``), ``mean``, ``variance`` and ``quantile``;
``pdf``/``logpdf`` where a density exists.

For :class:`GammaConvolution` the cdf and stop-loss transform are computed
by adaptive Simpson quadrature over the first component, truncated at its
``1 - 1e-12`` quantile. The density is evaluated from the exact
negative-binomial mixture representation of a sum of two gammas with
different rates, which keeps relative accuracy far into the tails (needed
for log-density ratios).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gamma_core import GammaDistribution, bisect_quantile
from .quadrature import adaptive_simpson
from .rng import RngStream

CDF_TOL = 1e-8
STOP_LOSS_TOL = 1e-12
TRUNCATION = 1e-12
CHUNK = 4096


def _ret(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


class Distribution:
    """Common interface of marginal-law descriptors."""

    mean: float
    variance: float

    def cdf(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def sf(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def survival(self, x):
        return self.sf(x)

    def stop_loss(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def integrated_cdf(self, x):
        """``int_0^x F(u) du = x - E[X] + E[(X - x)^+]`` for x >= 0."""
        x = np.asarray(x, dtype=float)
        return _ret(x - self.mean + np.asarray(self.stop_loss(x)))

    def quantile(self, p: float) -> float:
        hi = self.mean + 10.0 * math.sqrt(max(self.variance, 0.0)) + 1.0
        return bisect_quantile(self.cdf, p, hi, self.sf)


@dataclass(frozen=True)
class ExactGamma(Distribution):
    gamma: GammaDistribution

    @property
    def mean(self):
        return self.gamma.mean

    @property
    def variance(self):
        return self.gamma.variance

    def pdf(self, x):
        return self.gamma.pdf(x)

    def logpdf(self, x):
        return self.gamma.logpdf(x)

    def cdf(self, x):
        return self.gamma.cdf(x)

    def sf(self, x):
        return self.gamma.sf(x)

    def stop_loss(self, x):
        return self.gamma.stop_loss(x)

    def quantile(self, p: float) -> float:
        if self.gamma.degenerate:
            return 0.0
        return self.gamma.quantile(p)

    def sample(self, rng: RngStream, size):
        return self.gamma.sample(rng, size)


def _chunked(fn, x: np.ndarray, size: int = CHUNK) -> np.ndarray:
    # bounded batches keep the adaptive quadrature within its interval budget
    if x.size <= size:
        return np.asarray(fn(x))
    return np.concatenate([np.asarray(fn(x[i : i + size])) for i in range(0, x.size, size)])


@dataclass(frozen=True)
class GammaConvolution(Distribution):
    """Law of ``U + V`` with independent ``U ~ g1`` and ``V ~ g2``."""

    g1: GammaDistribution
    g2: GammaDistribution
    cdf_tol: float = CDF_TOL
    _q1: float = field(init=False, repr=False, compare=False, default=0.0)

    def __post_init__(self):
        q1 = self.g1.quantile(1.0 - TRUNCATION) if not self.g1.degenerate else 0.0
        object.__setattr__(self, "_q1", q1)

    @property
    def mean(self):
        return self.g1.mean + self.g2.mean

    @property
    def variance(self):
        return self.g1.variance + self.g2.variance

    # -- quadrature over the first component ------------------------------
    def _integrate_against_g1(self, h, upper: np.ndarray, tol: float) -> np.ndarray:
        """``int_0^upper[i] h(u, i) f_g1(u) du`` for each i.

        For shape < 1 the density is singular at 0; the substitution
        ``u = w^(1/a)`` absorbs the singularity exactly
        (``f(u) du = b^a / Gamma(a + 1) e^(-b u) dw``).
        """
        a, b = self.g1.shape_a, self.g1.rate_b
        upper = np.asarray(upper, dtype=float)
        if a < 1.0:
            const = math.exp(a * math.log(b) - math.lgamma(a + 1.0))

            def integrand(w, owner):
                u = np.power(w, 1.0 / a)
                return h(u, owner) * const * np.exp(-b * u)

            return adaptive_simpson(integrand, np.zeros_like(upper), np.power(upper, a), tol=tol)

        def integrand(u, owner):
            return h(u, owner) * self.g1.pdf(u)

        return adaptive_simpson(integrand, np.zeros_like(upper), upper, tol=tol)

    def _lower_and_upper(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return x, np.clip(x, 0.0, self._q1)

    def _cdf_direct(self, x):
        x, up = self._lower_and_upper(x)
        g2 = self.g2
        return self._integrate_against_g1(lambda u, i: np.asarray(g2.cdf(x[i] - u)), up, self.cdf_tol)

    def _sf_direct(self, x):
        # sf = P(U > x) + int_0^x sf_V(x - u) f_U(u) du
        x, up = self._lower_and_upper(x)
        g2 = self.g2
        part = self._integrate_against_g1(lambda u, i: np.asarray(g2.sf(x[i] - u)), up, self.cdf_tol)
        return np.asarray(self.g1.sf(x)) + part

    def _split(self, x):
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        cdf = np.zeros(flat.shape)
        sf = np.ones(flat.shape)
        if self.g1.degenerate:
            return _ret(np.asarray(self.g2.cdf(flat)).reshape(x.shape)), _ret(
                np.asarray(self.g2.sf(flat)).reshape(x.shape)
            )
        pos = flat > 0
        low = pos & (flat <= self.mean)
        high = pos & ~low
        if low.any():
            cdf[low] = np.clip(_chunked(self._cdf_direct, flat[low]), 0.0, 1.0)
            sf[low] = 1.0 - cdf[low]
        if high.any():
            sf[high] = np.clip(_chunked(self._sf_direct, flat[high]), 0.0, 1.0)
            cdf[high] = 1.0 - sf[high]
        return _ret(cdf.reshape(x.shape)), _ret(sf.reshape(x.shape))

    def cdf(self, x):
        return self._split(x)[0]

    def sf(self, x):
        return self._split(x)[1]

    def stop_loss(self, x, tol: float = STOP_LOSS_TOL):
        """``E[(U + V - x)^+]``.

        Split at u = x: on [0, x] integrate the stop-loss of V at ``x - u``;
        beyond x the positive part is ``u - x + V`` whose expectation is
        closed form.
        """
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        g1, g2 = self.g1, self.g2
        out = np.empty(flat.shape)
        neg = flat <= 0
        out[neg] = self.mean - flat[neg]
        pos = ~neg
        if pos.any():
            xp = flat[pos]
            if g1.degenerate:
                out[pos] = g2.stop_loss(xp)
            else:
                up = np.minimum(xp, self._q1)
                inner = self._integrate_against_g1(lambda u, i: np.asarray(g2.stop_loss(xp[i] - u)), up, tol)
                beyond = (g2.mean - xp) * np.asarray(g1.sf(xp)) + np.asarray(g1.partial_mean_above(xp))
                out[pos] = np.maximum(inner + beyond, 0.0)
        return _ret(out.reshape(x.shape))

    # -- series representation --------------------------------------------
    def _mixture(self):
        """``(shapes, rate, log_weights)`` with ``U + V = sum_k w_k Gamma(shapes[k], rate)``."""
        (a_hi, b_hi), (a_lo, b_lo) = sorted(
            [(self.g1.shape_a, self.g1.rate_b), (self.g2.shape_a, self.g2.rate_b)], key=lambda p: -p[1]
        )
        if b_hi == b_lo or a_lo == 0:
            return np.array([a_hi + a_lo]), b_hi, np.array([0.0])
        p = b_lo / b_hi
        q = 1.0 - p
        # NegBin(a_lo, p) weights; the tail decays like q^k, so size the cutoff on that
        mean_k = a_lo * q / p
        sd_k = math.sqrt(a_lo * q) / p
        geometric = math.log(1e-20) / math.log(q) if q > 0 else 0.0
        kmax = int(min(max(mean_k + 40.0 * sd_k + 50, mean_k + 2.0 * geometric), 200_000))
        k = np.arange(kmax + 1)
        kf = k.astype(float)
        logw = (
            np.frompyfunc(math.lgamma, 1, 1)(a_lo + kf).astype(float)
            - math.lgamma(a_lo)
            - np.frompyfunc(math.lgamma, 1, 1)(kf + 1.0).astype(float)
            + a_lo * math.log(p)
            + kf * math.log(q)
        )
        keep = logw > logw.max() - 46.0
        k, logw = k[keep], logw[keep]
        return a_hi + a_lo + k, b_hi, logw

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        shapes, rate, logw = self._mixture()
        flat = np.atleast_1d(x).ravel()
        out = np.full(flat.shape, -np.inf)
        pos = flat > 0
        if pos.any():
            lx = np.log(flat[pos])
            lg = np.array([math.lgamma(s) for s in shapes])
            terms = (
                logw[:, None]
                + shapes[:, None] * math.log(rate)
                + (shapes[:, None] - 1.0) * lx[None, :]
                - rate * flat[pos][None, :]
                - lg[:, None]
            )
            m = terms.max(axis=0)
            out[pos] = m + np.log(np.exp(terms - m).sum(axis=0))
        return _ret(out.reshape(x.shape))

    def pdf(self, x):
        return _ret(np.exp(self.logpdf(x)))

    def series_cdf(self, x):
        """The cdf from the mixture series; an independent route to :meth:`cdf`."""
        from .gamma_core import regularized_gamma_p

        x = np.atleast_1d(np.asarray(x, dtype=float))
        shapes, rate, logw = self._mixture()
        w = np.exp(logw)
        vals = regularized_gamma_p(shapes[:, None], rate * np.maximum(x, 0.0)[None, :])
        return _ret(np.where(x > 0, (w[:, None] * vals).sum(axis=0), 0.0))

    def sample(self, rng: RngStream, size):
        return self.g1.sample(rng, size) + self.g2.sample(rng, size)


@dataclass(frozen=True)
class Empirical(Distribution):
    """Empirical law of a sample (stored sorted)."""

    sample_values: np.ndarray = field(repr=False)
    _prefix: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        s = np.sort(np.asarray(self.sample_values, dtype=float).ravel())
        object.__setattr__(self, "sample_values", s)
        object.__setattr__(self, "_prefix", np.concatenate([[0.0], np.cumsum(s[::-1])])[::-1])

    @property
    def n(self) -> int:
        return self.sample_values.size

    @property
    def mean(self):
        return float(self.sample_values.mean())

    @property
    def variance(self):
        return float(self.sample_values.var())

    def cdf(self, x):
        return _ret(np.searchsorted(self.sample_values, np.asarray(x, dtype=float), side="right") / self.n)

    def sf(self, x):
        return _ret(1.0 - np.asarray(self.cdf(x)))

    def stop_loss(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.sample_values, x, side="right")
        above = self._prefix[idx]
        count = self.n - idx
        return _ret((above - x * count) / self.n)

    def quantile(self, p: float) -> float:
        return float(np.quantile(self.sample_values, p))


def ks_distance(emp: Empirical, dist: Distribution) -> float:
    """Sup-distance between an empirical cdf and a model cdf, at the jump points."""
    s = emp.sample_values
    f = np.asarray(dist.cdf(s))
    n = s.size
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    return float(max(np.max(hi - f), np.max(f - lo)))
