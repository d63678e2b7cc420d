import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special, stats

from gammarepair.errors import ConfigError, DomainError
from gammarepair.gamma_core import (
    ExpGrowth,
    ExpSaturating,
    GammaDistribution,
    Linear,
    PowerLaw,
    Sum,
    Tabulated,
    bisect_quantile,
    process_increment,
    regularized_gamma_p,
    regularized_gamma_q,
    shape_from_dict,
    standard_gamma,
)
from gammarepair.rng import RngStream

shapes_a = st.floats(1e-3, 300.0)
xs = st.floats(0.0, 400.0)


@given(shapes_a, xs)
def test_incomplete_gamma_matches_scipy(a, x):
    p, q = regularized_gamma_p(a, x), regularized_gamma_q(a, x)
    assert p == pytest.approx(special.gammainc(a, x), abs=1e-12)
    assert q == pytest.approx(special.gammaincc(a, x), rel=1e-9, abs=1e-300)


def test_incomplete_gamma_edges():
    assert regularized_gamma_p(2.0, 0.0) == 0.0
    assert regularized_gamma_q(2.0, 0.0) == 1.0
    assert regularized_gamma_p(0.0, 1.0) == 1.0
    assert regularized_gamma_q(2.0, np.inf) == 0.0


@given(st.floats(0.05, 50.0), st.floats(0.1, 10.0), st.floats(0.0, 60.0))
def test_gamma_law_against_scipy(a, b, x):
    d = GammaDistribution(a, b)
    ref = stats.gamma(a, scale=1.0 / b)
    assert d.cdf(x) == pytest.approx(ref.cdf(x), abs=1e-12)
    assert d.sf(x) == pytest.approx(ref.sf(x), rel=1e-8, abs=1e-300)
    if x > 0:
        assert d.logpdf(x) == pytest.approx(ref.logpdf(x), rel=1e-9, abs=1e-9)
    assert d.mean == pytest.approx(a / b)
    assert d.variance == pytest.approx(a / b**2)


@given(st.floats(0.05, 50.0), st.floats(0.1, 10.0), st.floats(0.0, 60.0))
def test_stop_loss_closed_form(a, b, x):
    d = GammaDistribution(a, b)
    ref = stats.gamma(a, scale=1.0 / b).expect(lambda y: max(y - x, 0.0), lb=x) if x < d.quantile(1 - 1e-14) else 0.0
    assert d.stop_loss(x) == pytest.approx(ref, abs=1e-8 * (1 + d.mean))


def test_stop_loss_at_zero_is_mean():
    d = GammaDistribution(3.0, 2.0)
    assert d.stop_loss(0.0) == pytest.approx(1.5, rel=1e-14)


@given(st.floats(0.05, 50.0), st.floats(0.1, 10.0), st.floats(1e-6, 1 - 1e-6))
def test_quantile_roundtrip(a, b, p):
    d = GammaDistribution(a, b)
    assert d.cdf(d.quantile(p)) == pytest.approx(p, abs=1e-10)


def test_degenerate_law():
    d = GammaDistribution(0.0, 1.0)
    assert d.degenerate and d.mean == 0.0
    assert d.cdf(0.0) == 1.0 and d.sf(0.0) == 0.0
    assert d.stop_loss(0.5) == 0.0


@pytest.mark.parametrize("a,b", [(-1.0, 1.0), (1.0, 0.0), (np.nan, 1.0), (1.0, -2.0)])
def test_gamma_domain_errors(a, b):
    with pytest.raises(DomainError):
        GammaDistribution(a, b)


@pytest.mark.parametrize("a", [0.01, 0.3, 1.0, 2.5, 40.0])
def test_marsaglia_tsang_ks(a):
    x = standard_gamma(a, RngStream(7).derive("ks", a), 40_000)
    assert stats.kstest(x, stats.gamma(a).cdf).pvalue > 0.001


def test_standard_gamma_array_shapes():
    a = np.array([0.0, 0.5, 3.0])
    x = standard_gamma(np.broadcast_to(a, (20000, 3)), RngStream(3), (20000, 3))
    assert np.all(x[:, 0] == 0.0)
    assert x[:, 1].mean() == pytest.approx(0.5, abs=0.03)
    assert x[:, 2].mean() == pytest.approx(3.0, abs=0.06)


def test_standard_gamma_rejects_negative():
    with pytest.raises(DomainError):
        standard_gamma(-1.0, RngStream(0), 3)


def test_sampling_is_reproducible():
    a = standard_gamma(0.7, RngStream(9, 4), 100)
    b = standard_gamma(0.7, RngStream(9, 4), 100)
    c = standard_gamma(0.7, RngStream(9, 5), 100)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_process_increment_law():
    x = process_increment(PowerLaw(1.0, 2.0), 2.0, 1.0, 2.0, RngStream(1), 50_000)
    assert x.mean() == pytest.approx(1.5, rel=0.02)
    assert x.var() == pytest.approx(0.75, rel=0.05)


def test_shape_families():
    assert PowerLaw(2.0, 0.5)(4.0) == pytest.approx(4.0)
    assert PowerLaw(1.0, 0.7).concave and not PowerLaw(1.0, 0.7).convex
    assert PowerLaw(1.0, 1.0).concave and PowerLaw(1.0, 1.0).convex
    assert Linear(1.3)(2.0) == pytest.approx(2.6)
    assert ExpGrowth()(0.0) == 0.0 and ExpGrowth().convex
    assert ExpSaturating()(0.0) == 0.0 and ExpSaturating().concave
    s = Sum((PowerLaw(1, 0.5), PowerLaw(1, 0.75)))
    assert s(1.0) == pytest.approx(2.0) and s.concave
    tab = Tabulated((0.0, 1.0, 2.0), (0.0, 2.0, 3.0))
    assert tab(1.5) == pytest.approx(2.5) and tab(3.0) == pytest.approx(4.0) and tab.concave


@pytest.mark.parametrize(
    "shape",
    [PowerLaw(1.5, 0.8), Linear(2.0), ExpGrowth(), ExpSaturating(), Sum((PowerLaw(1, 0.5), Linear(1.0))),
     Tabulated((0.0, 1.0, 3.0), (0.0, 1.0, 5.0))],
)
def test_shape_dict_roundtrip(shape):
    again = shape_from_dict(shape.to_dict())
    t = np.linspace(0, 5, 11)
    assert np.allclose(again(t), shape(t))


def test_shape_validation():
    with pytest.raises(ConfigError):
        shape_from_dict({"kind": "nope"})
    with pytest.raises(ConfigError):
        Tabulated((0.0, 1.0), (0.0, -1.0))
    with pytest.raises((ConfigError, DomainError)):
        PowerLaw(1.0, -0.5)


def test_bisect_quantile():
    d = GammaDistribution(2.0, 1.0)
    q = bisect_quantile(d.cdf, 0.9, 10.0)
    assert q == pytest.approx(stats.gamma(2.0).ppf(0.9), abs=1e-9)
    assert math.isfinite(q)
