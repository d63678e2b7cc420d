import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sint, stats

from gammarepair.distributions import Empirical, ExactGamma, GammaConvolution, ks_distance
from gammarepair.gamma_core import GammaDistribution
from gammarepair.rng import RngStream

CASES = [((2.0, 1.0), (1.5, 3.0)), ((0.3, 2.0), (4.0, 1.0)), ((1.0, 20.0), (0.05, 1.0)), ((5.0, 1.0), (5.0, 1.0))]


def conv_oracle(a1, b1, a2, b2):
    """Numerical convolution density by direct quadrature (scipy)."""
    g1, g2 = stats.gamma(a1, scale=1 / b1), stats.gamma(a2, scale=1 / b2)

    def pdf(x):
        return sint.quad(lambda u: g1.pdf(u) * g2.pdf(x - u), 0, x, limit=200)[0]

    def cdf(x):
        return sint.quad(lambda u: g1.pdf(u) * g2.cdf(x - u), 0, x, limit=200)[0]

    return pdf, cdf


@pytest.mark.parametrize("p1,p2", CASES)
def test_convolution_moments(p1, p2):
    d = GammaConvolution(GammaDistribution(*p1), GammaDistribution(*p2))
    assert d.mean == pytest.approx(p1[0] / p1[1] + p2[0] / p2[1])
    assert d.variance == pytest.approx(p1[0] / p1[1] ** 2 + p2[0] / p2[1] ** 2)
    # stop-loss at 0 is the mean
    assert d.stop_loss(0.0) == pytest.approx(d.mean, rel=1e-9)


@pytest.mark.parametrize("p1,p2", CASES)
def test_convolution_against_quadrature(p1, p2):
    d = GammaConvolution(GammaDistribution(*p1), GammaDistribution(*p2))
    pdf, cdf = conv_oracle(*p1, *p2)
    for x in np.quantile(d.sample(RngStream(1), 2000), [0.1, 0.5, 0.9]):
        assert d.cdf(x) == pytest.approx(cdf(x), abs=1e-7)
        assert d.pdf(x) == pytest.approx(pdf(x), rel=1e-5, abs=1e-9)
        assert d.series_cdf(x) == pytest.approx(cdf(x), abs=1e-7)


def test_convolution_stop_loss_against_sampling_identity():
    d = GammaConvolution(GammaDistribution(2.0, 1.0), GammaDistribution(1.5, 3.0))
    x = d.sample(RngStream(2), 400_000)
    for t in (0.5, 2.0, 4.0):
        est = np.maximum(x - t, 0)
        assert abs(est.mean() - d.stop_loss(t)) < 4 * est.std() / np.sqrt(x.size)


def test_equal_rates_reduce_to_gamma():
    d = GammaConvolution(GammaDistribution(1.2, 2.0), GammaDistribution(0.8, 2.0))
    ref = GammaDistribution(2.0, 2.0)
    xs = np.linspace(0.01, 4, 9)
    assert np.allclose(d.cdf(xs), ref.cdf(xs), atol=1e-9)
    assert np.allclose(d.stop_loss(xs), ref.stop_loss(xs), atol=1e-9)


@given(st.floats(0.1, 5.0), st.floats(0.2, 4.0), st.floats(0.1, 5.0), st.floats(0.2, 4.0))
def test_convolution_cdf_monotone_and_bounded(a1, b1, a2, b2):
    d = GammaConvolution(GammaDistribution(a1, b1), GammaDistribution(a2, b2))
    xs = np.linspace(0.0, d.mean + 6 * np.sqrt(d.variance), 25)
    c = np.asarray(d.cdf(xs))
    assert np.all(np.diff(c) >= -1e-10) and c.min() >= 0 and c.max() <= 1
    assert np.allclose(c + np.asarray(d.sf(xs)), 1.0, atol=1e-9)


def test_convolution_ks():
    d = GammaConvolution(GammaDistribution(2.0, 1.0), GammaDistribution(1.5, 3.0))
    emp = Empirical(d.sample(RngStream(4), 20_000))
    assert ks_distance(emp, d) < 0.0143  # 1% critical value 1.63/sqrt(n)


def test_exact_gamma_wrapper():
    e = ExactGamma(GammaDistribution(3.0, 2.0))
    assert e.mean == 1.5 and e.variance == 0.75
    assert e.quantile(0.5) == pytest.approx(stats.gamma(3.0, scale=0.5).ppf(0.5), abs=1e-9)


def test_empirical_stop_loss():
    emp = Empirical(np.array([1.0, 2.0, 4.0]))
    assert emp.stop_loss(1.5) == pytest.approx((0.5 + 2.5) / 3)
    assert emp.cdf(2.0) == pytest.approx(2 / 3)
    assert emp.mean == pytest.approx(7 / 3)
