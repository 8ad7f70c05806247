import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cone.special import erf, erf_inv, std_normal_cdf, std_normal_quantile

mpmath.mp.dps = 40

# mpmath reference values
ERF_1 = 0.8427007929497148693
ERFINV_HALF = 0.4769362762044698734
PHI_1 = 0.8413447460685429486
PHI_2 = 0.9772498680518207928


def test_erf_values():
    assert erf(0.0) == 0.0
    assert erf(1.0) == pytest.approx(ERF_1, abs=1e-15)
    for x in np.linspace(-6, 6, 241):
        assert erf(x) == pytest.approx(float(mpmath.erf(x)), abs=2e-16)


@given(st.floats(-30, 30))
def test_erf_odd_and_bounded(x):
    assert erf(-x) == -erf(x)
    assert -1.0 <= erf(x) <= 1.0


def test_erf_rejects_nonfinite():
    with pytest.raises(ValueError):
        erf(math.inf)


def test_erf_inv_examples():
    assert erf_inv(0.0) == 0.0
    assert erf_inv(0.8427007929) == pytest.approx(1.0, abs=1e-9)
    assert erf_inv(0.5) == pytest.approx(ERFINV_HALF, abs=1e-15)


@pytest.mark.parametrize("p", [1e-300, 1e-8, 0.3, 0.5, 0.5 + 1e-12, 0.9, 0.9999,
                               1 - 1e-10, 1 - 1e-14, 1 - 2**-52])
def test_erf_inv_matches_high_precision(p):
    ref = float(mpmath.erfinv(p))
    assert erf_inv(p) == pytest.approx(ref, rel=1e-15)


@pytest.mark.parametrize("p", [-1.0, 1.0, 1.5, -2.0, math.nan])
def test_erf_inv_domain(p):
    with pytest.raises(ValueError):
        erf_inv(p)


@given(st.floats(-0.9999, 0.9999))
def test_erf_inv_roundtrip_and_oddness(p):
    y = erf_inv(p)
    assert abs(erf(y) - p) <= 1e-12
    assert erf_inv(-p) == -y


def test_erf_inv_monotone_on_grid():
    ps = np.linspace(-0.999999, 0.999999, 20001)
    ys = np.array([erf_inv(p) for p in ps])
    assert np.all(np.diff(ys) > 0)


def test_quantile_examples():
    assert std_normal_quantile(0.5) == 0.0
    assert std_normal_quantile(0.8413447461) == pytest.approx(1.0, abs=1e-6)
    assert std_normal_quantile(0.9772498681) == pytest.approx(2.0, abs=1e-6)
    assert std_normal_quantile(PHI_1) == pytest.approx(1.0, abs=1e-14)
    assert std_normal_quantile(0.95) == pytest.approx(1.6448536269514722, abs=1e-14)


@given(st.floats(0.001, 0.999))
def test_quantile_symmetry_and_cdf_inverse(alpha):
    assert abs(std_normal_quantile(alpha) + std_normal_quantile(1 - alpha)) <= 1e-12
    assert std_normal_cdf(std_normal_quantile(alpha)) == pytest.approx(alpha, abs=1e-14)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.1, 1e-17, 1 - 1e-16, math.nan])
def test_quantile_domain(alpha):
    with pytest.raises(ValueError):
        std_normal_quantile(alpha)
