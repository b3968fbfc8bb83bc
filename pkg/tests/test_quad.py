import math

import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from punctlap.errors import DomainError, EvaluationError
from punctlap.quad import (
    DEFAULT_SPEC,
    QuadratureSpec,
    integrate_finite,
    integrate_halfline,
    integrate_radial,
    sphere_area,
)


def test_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=-1.0)
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0, rel_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(max_subdivisions=0)
    with pytest.raises(DomainError):
        QuadratureSpec(tail_cutoff=-2.0)


def test_finite_sin():
    res = integrate_finite(math.sin, 0.0, math.pi, DEFAULT_SPEC)
    assert abs(res.value - 2.0) < 1e-12
    assert res.converged


def test_finite_endpoint_singularity():
    # 1/sqrt(x) on (0,1] = 2; open nodes avoid the endpoint
    res = integrate_finite(lambda x: x ** -0.5 if x > 0 else 0.0, 0.0, 1.0, DEFAULT_SPEC)
    assert abs(res.value - 2.0) < 1e-10


def test_finite_oscillatory_vs_scipy():
    f = lambda x: math.cos(37.0 * x) * math.exp(-x)
    got = integrate_finite(f, 0.0, 5.0, DEFAULT_SPEC).value
    want, _ = scipy.integrate.quad(f, 0.0, 5.0, epsabs=1e-13, limit=400)
    assert abs(got - want) < 1e-11


def test_halfline_exponential():
    res = integrate_halfline(lambda x: math.exp(-2.0 * x), DEFAULT_SPEC, decay_rate=2.0)
    assert abs(res.value - 0.5) < 1e-12


def test_halfline_gamma():
    res = integrate_halfline(
        lambda x: x ** 3 * math.exp(-x), DEFAULT_SPEC, decay_rate=0.5, prefactor=100.0
    )
    assert abs(res.value - 6.0) < 1e-10


def test_sphere_area():
    assert abs(sphere_area(2) - 2.0 * math.pi) < 1e-15
    assert abs(sphere_area(3) - 4.0 * math.pi) < 1e-14
    assert abs(sphere_area(1) - 2.0) < 1e-15


def test_radial_gaussian():
    # int_{R^3} e^{-|x|^2} dx = pi^{3/2}
    res = integrate_radial(
        lambda r: math.exp(-r * r), 3, DEFAULT_SPEC, decay_rate=1.0, prefactor=1.0
    )
    assert abs(res.value - math.pi ** 1.5) < 1e-10


def test_nonfinite_integrand_raises():
    with pytest.raises(EvaluationError):
        integrate_finite(lambda x: math.nan, 0.0, 1.0, DEFAULT_SPEC)


def test_budget_exhaustion_flagged():
    tiny = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=3)
    res = integrate_finite(lambda x: math.sin(40.0 * x) ** 2, 0.0, 10.0, tiny)
    assert not res.converged


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(-5, 5),
    b=st.floats(-5, 5),
    c0=st.floats(-3, 3),
    c1=st.floats(-3, 3),
    c2=st.floats(-3, 3),
)
def test_polynomials_exact(a, b, c0, c1, c2):
    # degree <= 2 is integrated to machine precision by a single panel
    lo, hi = min(a, b), max(a, b)
    if hi - lo < 1e-6:
        hi = lo + 1.0
    f = lambda x: c0 + c1 * x + c2 * x * x
    want = (
        c0 * (hi - lo)
        + c1 * (hi * hi - lo * lo) / 2.0
        + c2 * (hi ** 3 - lo ** 3) / 3.0
    )
    got = integrate_finite(f, lo, hi, DEFAULT_SPEC).value
    assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


@settings(max_examples=30, deadline=None)
@given(split=st.floats(0.1, 0.9))
def test_additivity(split):
    f = lambda x: math.exp(-x) * math.cos(3.0 * x)
    whole = integrate_finite(f, 0.0, 1.0, DEFAULT_SPEC).value
    parts = (
        integrate_finite(f, 0.0, split, DEFAULT_SPEC).value
        + integrate_finite(f, split, 1.0, DEFAULT_SPEC).value
    )
    assert abs(whole - parts) < 1e-11
