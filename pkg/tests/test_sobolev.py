import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from punctlap.errors import ContractViolationError, DomainError, PoleError
from punctlap.sobolev import (
    CaseTag,
    OneDBoundaryData,
    SingularDecomposition,
    SpaceContext,
    ZeroTraceCase,
    classify,
    decompose_1d,
    dirac_derivative_in_negative_sobolev,
    extract_c0_by_limit,
    extract_f0,
    friedrichs_unique,
    recompose_1d,
    scaled_potential_decomposition,
    scaling_shift,
    singleton_polar,
    tau_beta,
    tau_beta_lambda_convert,
    zero_trace_case,
)
from punctlap.specfun import Point, bessel_potential_radial, bessel_potential_scaled

# --- classification --------------------------------------------------------


@pytest.mark.parametrize(
    "n,p,tag,dim",
    [
        (1, 2.0, CaseTag.FULL_SINGULAR, 2),
        (1, 7.0, CaseTag.FULL_SINGULAR, 2),
        (2, 1.5, CaseTag.FULL_SINGULAR, 3),
        (2, 2.0, CaseTag.SCALAR_SINGULAR, 1),
        (2, 100.0, CaseTag.SCALAR_SINGULAR, 1),
        (3, 1.2, CaseTag.FULL_SINGULAR, 4),
        (3, 2.0, CaseTag.SCALAR_SINGULAR, 1),
        (3, 3.0, CaseTag.REGULAR, 0),
        (4, 4.0 / 3.0, CaseTag.SCALAR_SINGULAR, 1),
        (4, 2.0, CaseTag.REGULAR, 0),
    ],
)
def test_classify_table(n, p, tag, dim):
    case = classify(SpaceContext(n, p))
    assert case.case_tag is tag
    assert case.singular_dim == dim


def test_classify_rejects_bad_input():
    with pytest.raises(DomainError):
        SpaceContext(0, 2.0)
    with pytest.raises(DomainError):
        SpaceContext(2, 0.5)


@settings(max_examples=300, deadline=None)
@given(n=st.integers(1, 8), p=st.floats(1.0001, 50.0))
def test_classify_total_and_exclusive(n, p):
    case = classify(SpaceContext(n, p))
    full = n == 1 or (1.0 < p < n / (n - 1.0))
    regular = n > 2 and p >= n / (n - 2.0)
    if full:
        assert case.case_tag is CaseTag.FULL_SINGULAR and case.singular_dim == n + 1
    elif regular:
        assert case.case_tag is CaseTag.REGULAR and case.singular_dim == 0
    else:
        assert case.case_tag is CaseTag.SCALAR_SINGULAR and case.singular_dim == 1


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 6), p=st.floats(1.0001, 30.0))
def test_dirac_orders(n, p):
    ctx = SpaceContext(n, p)
    order0 = n <= 2 or p < n / (n - 2.0)
    order1 = n == 1 or p < n / (n - 1.0)
    assert dirac_derivative_in_negative_sobolev(0, ctx) == order0
    assert dirac_derivative_in_negative_sobolev(1, ctx) == order1
    assert not dirac_derivative_in_negative_sobolev(2, ctx)


def test_zero_trace_and_uniqueness():
    assert zero_trace_case(SpaceContext(3, 1.4)) is ZeroTraceCase.NO_CONSTRAINT
    assert zero_trace_case(SpaceContext(3, 2.0)) is ZeroTraceCase.VALUE_ZERO
    assert zero_trace_case(SpaceContext(3, 4.0)) is ZeroTraceCase.VALUE_AND_GRAD_ZERO
    assert friedrichs_unique(SpaceContext(3, 1.4))
    assert not friedrichs_unique(SpaceContext(3, 2.0))
    assert not friedrichs_unique(SpaceContext(2, 1.0001))
    assert singleton_polar(1, SpaceContext(3, 2.0))
    assert not singleton_polar(2, SpaceContext(3, 2.0))


# --- decomposition invariants ----------------------------------------------


def test_decomposition_case_constraints():
    with pytest.raises(ContractViolationError):
        # gradient coefficients outside FullSingular
        SingularDecomposition(SpaceContext(3, 2.0), c0=1.0, c=(1.0, 0.0, 0.0))
    with pytest.raises(ContractViolationError):
        # Regular case forces c0 = 0
        SingularDecomposition(SpaceContext(3, 5.0), c0=1.0)
    # allowed:
    SingularDecomposition(SpaceContext(3, 5.0), c0=0.0, f0=1.0)
    SingularDecomposition(SpaceContext(1, 2.0), c0=1.0, c=(2.0,), f0=0.0, grad_f0=(0.0,))


def test_scaled_decomposition_linear():
    d = SingularDecomposition(SpaceContext(3, 2.0), c0=2.0, f0=-1.0)
    s = d.scaled(3.0)
    assert s.c0 == 6.0 and s.f0 == -3.0


# --- 1d boundary decomposition ---------------------------------------------


def test_decompose_1d_worked_example():
    d = decompose_1d(OneDBoundaryData(0.5, 0.5, -1.0, 1.0))
    assert abs(d.c0 - 2.0) < 1e-14
    assert abs(d.c[0]) < 1e-14
    assert abs(d.f0 - (-0.5)) < 1e-14
    assert abs(d.grad_f0[0]) < 1e-14
    # tau_2 = c0 - 2 f0 = 3 on the 4-tuple directly
    assert abs((d.c0 - 2.0 * d.f0) - 3.0) < 1e-14


@settings(max_examples=100, deadline=None)
@given(
    up=st.floats(-5, 5),
    um=st.floats(-5, 5),
    dp=st.floats(-5, 5),
    dm=st.floats(-5, 5),
)
def test_decompose_recompose_roundtrip(up, um, dp, dm):
    b = OneDBoundaryData(up, um, dp, dm)
    d = decompose_1d(b)
    rb = recompose_1d(d)
    for got, want in [
        (rb.u_plus, up),
        (rb.u_minus, um),
        (rb.du_plus, dp),
        (rb.du_minus, dm),
    ]:
        assert abs(got - want) < 1e-12 * max(1.0, abs(want))


# --- limit extraction ------------------------------------------------------


def test_extract_c0_n3():
    ctx = SpaceContext(3, 2.0)

    def u(x: Point) -> float:
        r = x.norm
        return 2.5 * bessel_potential_radial(3, r).value + math.cos(r)

    res = extract_c0_by_limit(u, ctx)
    assert res.converged
    assert abs(res.value - 2.5) < 1e-8
    f0 = extract_f0(u, res.value, ctx)
    assert abs(f0.value - 1.0) < 1e-8


def test_extract_c0_n2_log_model():
    ctx = SpaceContext(2, 2.0)

    def u(x: Point) -> float:
        r = x.norm
        return 3.0 * bessel_potential_radial(2, r).value + math.exp(-r * r)

    res = extract_c0_by_limit(u, ctx)
    assert abs(res.value - 3.0) < 1e-6
    f0 = extract_f0(u, 3.0, ctx)
    assert abs(f0.value - 1.0) < 1e-8


def test_extraction_requires_singular_case():
    with pytest.raises(ContractViolationError):
        extract_c0_by_limit(lambda x: 0.0, SpaceContext(3, 5.0))
    with pytest.raises(ContractViolationError):
        extract_c0_by_limit(lambda x: 0.0, SpaceContext(3, 1.4))


# --- scaling ---------------------------------------------------------------


def test_scaling_shift_values():
    fac, shift = scaling_shift(3, 4.0)
    assert abs(fac - 2.0) < 1e-15
    assert abs(shift - (-(1.0 - 2.0) / (4.0 * math.pi))) < 1e-15
    fac2, shift2 = scaling_shift(2, 4.0)
    assert fac2 == 1.0
    assert abs(shift2 - math.log(4.0) / 2.0) < 1e-15
    with pytest.raises(DomainError):
        scaling_shift(3, -1.0)


@pytest.mark.parametrize("lam", [0.25, 4.0])
def test_scaled_potential_measured_n3(lam):
    # numerically extract (c0, f0) of G_{3,lam} in the unit frame
    ctx = SpaceContext(3, 2.0)
    u = lambda x: bessel_potential_scaled(3, lam, x).value
    c0 = extract_c0_by_limit(u, ctx)
    f0 = extract_f0(u, c0.value, ctx)
    s = math.sqrt(lam)
    assert abs(c0.value - 1.0 / s) < 1e-8
    want_f0 = (1.0 / (4.0 * math.pi)) * (1.0 / s - 1.0)
    assert abs(f0.value - want_f0) < 1e-8
    d = scaled_potential_decomposition(3, lam)
    assert abs(d.c0 - 1.0 / s) < 1e-14
    assert abs(d.f0 - want_f0) < 1e-14


@pytest.mark.parametrize("lam", [0.25, 4.0])
def test_scaled_potential_measured_n2_raw_shift(lam):
    # raw pointwise limit: G_{2,lam} - G_2 -> -log(lam)/(4 pi)
    ctx = SpaceContext(2, 2.0)
    u = lambda x: bessel_potential_scaled(2, lam, x).value
    c0 = extract_c0_by_limit(u, ctx)
    assert abs(c0.value - 1.0) < 1e-6
    f0 = extract_f0(u, 1.0, ctx)
    assert abs(f0.value - (-math.log(lam) / (4.0 * math.pi))) < 1e-8


# --- boundary functional and frame conversion ------------------------------


def test_tau_beta():
    d = SingularDecomposition(SpaceContext(3, 2.0), c0=1.0, f0=0.25)
    assert tau_beta(d, 2.0) == 1.0 - 0.5
    assert tau_beta(d, math.inf) == -0.25
    with pytest.raises(ContractViolationError):
        tau_beta(SingularDecomposition(SpaceContext(3, 1.2), c0=1.0, f0=0.0), 2.0)


@settings(max_examples=100, deadline=None)
@given(
    n=st.sampled_from([2, 3]),
    beta=st.floats(-10, 10).filter(lambda b: abs(b) > 1e-3),
    lam=st.floats(0.1, 10.0),
)
def test_tau_conversion_roundtrip(n, beta, lam):
    try:
        bl = tau_beta_lambda_convert(n, beta, lam, "to_lambda")
        back = tau_beta_lambda_convert(n, bl, lam, "from_lambda")
    except PoleError:
        return
    assert abs(back - beta) < 1e-9 * max(1.0, abs(beta))


def test_tau_conversion_pole():
    # n=3: denominator sqrt(lam) + beta (1 - sqrt(lam))/(4 pi) = 0
    lam = 4.0
    beta = -2.0 * 4.0 * math.pi / (1.0 - 2.0)  # makes denom 0: sqrt=2, 2 + b(-1)/4pi
    with pytest.raises(PoleError):
        tau_beta_lambda_convert(3, beta, lam, "to_lambda")


def test_tau_conversion_identity_at_lam_one():
    for n in (2, 3):
        assert abs(tau_beta_lambda_convert(n, 3.7, 1.0, "to_lambda") - 3.7) < 1e-14
