"""Classification of the singular Sobolev spaces on R^n minus a point,
the singular/regular decomposition, the exact 1-D boundary-data solver,
limit extraction of decomposition coefficients, scaling maps, the boundary
functional tau_beta, and the density/polar-set predicates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ContractViolationError, DomainError, NonConvergenceError, PoleError
from .quad import DEFAULT_SPEC, QuadratureSpec
from .specfun import Point, bessel_potential_radial

__all__ = [
    "SpaceContext",
    "CaseTag",
    "RepresentationCase",
    "SingularDecomposition",
    "OneDBoundaryData",
    "ZeroTraceCase",
    "LimitResult",
    "classify",
    "dirac_derivative_in_negative_sobolev",
    "decompose_1d",
    "recompose_1d",
    "extract_c0_by_limit",
    "extract_f0",
    "scaling_shift",
    "scaled_potential_decomposition",
    "tau_beta",
    "tau_beta_lambda_convert",
    "zero_trace_case",
    "friedrichs_unique",
    "singleton_polar",
    "DEFAULT_RADII",
]


@dataclass(frozen=True)
class SpaceContext:
    """Dimension n and integrability exponent p; q is the conjugate."""

    n: int
    p: float

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension must be >= 1")
        if not (1.0 < self.p < math.inf):
            raise DomainError("exponent p must lie in (1, inf)")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)


class CaseTag(Enum):
    FULL_SINGULAR = "FullSingular"
    SCALAR_SINGULAR = "ScalarSingular"
    REGULAR = "Regular"


@dataclass(frozen=True)
class RepresentationCase:
    case_tag: CaseTag
    n: int

    @property
    def singular_dim(self) -> int:
        if self.case_tag is CaseTag.FULL_SINGULAR:
            return self.n + 1
        if self.case_tag is CaseTag.SCALAR_SINGULAR:
            return 1
        return 0


def classify(ctx: SpaceContext) -> RepresentationCase:
    """The unique representation case for (n, p).

    FullSingular for 1 < p < n/(n-1) (all p when n=1); ScalarSingular for
    n >= 2, n/(n-1) <= p < n/(n-2) (upper bound +inf when n=2); Regular for
    n > 2, p >= n/(n-2).  Boundaries are left-closed, no tolerance fuzz.
    """
    n, p = ctx.n, ctx.p
    p_low = n / (n - 1.0) if n >= 2 else math.inf
    p_high = n / (n - 2.0) if n >= 3 else math.inf
    if p < p_low:
        return RepresentationCase(CaseTag.FULL_SINGULAR, n)
    if p < p_high:
        return RepresentationCase(CaseTag.SCALAR_SINGULAR, n)
    return RepresentationCase(CaseTag.REGULAR, n)


def dirac_derivative_in_negative_sobolev(order: int, ctx: SpaceContext) -> bool:
    """Whether D^a delta_0 with |a| = order lies in W^{-2,p}(R^n)."""
    if order < 0:
        raise DomainError("order must be >= 0")
    n, p = ctx.n, ctx.p
    if order == 0:
        return n <= 2 or p < n / (n - 2.0)
    if order == 1:
        return n == 1 or p < n / (n - 1.0)
    return False


@dataclass(frozen=True)
class SingularDecomposition:
    """u = c0 G_n + sum_i c_i D_i G_n + f, with point data of the regular part.

    f0 is f(0) (meaningful when p > n/2), grad_f0 is the gradient of f at 0
    (meaningful when p > n); either may be None when not available.
    """

    ctx: SpaceContext
    c0: complex
    c: tuple[complex, ...] = ()
    f0: complex | None = None
    grad_f0: tuple[complex, ...] | None = None
    f_eval: object | None = None  # callable Point -> complex

    def __post_init__(self):
        case = classify(self.ctx)
        if case.case_tag is not CaseTag.FULL_SINGULAR and any(
            ci != 0 for ci in self.c
        ):
            raise ContractViolationError(
                "gradient coefficients require the FullSingular case"
            )
        if case.case_tag is CaseTag.REGULAR and self.c0 != 0:
            raise ContractViolationError("Regular case forces c0 = 0")

    @property
    def case(self) -> RepresentationCase:
        return classify(self.ctx)

    def scaled(self, s: complex) -> "SingularDecomposition":
        f = self.f_eval
        return SingularDecomposition(
            ctx=self.ctx,
            c0=s * self.c0,
            c=tuple(s * ci for ci in self.c),
            f0=None if self.f0 is None else s * self.f0,
            grad_f0=None
            if self.grad_f0 is None
            else tuple(s * gi for gi in self.grad_f0),
            f_eval=None if f is None else (lambda x, s=s, f=f: s * f(x)),
        )


@dataclass(frozen=True)
class OneDBoundaryData:
    """One-sided boundary values u(0+), u(0-), u'(0+), u'(0-)."""

    u_plus: complex
    u_minus: complex
    du_plus: complex
    du_minus: complex


# recomposition matrix: (c0, c1, f0, f1) -> (u+, u-, u'+, u'-)
_RECOMPOSE = np.array(
    [
        [0.5, -0.5, 1.0, 0.0],
        [0.5, 0.5, 1.0, 0.0],
        [-0.5, 0.5, 0.0, 1.0],
        [0.5, 0.5, 0.0, 1.0],
    ],
    dtype=complex,
)


def decompose_1d(b: OneDBoundaryData, p: float = 2.0) -> SingularDecomposition:
    """Exact solution of the 4x4 boundary system on the punctured line:

        c0 = u'(0-) - u'(0+),   c1 = u(0-) - u(0+),
        f0 = [u(0+) + u(0-) + u'(0+) - u'(0-)] / 2,
        f1 = [u(0+) - u(0-) + u'(0+) + u'(0-)] / 2.
    """
    c0 = b.du_minus - b.du_plus
    c1 = b.u_minus - b.u_plus
    f0 = 0.5 * (b.u_plus + b.u_minus + b.du_plus - b.du_minus)
    f1 = 0.5 * (b.u_plus - b.u_minus + b.du_plus + b.du_minus)
    rhs = np.array([b.u_plus, b.u_minus, b.du_plus, b.du_minus], dtype=complex)
    sol = np.linalg.solve(_RECOMPOSE, rhs)
    closed = np.array([c0, c1, f0, f1], dtype=complex)
    if not np.allclose(sol, closed, rtol=1e-10, atol=1e-10 * max(1.0, float(np.abs(rhs).max()))):
        raise NonConvergenceError("closed solution and linear solve disagree")
    return SingularDecomposition(
        ctx=SpaceContext(1, p), c0=c0, c=(c1,), f0=f0, grad_f0=(f1,)
    )


def recompose_1d(d: SingularDecomposition) -> OneDBoundaryData:
    """Inverse of decompose_1d: boundary values from the coefficients."""
    if d.ctx.n != 1 or len(d.c) != 1 or d.f0 is None or not d.grad_f0:
        raise ContractViolationError("need a full n=1 decomposition")
    vec = np.array([d.c0, d.c[0], d.f0, d.grad_f0[0]], dtype=complex)
    u = _RECOMPOSE @ vec
    return OneDBoundaryData(u_plus=u[0], u_minus=u[1], du_plus=u[2], du_minus=u[3])


DEFAULT_RADII = tuple(2.0 ** -k for k in range(4, 21))


@dataclass(frozen=True)
class LimitResult:
    value: complex
    converged: bool
    history: tuple[complex, ...] = field(default_factory=tuple)

    @property
    def last_delta(self) -> float:
        if len(self.history) < 2:
            return math.inf
        return abs(self.history[-1] - self.history[-2])


def _require_extraction_regime(ctx: SpaceContext):
    case = classify(ctx)
    if case.case_tag is not CaseTag.SCALAR_SINGULAR:
        raise ContractViolationError("limit extraction needs the ScalarSingular case")
    if ctx.p <= ctx.n / 2.0:
        raise ContractViolationError("limit extraction needs p > n/2 (continuous regular part)")


def _richardson12(seq):
    """Two-stage Richardson for corrections a r + b r^2 on radii halving."""
    r1 = [2.0 * seq[k + 1] - seq[k] for k in range(len(seq) - 1)]
    r2 = [(4.0 * r1[k + 1] - r1[k]) / 3.0 for k in range(len(r1) - 1)]
    return r2


def _log_model_fit(seq, lvals):
    """Window fits of v = c0 + B / (L + c) on consecutive triples."""
    out = []
    for k in range(len(seq) - 2):
        d1 = seq[k + 1] - seq[k]
        d2 = seq[k + 2] - seq[k + 1]
        if abs(d2) < 1e-300:
            out.append(seq[k + 2])
            continue
        rho = d1 / d2
        if abs(rho - 1.0) < 1e-12:
            out.append(seq[k + 2])
            continue
        c = (lvals[k + 2] - rho * lvals[k]) / (rho - 1.0)
        h = lvals[k + 1] - lvals[k + 2]
        b = -d2 * (lvals[k + 1] + c) * (lvals[k + 2] + c) / (lvals[k + 2] - lvals[k + 1])
        out.append(seq[k + 2] - b / (lvals[k + 2] + c))
    return out


def _finish(history, tol=1e-8):
    if len(history) < 2:
        return LimitResult(history[-1] if history else cmath.nan, False, tuple(history))
    val = history[-1]
    delta = abs(history[-1] - history[-2])
    conv = delta <= tol * max(1.0, abs(val))
    return LimitResult(val, conv, tuple(history))


def extract_c0_by_limit(
    u,
    ctx: SpaceContext,
    radii: tuple[float, ...] = DEFAULT_RADII,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> LimitResult:
    """c0 = lim_{x->0} u(x) / G_n(x), by extrapolation along the given radii.

    For n = 2 the ratio approaches c0 like B/log(1/r); a three-point fit of
    c0 + B/(L + c) removes both the log level and its constant offset.  For
    n >= 3 the correction is a r + b r^2 and plain Richardson applies.
    """
    _require_extraction_regime(ctx)
    n = ctx.n
    vals = []
    for r in radii:
        g = bessel_potential_radial(n, r, spec).value
        vals.append(u(Point.radial(r, n)) / g)
    if n == 2:
        history = _log_model_fit(vals, [math.log(1.0 / r) for r in radii])
    else:
        history = _richardson12(vals)
    res = _finish(history)
    if not res.converged and res.last_delta > 1e-3 * max(1.0, abs(res.value)):
        raise NonConvergenceError(
            "ratio sequence does not converge; input likely not in the space"
        )
    return res


def extract_f0(
    u,
    c0: complex,
    ctx: SpaceContext,
    radii: tuple[float, ...] = DEFAULT_RADII,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> LimitResult:
    """f(0) = lim_{x->0} [u(x) - c0 G_n(x)] by Richardson extrapolation."""
    _require_extraction_regime(ctx)
    n = ctx.n
    vals = []
    for r in radii:
        g = bessel_potential_radial(n, r, spec).value
        vals.append(u(Point.radial(r, n)) - c0 * g)
    history = _richardson12(vals)
    res = _finish(history)
    if not res.converged and res.last_delta > 1e-3 * max(1.0, abs(res.value)):
        raise NonConvergenceError("difference sequence does not converge")
    return res


def scaling_shift(n: int, lam: float) -> tuple[float, float]:
    """The frame change (c0, f(0)) -> (c0^lam, f^lam(0)) between the unit
    and lam-scaled singular kernels:

        n=2:  c0^lam = c0,            f^lam(0) = f(0) + c0 * log(lam)/2
        n=3:  c0^lam = sqrt(lam) c0,  f^lam(0) = f(0) - c0 * (1 - sqrt(lam))/(4 pi)

    Returns (c0_factor, f0_shift_per_unit_c0).  The n=2 shift follows the
    operator-level normalization; the raw pointwise limit differs by a
    1/(2 pi) factor (see extract_f0 and the acceptance report).
    """
    if lam <= 0:
        raise DomainError("scaling parameter must be positive")
    if n == 2:
        return 1.0, math.log(lam) / 2.0
    if n == 3:
        s = math.sqrt(lam)
        return s, -(1.0 - s) / (4.0 * math.pi)
    raise DomainError("scaling_shift supports n in {2, 3} only")


def scaled_potential_decomposition(n: int, lam: float, p: float = 2.0) -> SingularDecomposition:
    """Unit-frame decomposition of the scaled kernel G_{n,lam} = c0 G_n + f.

    Inverts scaling_shift applied to the lam-frame representation (1, 0).
    """
    factor, shift = scaling_shift(n, lam)
    c0 = 1.0 / factor
    f0 = -shift * c0
    ctx = SpaceContext(n, p)

    def f_eval(x: Point, n=n, lam=lam, c0=c0):
        s = math.sqrt(lam)
        return (
            bessel_potential_radial(n, s * x.norm).value
            - c0 * bessel_potential_radial(n, x.norm).value
        )

    return SingularDecomposition(ctx=ctx, c0=c0, f0=f0, f_eval=f_eval)


def tau_beta(d: SingularDecomposition, beta) -> complex:
    """The boundary functional tau_beta(u) = c0 - beta f(0); -f(0) at beta=inf."""
    if classify(d.ctx).case_tag is not CaseTag.SCALAR_SINGULAR:
        raise ContractViolationError("tau_beta needs the ScalarSingular case")
    if d.f0 is None:
        raise ContractViolationError("tau_beta needs f0 (p > n/2 regime)")
    if _is_inf(beta):
        return -d.f0
    return d.c0 - beta * d.f0


def _is_inf(beta) -> bool:
    try:
        return math.isinf(abs(beta))
    except (TypeError, OverflowError):
        return False


def tau_beta_lambda_convert(n: int, beta: complex, lam: float, direction: str) -> complex:
    """Convert the boundary parameter between the unit and lam frames.

    direction="to_lambda":  beta_lam = beta (1 - beta log(lam)/2)^(-1)      [n=2]
                            beta_lam = beta (s + beta (1-s)/4pi)^(-1)       [n=3, s=sqrt(lam)]
    direction="from_lambda" applies the algebraic inverse.
    """
    if lam <= 0:
        raise DomainError("scaling parameter must be positive")
    if direction not in ("to_lambda", "from_lambda"):
        raise DomainError("direction must be 'to_lambda' or 'from_lambda'")
    if n == 2:
        half_log = math.log(lam) / 2.0
        if direction == "to_lambda":
            denom = 1.0 - beta * half_log
        else:
            denom = 1.0 + beta * half_log
        if abs(denom) < 1e-12 * max(1.0, abs(beta * half_log)):
            raise PoleError("beta sits at the excluded frame-conversion pole")
        return beta / denom
    if n == 3:
        s = math.sqrt(lam)
        w = (1.0 - s) / (4.0 * math.pi)
        if direction == "to_lambda":
            denom = s + beta * w
            if abs(denom) < 1e-12 * max(1.0, abs(beta * w), s):
                raise PoleError("beta sits at the excluded frame-conversion pole")
            return beta / denom
        denom = 1.0 - beta * w
        if abs(denom) < 1e-12 * max(1.0, abs(beta * w)):
            raise PoleError("beta sits at the excluded frame-conversion pole")
        return s * beta / denom
    raise DomainError("conversion supports n in {2, 3} only")


class ZeroTraceCase(Enum):
    NO_CONSTRAINT = "NoConstraint"
    VALUE_ZERO = "ValueZero"
    VALUE_AND_GRAD_ZERO = "ValueAndGradZero"


def zero_trace_case(ctx: SpaceContext) -> ZeroTraceCase:
    """Which point constraints cut out the closure of test functions
    vanishing near the puncture: none for p <= n/2, f(0)=0 for
    n/2 < p <= n, f(0)=0=grad f(0) for p > n."""
    n, p = ctx.n, ctx.p
    if p <= n / 2.0:
        return ZeroTraceCase.NO_CONSTRAINT
    if p <= n:
        return ZeroTraceCase.VALUE_ZERO
    return ZeroTraceCase.VALUE_AND_GRAD_ZERO


def friedrichs_unique(ctx: SpaceContext) -> bool:
    """Uniqueness of the generator extension: n >= 3 and p <= n/2."""
    return ctx.n >= 3 and ctx.p <= ctx.n / 2.0


def singleton_polar(m: int, ctx: SpaceContext) -> bool:
    """Whether a single point is (m,p)-polar: p <= n/m."""
    if m < 1:
        raise DomainError("order m must be >= 1")
    return ctx.p <= ctx.n / m
