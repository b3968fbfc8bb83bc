"""The explicit three-dimensional point-interaction heat kernel
G_beta(t,x,y), the boundary response R_beta(t,y), their sandwich bounds,
the Dirichlet lift of boundary data, and semigroup application by
quadrature.  n = 3 only: no closed kernel exists for n = 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .quad import DEFAULT_SPEC, QuadratureSpec, QuadResult, integrate_finite
from .sobolev import SingularDecomposition, SpaceContext
from .specfun import KernelValue, Point, heat_kernel_free_radial

__all__ = [
    "HeatKernelQuery",
    "heat_kernel_beta",
    "r_beta",
    "r_beta_limit_diagnostic",
    "c_lower_bound",
    "dirichlet_map",
    "semigroup_apply",
    "boundary_pairing",
]

_FOUR_PI = 4.0 * math.pi


def _alpha_of(pi) -> float:
    from .operators import alpha_from_beta

    return alpha_from_beta(pi.n, pi.beta)


@dataclass(frozen=True)
class HeatKernelQuery:
    t: float
    x: Point
    y: Point
    pi: object  # PointInteraction with n == 3

    def __post_init__(self):
        if self.t <= 0:
            raise DomainError("heat kernel requires t > 0")
        if self.x.norm <= 0 or self.y.norm <= 0:
            raise DomainError("kernel arguments must avoid the origin")
        if self.pi.n != 3:
            raise DomainError("explicit kernel exists for n = 3 only")


def _exp_gauss_integral(c: float, t: float, a: float, spec: QuadratureSpec) -> QuadResult:
    """int_0^inf e^{-c u} P(t, u + a) du with P the n=3 free kernel.

    Works for either sign of c: the Gaussian always wins, and the cutoff
    solves  (u+a)^2/4t + c u = log-budget  exactly (the certified-decay
    rule for growing exponentials under a Gaussian).
    """
    big = math.log(10.0 / spec.base_tol) + 1.5 * abs(math.log(_FOUR_PI * t)) + 5.0
    # largest root of u^2 + (2a + 4tc) u + a^2 - 4 t big = 0
    half_b = a + 2.0 * t * c
    disc = half_b * half_b - a * a + 4.0 * t * big
    cutoff = -half_b + math.sqrt(disc) if disc > 0 else 1.0
    cutoff = max(cutoff, 1e-3)

    def f(u: float) -> float:
        w = -c * u - (u + a) ** 2 / (4.0 * t)
        if w < -700.0:
            return 0.0
        if w > 700.0:
            # growth like e^{t c^2} for strongly negative c = 4 pi alpha:
            # the bound-state factor exceeds double range
            raise DomainError(
                "interaction term overflows double precision (t (4 pi alpha)^2 too large)"
            )
        return (_FOUR_PI * t) ** -1.5 * math.exp(w)

    return integrate_finite(f, 0.0, cutoff, spec)


def heat_kernel_beta(q: HeatKernelQuery, spec: QuadratureSpec = DEFAULT_SPEC) -> KernelValue:
    """The three-term kernel

        G_beta(t,x,y) = P(t,x-y) + (2t/|x||y|) P(t,|x|+|y|)
                        - (8 pi alpha t/|x||y|) int_0^inf e^{-4 pi alpha u} P(t,u+|x|+|y|) du,

    with alpha derived from beta; beta = 0 (alpha = inf) collapses to the
    free kernel P(t, x-y).
    """
    alpha = _alpha_of(q.pi)
    t = q.t
    sep = (q.x - q.y).norm
    p_free = heat_kernel_free_radial(3, t, sep)
    if math.isinf(alpha):
        return KernelValue(p_free, 0.0, "closed_form")
    rho, sig = q.x.norm, q.y.norm
    a = rho + sig
    term2 = (2.0 * t / (rho * sig)) * heat_kernel_free_radial(3, t, a)
    integral = _exp_gauss_integral(_FOUR_PI * alpha, t, a, spec)
    coef = 8.0 * math.pi * alpha * t / (rho * sig)
    value = p_free + term2 - coef * integral.value
    return KernelValue(value, abs(coef) * integral.error_estimate, "quadrature")


def r_beta(t: float, y: Point, pi, spec: QuadratureSpec = DEFAULT_SPEC) -> KernelValue:
    """The boundary response

        R_beta(t,y) = (8 pi t/|y|) P(t,y)
                      - (32 pi^2 alpha t/|y|) int_0^inf e^{-4 pi alpha u} P(t,u+|y|) du,

    i.e. the limit of G_beta(t,x,y)/G_3(x) as x -> 0.  Identically zero at
    beta = 0 (the alpha -> inf degeneration).
    """
    if t <= 0:
        raise DomainError("boundary response requires t > 0")
    if pi.n != 3:
        raise DomainError("boundary response exists for n = 3 only")
    sig = y.norm
    if sig <= 0:
        raise DomainError("boundary response needs |y| > 0")
    alpha = _alpha_of(pi)
    if math.isinf(alpha):
        return KernelValue(0.0, 0.0, "closed_form")
    lead = (8.0 * math.pi * t / sig) * heat_kernel_free_radial(3, t, sig)
    integral = _exp_gauss_integral(_FOUR_PI * alpha, t, sig, spec)
    coef = 32.0 * math.pi ** 2 * alpha * t / sig
    return KernelValue(lead - coef * integral.value, abs(coef) * integral.error_estimate, "quadrature")


def r_beta_limit_diagnostic(
    t: float, y: Point, pi, spec: QuadratureSpec = DEFAULT_SPEC, ks=range(6, 15)
) -> tuple[float, ...]:
    """G_beta(t, x_k, y) / G_3(x_k) along |x_k| = 2^-k: should approach
    r_beta(t, y) monotonically."""
    from .specfun import bessel_potential_radial

    out = []
    for k in ks:
        r = 2.0 ** -k
        q = HeatKernelQuery(t, Point.radial(r, 3), y, pi)
        g = heat_kernel_beta(q, spec).value
        out.append(g / bessel_potential_radial(3, r).value)
    return tuple(out)


def c_lower_bound(alpha: float, T: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """c(alpha, T) = 1 - 4 pi alpha int_0^inf e^{-4 pi |alpha| u - u^2/4T} du;
    the sandwich constant, positive for alpha > 0."""
    if T <= 0:
        raise DomainError("horizon must be positive")
    if alpha == 0:
        return 1.0
    big = math.log(10.0 / spec.base_tol)
    cutoff = math.sqrt(4.0 * T * big) + 1.0

    def f(u: float) -> float:
        w = -_FOUR_PI * abs(alpha) * u - u * u / (4.0 * T)
        return math.exp(w) if w > -700.0 else 0.0

    res = integrate_finite(f, 0.0, cutoff, spec)
    return 1.0 - _FOUR_PI * alpha * res.value


def dirichlet_map(gamma: complex, n: int, p: float = 2.0) -> SingularDecomposition:
    """The lift of boundary data gamma to gamma G_n (zero regular part);
    tau_beta of the result is gamma for every finite beta."""
    return SingularDecomposition(
        ctx=SpaceContext(n, p),
        c0=gamma,
        f0=0.0,
        grad_f0=(0.0,) * n,
        f_eval=lambda x: 0.0,
    )


def _sphere_mean_free(t: float, rho: float, r: float) -> float:
    """Angular mean of P(t, x - y) over the sphere |y| = r, |x| = rho:

        (4 pi t)^{-3/2} (t / rho r) [e^{-(rho-r)^2/4t} - e^{-(rho+r)^2/4t}].
    """
    w1 = -((rho - r) ** 2) / (4.0 * t)
    w2 = -((rho + r) ** 2) / (4.0 * t)
    e1 = math.exp(w1) if w1 > -700.0 else 0.0
    e2 = math.exp(w2) if w2 > -700.0 else 0.0
    return (_FOUR_PI * t) ** -1.5 * (t / (rho * r)) * (e1 - e2)


def semigroup_apply(
    pi,
    t: float,
    v,
    x: Point,
    spec: QuadratureSpec = DEFAULT_SPEC,
    v_radial: bool = True,
    v_decay_rate: float = 1.0,
    v_prefactor: float = 1.0,
    v_cutoff: float | None = None,
) -> float:
    """[S_beta(t) v](x) = int G_beta(t, x, y) v(y) dy by radial quadrature.

    For radial v the angular integral of the free part is closed-form; the
    interaction terms depend only on |x| and |y|.  The decay certificate
    (v_decay_rate, v_prefactor) or an explicit cutoff bounds v's tail.
    """
    if pi.n != 3:
        raise DomainError("semigroup quadrature exists for n = 3 only")
    if t <= 0:
        raise DomainError("semigroup requires t > 0")
    rho = x.norm
    if rho <= 0:
        raise DomainError("evaluation point must avoid the origin")
    alpha = _alpha_of(pi)
    free_only = math.isinf(alpha)

    if v_cutoff is None:
        target = spec.base_tol / 10.0
        arg = v_prefactor / (v_decay_rate * target)
        v_cutoff = max(math.log(arg) / v_decay_rate if arg > 1 else 1.0, 1.0)
        v_cutoff = max(v_cutoff, rho + math.sqrt(4.0 * t * math.log(10.0 / spec.base_tol)) + 1.0)

    if not v_radial:
        return _semigroup_apply_general(pi, t, v, x, spec, v_cutoff, alpha)

    def integrand(r: float) -> float:
        vr = v(Point.radial(r, 3))
        if vr == 0.0:
            return 0.0
        mean = _sphere_mean_free(t, rho, r)
        if not free_only:
            a = rho + r
            mean += (2.0 * t / (rho * r)) * heat_kernel_free_radial(3, t, a)
            integral = _exp_gauss_integral(_FOUR_PI * alpha, t, a, spec)
            mean -= (8.0 * math.pi * alpha * t / (rho * r)) * integral.value
        return vr * r * r * _FOUR_PI * mean

    return integrate_finite(integrand, 0.0, v_cutoff, spec).value


def _semigroup_apply_general(pi, t, v, x, spec, cutoff, alpha):
    """Product Gauss rule over spheres for non-radial v."""
    import numpy as np

    from .operators import _GL_W, _GL_X, _orthonormal_frame

    rho = x.norm
    e1, e2, e3 = _orthonormal_frame(x)
    m_phi = 32
    phis = [2.0 * math.pi * j / m_phi for j in range(m_phi)]
    free_only = math.isinf(alpha)

    def integrand(r: float) -> float:
        acc = 0.0
        vmean = 0.0
        for mu, w in zip(_GL_X, _GL_W):
            st = math.sqrt(max(0.0, 1.0 - mu * mu))
            for phi in phis:
                d = st * math.cos(phi) * e1 + st * math.sin(phi) * e2 + mu * e3
                y = Point(tuple(r * d))
                vy = v(y)
                sep = (x - y).norm
                acc += w * vy * heat_kernel_free_radial(3, t, sep)
                vmean += w * vy
        acc *= 2.0 * math.pi / m_phi
        vmean *= 2.0 * math.pi / m_phi / (2.0 * math.pi * 2.0)  # mean over unit measure
        total = acc
        if not free_only:
            a = rho + r
            extra = (2.0 * t / (rho * r)) * heat_kernel_free_radial(3, t, a)
            integral = _exp_gauss_integral(_FOUR_PI * alpha, t, a, spec)
            extra -= (8.0 * math.pi * alpha * t / (rho * r)) * integral.value
            total += extra * vmean * _FOUR_PI
        return total * r * r

    return integrate_finite(integrand, 0.0, cutoff, spec).value


def boundary_pairing(
    pi,
    t: float,
    v,
    spec: QuadratureSpec = DEFAULT_SPEC,
    v_decay_rate: float = 1.0,
    v_prefactor: float = 1.0,
    v_cutoff: float | None = None,
) -> float:
    """int R_beta(t, y) v(y) dy for radial v; the deterministic pairing in
    the boundary-response identity."""
    if v_cutoff is None:
        target = spec.base_tol / 10.0
        arg = v_prefactor / (v_decay_rate * target)
        v_cutoff = max(math.log(arg) / v_decay_rate if arg > 1 else 1.0, 1.0)

    def integrand(r: float) -> float:
        return v(Point.radial(r, 3)) * _FOUR_PI * r * r * r_beta(t, Point.radial(r, 3), pi, spec).value

    return integrate_finite(integrand, 0.0, v_cutoff, spec).value
