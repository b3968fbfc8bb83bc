"""The point-interaction operator family A_beta for n = 2, 3: the
alpha/beta parameter dictionary, eigenpairs, domain membership, operator
action with finite-difference Laplacians, the rank-one resolvent for n = 3,
and the Green bilinear form on conjugate decomposition pairs.

Sign convention: A_beta acts as the negative restricted Laplacian; the
eigenfunction e satisfies the pointwise PDE  Delta e = lambda e  away from
the origin together with the boundary condition tau_beta(e) = 0.  Both
candidate spectral values (+lambda and -lambda) are reported by the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, DomainError, PoleError
from .quad import DEFAULT_SPEC, QuadratureSpec, integrate_finite
from .sobolev import (
    CaseTag,
    SingularDecomposition,
    SpaceContext,
    classify,
    scaled_potential_decomposition,
    tau_beta,
)
from .specfun import Point, bessel_potential_radial

__all__ = [
    "PointInteraction",
    "EigenPair",
    "alpha_from_beta",
    "beta_from_alpha",
    "eigenvalue",
    "domain_membership",
    "apply_A_beta",
    "laplacian_fd",
    "resolvent_apply",
    "resolvent_coefficient",
    "green_form",
    "adjoint_parameter",
    "domain_membership_1d",
]

_FOUR_PI = 4.0 * math.pi

# tightened tolerances for kernel evaluations feeding finite differences
TIGHT_SPEC = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-12, max_subdivisions=4000)


def alpha_from_beta(n: int, beta: float) -> float:
    """The parameter dictionary beta -> alpha.

    n=3: alpha = 8 pi / beta - 1/(4 pi), with beta=0 -> inf and
    beta=inf -> -1/(4 pi).  n=2: alpha = 8 pi / beta, beta=0 -> inf.
    """
    if n == 3:
        if beta == 0:
            return math.inf
        if math.isinf(beta):
            return -1.0 / _FOUR_PI
        return 8.0 * math.pi / beta - 1.0 / _FOUR_PI
    if n == 2:
        if beta == 0:
            return math.inf
        if math.isinf(beta):
            return 0.0
        return 8.0 * math.pi / beta
    raise DomainError("dictionary defined for n in {2, 3}")


def beta_from_alpha(n: int, alpha: float) -> float:
    """Inverse dictionary alpha -> beta (n=3: beta = 32 pi^2 / (1 + 4 pi alpha))."""
    if n == 3:
        if math.isinf(alpha):
            return 0.0
        denom = 1.0 + _FOUR_PI * alpha
        if abs(denom) < 1e-13 * max(1.0, abs(_FOUR_PI * alpha)):
            return math.inf
        return 32.0 * math.pi ** 2 / denom
    if n == 2:
        if math.isinf(alpha):
            return 0.0
        if alpha == 0:
            return math.inf
        return 8.0 * math.pi / alpha
    raise DomainError("dictionary defined for n in {2, 3}")


@dataclass(frozen=True)
class PointInteraction:
    """The operator A_beta on R^n minus a point; beta is extended real."""

    n: int
    beta: float

    def __post_init__(self):
        if self.n not in (2, 3):
            raise DomainError("point interactions supported for n in {2, 3}")

    @property
    def alpha(self) -> float:
        return alpha_from_beta(self.n, self.beta)


@dataclass(frozen=True)
class EigenPair:
    """lam > 0 with eigenfunction e; e solves Delta e = lam e off the origin
    and tau_beta(e) = 0.  decomposition carries the unit-frame (c0, f0)."""

    lam: float
    e: object  # callable Point -> float
    decomposition: SingularDecomposition


def eigenvalue(pi: PointInteraction, spec: QuadratureSpec = TIGHT_SPEC) -> EigenPair | None:
    """The unique positive spectral value of A_beta, when it exists.

    n=2, beta in R, beta != 0:  lam = e^(-2/beta), e = G_{2,lam}.
    n=3, beta in (-inf,0) u (4 pi, inf]:  lam = (1 - 4 pi/beta)^2,
        e = sqrt(lam) G_{3,lam} = e^{-sqrt(lam)|x|} / (4 pi |x|).
    Returns None when the spectral set is empty.
    """
    n, beta = pi.n, pi.beta
    if n == 2:
        if beta == 0 or math.isinf(beta):
            return None
        lam = math.exp(-2.0 / beta)
        kappa = math.exp(-1.0 / beta)

        def e(x: Point, kappa=kappa, spec=spec) -> float:
            return bessel_potential_radial(2, kappa * x.norm, spec).value

        d = scaled_potential_decomposition(2, lam)
        return EigenPair(lam, e, d)
    # n == 3
    if not (beta < 0 or beta > _FOUR_PI or math.isinf(beta)):
        return None
    s = 1.0 if math.isinf(beta) else 1.0 - _FOUR_PI / beta
    lam = s * s

    def e(x: Point, s=s) -> float:
        r = x.norm
        return math.exp(-s * r) / (_FOUR_PI * r)

    base = scaled_potential_decomposition(3, lam)
    d = base.scaled(s)  # sqrt(lam) * G_{3,lam}
    return EigenPair(lam, e, d)


def domain_membership(
    d: SingularDecomposition, pi: PointInteraction, membership_tol: float = 1e-9
) -> bool:
    """Whether the decomposition satisfies the A_beta domain condition.

    beta=0: c0 = 0 (regular domain); beta=inf: f(0) = 0; otherwise
    |tau_beta(u)| <= membership_tol.
    """
    if pi.beta == 0:
        return abs(d.c0) <= membership_tol
    if math.isinf(pi.beta):
        if d.f0 is None:
            raise ContractViolationError("membership at beta=inf needs f0")
        return abs(d.f0) <= membership_tol
    return abs(tau_beta(d, pi.beta)) <= membership_tol


def laplacian_fd(f, x: Point, h_scale: float = 1e-2):
    """Laplacian of f at x by second-order central differences with one
    Richardson step.  The step is deliberately coarse (h ~ 1e-2) because
    quadrature-backed integrands carry ~1e-12 evaluation noise that h^-2
    would otherwise amplify past the residual budgets; it also stays small
    relative to the distance to the singular point."""
    n = x.n
    h = h_scale * min(1.0, max(x.norm, 1e-6))

    def lap(h: float):
        f0 = f(x)
        total = 0.0
        for i in range(n):
            e = [0.0] * n
            e[i] = h
            xp = Point(tuple(c + d for c, d in zip(x.coords, e)))
            xm = Point(tuple(c - d for c, d in zip(x.coords, e)))
            total += f(xp) - 2.0 * f0 + f(xm)
        return total / (h * h)

    l1 = lap(h)
    l2 = lap(h / 2.0)
    return (4.0 * l2 - l1) / 3.0


def apply_A_beta(
    d: SingularDecomposition, pi: PointInteraction, membership_tol: float = 1e-9
):
    """The action A_beta u = -c0 G_n - Delta f as an evaluable function.

    (For finite beta the domain condition gives c0 = beta f(0), so this is
    the -beta f(0) G_n - Delta f form; the unified -c0 G_n covers beta=inf.)
    """
    if not domain_membership(d, pi, membership_tol):
        raise DomainError("decomposition is not in D(A_beta)")
    if d.f_eval is None:
        raise ContractViolationError("apply_A_beta needs an evaluable regular part")
    n, c0, f = pi.n, d.c0, d.f_eval

    def out(x: Point) -> complex:
        g = bessel_potential_radial(n, x.norm, TIGHT_SPEC).value if c0 != 0 else 0.0
        return -c0 * g - laplacian_fd(f, x)

    return out


def resolvent_coefficient(pi: PointInteraction, lam: float) -> float:
    """The rank-one coefficient of the n=3 resolvent,

        c(beta, lam) = beta / (1 - beta (1 - sqrt(lam)) / 4 pi),

    chosen so that (lam + A_beta) inverts exactly on the tau_beta domain;
    it reduces to beta at lam = 1 and its pole sits at lam = lambda_beta.
    """
    if pi.n != 3:
        raise DomainError("resolvent implemented for n = 3 only")
    if lam <= 0:
        raise DomainError("resolvent parameter must be positive")
    s = math.sqrt(lam)
    w = (1.0 - s) / _FOUR_PI
    beta = pi.beta
    if beta == 0:
        return 0.0
    if math.isinf(beta):
        if abs(w) < 1e-14:
            raise PoleError("lam = 1 is the spectral value at beta = inf")
        return -1.0 / w
    denom = 1.0 - beta * w
    if abs(denom) < 1e-10 * max(1.0, abs(beta * w)):
        raise PoleError("lam coincides with the spectral value lambda_beta")
    return beta / denom


def _gl_nodes(m: int = 32):
    x, w = np.polynomial.legendre.leggauss(m)
    return x, w


_GL_X, _GL_W = _gl_nodes()


def _orthonormal_frame(x: Point):
    """An orthonormal basis (e1, e2, e3) of R^3 with e3 along x."""
    v = np.array(x.coords, dtype=float)
    nv = np.linalg.norm(v)
    e3 = v / nv
    a = np.array([1.0, 0.0, 0.0]) if abs(e3[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(e3, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(e3, e1)
    return e1, e2, e3


def _free_resolvent_radial_conv(h, kappa: float, rho: float, spec, decay_rate, prefactor, cutoff):
    """[R_lam * h](x) for radial h at |x| = rho, n = 3, via the closed
    angular mean of the Yukawa kernel.  rho = 0 gives the origin value."""

    if rho == 0.0:
        def f(r: float) -> float:
            return h(Point.radial(r, 3)) * r * math.exp(-kappa * r)
    else:
        def f(r: float) -> float:
            num = math.exp(-kappa * abs(rho - r)) - math.exp(-kappa * (rho + r))
            return h(Point.radial(r, 3)) * r * num / (2.0 * rho * kappa)

    if cutoff is None:
        target = spec.base_tol / 10.0
        arg = prefactor / (decay_rate * target)
        cutoff = max(math.log(arg) / decay_rate if arg > 1 else 1.0, 1.0)
    # split at the kink r = rho
    if 0.0 < rho < cutoff:
        a = integrate_finite(f, 0.0, rho, spec)
        b = integrate_finite(f, rho, cutoff, spec)
        return a.value + b.value
    return integrate_finite(f, 0.0, cutoff, spec).value


def _free_resolvent_conv_general(h, kappa: float, x: Point, spec, decay_rate, prefactor, cutoff):
    """[R_lam * h](x) for general h via a 32x32 product rule on spheres."""
    rho = x.norm
    e1, e2, e3 = _orthonormal_frame(x if rho > 0 else Point((0.0, 0.0, 1.0)))
    m_phi = 32
    phis = [2.0 * math.pi * j / m_phi for j in range(m_phi)]

    def sphere_term(r: float) -> float:
        total = 0.0
        for mu, w in zip(_GL_X, _GL_W):
            st = math.sqrt(max(0.0, 1.0 - mu * mu))
            for phi in phis:
                d = st * math.cos(phi) * e1 + st * math.sin(phi) * e2 + mu * e3
                y = Point(tuple(r * d))
                sep = math.sqrt(sum((a - b) ** 2 for a, b in zip(x.coords, y.coords)))
                if sep < 1e-12:
                    continue
                kern = math.exp(-kappa * sep) / (_FOUR_PI * sep)
                total += w * kern * h(y)
        return total * (2.0 * math.pi / m_phi)

    def f(r: float) -> float:
        return sphere_term(r) * r * r

    if cutoff is None:
        target = spec.base_tol / 10.0
        arg = prefactor / (decay_rate * target)
        cutoff = max(math.log(arg) / decay_rate if arg > 1 else 1.0, 1.0)
    return integrate_finite(f, 0.0, cutoff, spec).value


def resolvent_apply(
    pi: PointInteraction,
    lam: float,
    h,
    x: Point,
    spec: QuadratureSpec = DEFAULT_SPEC,
    h_radial: bool = True,
    h_decay_rate: float = 1.0,
    h_prefactor: float = 1.0,
    h_cutoff: float | None = None,
) -> float:
    """(lam + A_beta)^(-1) h at x, n = 3:

        u(x) = [R_lam * h](x) + c(beta, lam) R_lam(x) [R_lam * h](0),

    with R_lam(x) = e^{-sqrt(lam)|x|} / (4 pi |x|) and the coefficient of
    resolvent_coefficient.  The convolution reduces to a radial quadrature
    when h is radial; otherwise a 32-node product rule is used per sphere.
    """
    if pi.n != 3:
        raise DomainError("resolvent implemented for n = 3 only")
    if lam <= 0:
        raise DomainError("resolvent parameter must be positive")
    coeff = resolvent_coefficient(pi, lam)
    kappa = math.sqrt(lam)
    rho = x.norm
    if h_radial:
        conv_x = _free_resolvent_radial_conv(h, kappa, rho, spec, h_decay_rate, h_prefactor, h_cutoff)
    else:
        conv_x = _free_resolvent_conv_general(h, kappa, x, spec, h_decay_rate, h_prefactor, h_cutoff)
    if coeff == 0.0:
        return conv_x
    if rho < 1e-12:
        raise DomainError("rank-one term is singular at the origin")
    conv_0 = _free_resolvent_radial_conv(h, kappa, 0.0, spec, h_decay_rate, h_prefactor, h_cutoff) if h_radial else _free_resolvent_conv_general(h, kappa, Point((0.0, 0.0, 0.0)), spec, h_decay_rate, h_prefactor, h_cutoff)
    r_lam = math.exp(-kappa * rho) / (_FOUR_PI * rho)
    return conv_x + coeff * r_lam * conv_0


def _conj(z):
    return complex(z).conjugate()


def green_form(u: SingularDecomposition, v: SingularDecomposition) -> complex:
    """The Green bilinear form on a conjugate pair of decompositions,

        E(u,v) = a0 conj(g(0)) - sum_i a_i conj(D_i g(0))
                 - f(0) conj(b0) + sum_i D_i f(0) conj(b_i),

    where u = a0 G_n + sum a_i D_i G_n + f and v = b0 G_n + sum b_i D_i G_n + g.
    Point data is only required where its paired coefficient is nonzero.
    """
    if u.ctx.n != v.ctx.n:
        raise ContractViolationError("green_form needs matching dimensions")
    if abs(u.ctx.q - v.ctx.p) > 1e-9 * max(1.0, v.ctx.p):
        raise ContractViolationError("green_form needs conjugate exponents")
    total = 0.0 + 0.0j
    if u.c0 != 0:
        if v.f0 is None:
            raise ContractViolationError("g(0) required by nonzero a0")
        total += u.c0 * _conj(v.f0)
    if any(ci != 0 for ci in u.c):
        if v.grad_f0 is None:
            raise ContractViolationError("grad g(0) required by nonzero a_i")
        total -= sum(ai * _conj(gi) for ai, gi in zip(u.c, v.grad_f0))
    if v.c0 != 0:
        if u.f0 is None:
            raise ContractViolationError("f(0) required by nonzero b0")
        total -= u.f0 * _conj(v.c0)
    if any(ci != 0 for ci in v.c):
        if u.grad_f0 is None:
            raise ContractViolationError("grad f(0) required by nonzero b_i")
        total += sum(fi * _conj(bi) for fi, bi in zip(u.grad_f0, v.c))
    return total


def adjoint_parameter(beta):
    """The adjoint boundary parameter: complex conjugation, with inf -> inf."""
    try:
        if math.isinf(abs(beta)):
            return beta
    except (TypeError, OverflowError):
        pass
    return complex(beta).conjugate() if isinstance(beta, complex) else beta


def domain_membership_1d(
    d: SingularDecomposition, B, tol: float = 1e-9
) -> bool:
    """Membership in the n=1 extension domain defined by a 2x2 matrix B:

        c0 = B[0][0] f(0) + B[0][1] f'(0)
        c1 = B[1][0] f(0) + B[1][1] f'(0)
    """
    if d.ctx.n != 1 or len(d.c) != 1 or d.f0 is None or not d.grad_f0:
        raise ContractViolationError("need a full n=1 decomposition")
    B = np.asarray(B, dtype=complex)
    f0, f1 = d.f0, d.grad_f0[0]
    scale = max(1.0, abs(d.c0), abs(d.c[0]), abs(f0), abs(f1))
    ok0 = abs(d.c0 - (B[0, 0] * f0 + B[0, 1] * f1)) <= tol * scale
    ok1 = abs(d.c[0] - (B[1, 0] * f0 + B[1, 1] * f1)) <= tol * scale
    return bool(ok0 and ok1)
