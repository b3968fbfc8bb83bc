"""Kernels of the theory: Macdonald functions K_nu, Bessel potentials G_n
(kernel of (1-Delta)^(-1)), their scaled variants and gradients, and the
free heat kernel P(t,x).

Closed forms are used where they exist (n in {1,3}, nu = +-1/2); everything
else is quadrature through the `quad` engine with certified tail truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, SingularityError
from .quad import DEFAULT_SPEC, QuadratureSpec, integrate_finite, integrate_halfline

__all__ = [
    "Point",
    "KernelValue",
    "macdonald_k",
    "macdonald_k_second",
    "bessel_potential",
    "bessel_potential_radial",
    "bessel_potential_direct",
    "bessel_potential_scaled",
    "grad_bessel_potential_norm",
    "grad_bessel_potential",
    "heat_kernel_free",
    "heat_kernel_free_radial",
]


@dataclass(frozen=True)
class Point:
    """A point of R^n in Cartesian coordinates."""

    coords: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def norm(self) -> float:
        return math.sqrt(math.fsum(c * c for c in self.coords))

    @staticmethod
    def radial(r: float, n: int) -> "Point":
        """The point (r, 0, ..., 0) in R^n."""
        return Point((float(r),) + (0.0,) * (n - 1))

    def __sub__(self, other: "Point") -> "Point":
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scaled(self, s: float) -> "Point":
        return Point(tuple(s * c for c in self.coords))


@dataclass(frozen=True)
class KernelValue:
    value: float
    error_estimate: float
    method: str  # "closed_form" | "quadrature"


def _closed(value: float) -> KernelValue:
    return KernelValue(value=value, error_estimate=0.0, method="closed_form")


def macdonald_k(nu: float, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> KernelValue:
    """K_nu(z) = int_0^inf exp(-z cosh u) cosh(nu u) du, z > 0.

    Dispatches to the elementary closed form sqrt(pi/2z) e^{-z} at
    nu = +-1/2.  The tail cutoff comes from the Gaussian-in-u bound
    exp(-z cosh u) <= exp(-z) exp(-z u^2 / 2).
    """
    if z <= 0:
        raise DomainError("macdonald_k requires z > 0")
    if abs(abs(nu) - 0.5) < 1e-14:
        return _closed(math.sqrt(math.pi / (2.0 * z)) * math.exp(-z))
    anu = abs(nu)
    # solve (z/2) u^2 - anu u >= L - z  for the truncation point
    big = math.log(10.0 / spec.base_tol)
    rhs = big - z
    if rhs <= 0:
        cutoff = 1.0
    else:
        cutoff = (anu + math.sqrt(anu * anu + 2.0 * z * rhs)) / z
        cutoff = min(max(cutoff, 1.0), 700.0)

    def f(u: float) -> float:
        a = z * math.cosh(u)
        # work at exponent level: e^{-a} cosh(nu u) = (e^{nu u - a} + e^{-nu u - a})/2
        out = 0.0
        for sgn in (1.0, -1.0):
            w = sgn * nu * u - a
            if w > -700.0:
                out += math.exp(w)
        return 0.5 * out

    res = integrate_finite(f, 0.0, cutoff, spec)
    return KernelValue(res.value, res.error_estimate, "quadrature")


def macdonald_k_second(nu: float, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> KernelValue:
    """The second integral representation,

        K_nu(z) = 1/2 (z/2)^nu int_0^inf t^{-nu-1} exp(-t - z^2/4t) dt,

    for nu >= 0; used as an independent cross-check of macdonald_k.
    """
    if z <= 0:
        raise DomainError("macdonald_k_second requires z > 0")
    if nu < 0:
        raise DomainError("macdonald_k_second requires nu >= 0")
    q = z * z / 4.0

    def f(t: float) -> float:
        w = -t - q / t
        if w < -700.0:
            return 0.0
        return t ** (-nu - 1.0) * math.exp(w)

    res = integrate_halfline(f, spec, decay_rate=0.5, prefactor=2.0)
    pref = 0.5 * (z / 2.0) ** nu
    return KernelValue(pref * res.value, pref * res.error_estimate, "quadrature")


def bessel_potential_radial(n: int, r: float, spec: QuadratureSpec = DEFAULT_SPEC) -> KernelValue:
    """G_n at radius r = |x|."""
    if n < 1:
        raise DomainError("dimension must be >= 1")
    if n == 1:
        return _closed(0.5 * math.exp(-abs(r)))
    if r < 1e-12:
        raise SingularityError(f"G_{n} is singular at the origin (|x|={r!r})")
    if n == 3:
        return _closed(math.exp(-r) / (4.0 * math.pi * r))
    kv = macdonald_k(n / 2.0 - 1.0, r, spec)
    pref = (2.0 * math.pi) ** (-n / 2.0) * r ** (1.0 - n / 2.0)
    return KernelValue(pref * kv.value, pref * kv.error_estimate, kv.method)


def bessel_potential(n: int, x: Point, spec: QuadratureSpec = DEFAULT_SPEC) -> KernelValue:
    """The Bessel potential G_n(x); singular at x = 0 for n >= 2."""
    return bessel_potential_radial(n, x.norm, spec)


def bessel_potential_direct(n: int, r: float, spec: QuadratureSpec = DEFAULT_SPEC) -> KernelValue:
    """G_n by its defining time integral int_0^inf e^{-r^2/4t - t} (4 pi t)^{-n/2} dt.

    Quadrature-only path, kept as an independent oracle against the
    K_{n/2-1} route and the n in {1,3} closed forms.
    """
    if n >= 2 and r < 1e-12:
        raise SingularityError("direct integral diverges at the origin")
    q = r * r / 4.0

    def f(t: float) -> float:
        w = -q / t - t
        if w < -700.0:
            return 0.0
        return math.exp(w) * (4.0 * math.pi * t) ** (-n / 2.0)

    res = integrate_halfline(f, spec, decay_rate=0.5, prefactor=1.0)
    return KernelValue(res.value, res.error_estimate, "quadrature")


def bessel_potential_scaled(
    n: int, lam: float, x: Point, spec: QuadratureSpec = DEFAULT_SPEC
) -> KernelValue:
    """G_{n,lam}(x) = G_n(sqrt(lam) x), the kernel of (lam - Delta)^(-1) scaling."""
    if lam <= 0:
        raise DomainError("scaling parameter must be positive")
    return bessel_potential_radial(n, math.sqrt(lam) * x.norm, spec)


def grad_bessel_potential_norm(
    n: int, x: Point, spec: QuadratureSpec = DEFAULT_SPEC
) -> KernelValue:
    """|grad G_n(x)| = (|x|/2) int_0^inf e^{-pi |x|^2/t - t/4pi} t^{-(n+2)/2} dt.

    (The |x|/2 prefactor is what differentiating the defining integral
    yields; it reproduces |grad G_3(1)| = 1/(2 pi e).)
    """
    if n < 2:
        raise DomainError("gradient norm integral defined for n >= 2")
    r = x.norm
    if r < 1e-12:
        raise SingularityError("gradient is singular at the origin")
    a = math.pi * r * r

    def f(t: float) -> float:
        w = -a / t - t / (4.0 * math.pi)
        if w < -700.0:
            return 0.0
        return math.exp(w) * t ** (-(n + 2.0) / 2.0)

    res = integrate_halfline(f, spec, decay_rate=1.0 / (8.0 * math.pi), prefactor=1.0)
    return KernelValue(0.5 * r * res.value, 0.5 * r * res.error_estimate, "quadrature")


def grad_bessel_potential(
    n: int, x: Point, spec: QuadratureSpec = DEFAULT_SPEC
) -> tuple[KernelValue, ...]:
    """Components D_i G_n(x), by differentiating under the time integral:

        D_i G_n(x) = int_0^inf (-x_i / 2t) e^{-|x|^2/4t - t} (4 pi t)^{-n/2} dt.
    """
    r = x.norm
    if r < 1e-12:
        raise SingularityError("gradient is singular at the origin")
    q = r * r / 4.0
    out = []
    for xi in x.coords:
        def f(t: float, xi=xi) -> float:
            w = -q / t - t
            if w < -700.0:
                return 0.0
            return (-xi / (2.0 * t)) * math.exp(w) * (4.0 * math.pi * t) ** (-n / 2.0)

        res = integrate_halfline(f, spec, decay_rate=0.5, prefactor=1.0 + abs(xi))
        out.append(KernelValue(res.value, res.error_estimate, "quadrature"))
    return tuple(out)


def heat_kernel_free_radial(n: int, t: float, r: float) -> float:
    """P(t, x) at radius r = |x|."""
    if t <= 0:
        raise DomainError("heat kernel requires t > 0")
    w = -r * r / (4.0 * t)
    if w < -700.0:
        return 0.0
    return (4.0 * math.pi * t) ** (-n / 2.0) * math.exp(w)


def heat_kernel_free(n: int, t: float, x: Point) -> float:
    """The free heat kernel P(t,x) = (4 pi t)^{-n/2} e^{-|x|^2/4t}."""
    return heat_kernel_free_radial(n, t, x.norm)
