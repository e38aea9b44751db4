"""Contour integrals on the torus a- and b-cycles with the stated pole
prescriptions.

The b-cycle runs from 0 to tau (optionally translated by alpha*tau); for the
Appell kernels the poles sit on the cycle and are bypassed by the +epsilon
prescription (a real shift inside the first K-argument).  The closed forms:

    a-cycle of theta00                          -> 1
    b-cycle of e^{i pi l^2/tau} theta00         -> i sqrt(-i tau)
    (c,d)-cycle of e^{i pi c l^2/(c tau+d)} theta00 -> (c tau+d)^{1/2} zeta_{c,d}^{-1}
    a-cycle of K_1                              -> 1
    b-cycle of the K_l kernel                   -> -i sqrt(-i tau/l) Phi(tau/l, mu)
    (c,d)-cycle of the K_1 kernel               -> the twisted-Phi r-sum

The (c,d) closed form for the K kernel is assembled from the root-of-unity
twisted kernel values (see the automorphy module); the plain
Phi(tau + d/c, mu + r d/c) form is its special case when every twist r*d/c is
below 1 and the contour translation alpha is small.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .numcore import (
    DomainError,
    EvalPoint,
    Tolerance,
    _tol,
    integrate_line,
    sqrt_neg_i_tau,
)
from .appell import AppellSpec, eval_K
from .phifun import eval_Phi
from .thetakit import theta00, zeta_cd

_IPI = 1j * math.pi


@dataclass(frozen=True)
class CycleSpec:
    """Which cycle to integrate: "a", "b", "b-shifted" (start at alpha*tau), or
    "cd" (from alpha*tau to alpha*tau + c*tau + d, cd even)."""

    cycle: str = "b"
    alpha: float = 0.0
    c: int = 1
    d: int = 0
    epsilon: float | None = None

    def __post_init__(self):
        if self.cycle not in ("a", "b", "b-shifted", "cd"):
            raise DomainError(f"unknown cycle {self.cycle!r}")
        if self.cycle == "cd":
            if self.c < 1:
                raise DomainError("cd-cycle needs c >= 1")
            if (self.c * self.d) % 2:
                raise DomainError("cd-cycle needs cd even")

    def eps(self, tau: complex) -> float:
        return 1e-3 * tau.imag if self.epsilon is None else self.epsilon


def cycle_integral_theta(spec: CycleSpec, tau: complex, tol: Tolerance | None = None) -> complex:
    """Torus cycle integral of theta00 with its Gaussian weight (smooth
    integrands; no prescription needed)."""
    tol = _tol(tol)
    if spec.cycle == "a":
        return integrate_line(lambda s: theta00(tau, s, tol), 0.0, 1.0, tol)
    if spec.cycle in ("b", "b-shifted"):
        start = spec.alpha * tau

        def fb(s: float) -> complex:
            lam = start + s * tau
            return cmath.exp(_IPI * lam * lam / tau) * theta00(tau, lam, tol)

        return tau * integrate_line(fb, 0.0, 1.0, tol)
    c, d = spec.c, spec.d
    start = spec.alpha * tau
    vec = c * tau + d

    def fcd(s: float) -> complex:
        lam = start + s * vec
        return cmath.exp(_IPI * c * lam * lam / (c * tau + d)) * theta00(tau, lam, tol)

    return vec * integrate_line(fcd, 0.0, 1.0, tol)


def cycle_integral_K(
    spec: CycleSpec,
    level: int,
    tau: complex,
    mu: complex,
    tol: Tolerance | None = None,
) -> complex:
    """Cycle integral of the Appell kernel with the +epsilon prescription.

    a-cycle  (level 1):  int_0^1 K_1(tau, lam - mu + i eps, mu) dlam
    b-cycle  (any level): int e^{i pi l (lam^2 - 2 lam mu)/tau}
                              K_l(tau, lam + eps - mu, mu) dlam over [a t, t + a t]
    cd-cycle (level 1):  int e^{i pi (lam^2 + 2 lam mu)/(tau + d/c)}
                              K_1(tau, -lam + eps - mu, mu) dlam
    """
    tol = _tol(tol)
    eps = spec.eps(tau)
    # the +epsilon prescriptions are limits; the limit value equals the
    # integral over the contour displaced by epsilon with the full integrand
    # (no pole is crossed while epsilon shrinks, so the displaced value is
    # exactly epsilon-independent)
    if spec.cycle == "a":
        if level != 1:
            raise DomainError("a-cycle integral is stated for level 1")

        def fa(s: float) -> complex:
            lam = s + 1j * eps
            return eval_K(AppellSpec(1, EvalPoint(tau, lam - mu, mu)), tol)

        return integrate_line(fa, 0.0, 1.0, tol)
    if spec.cycle in ("b", "b-shifted"):
        start = spec.alpha * tau + eps

        def fb(s: float) -> complex:
            lam = start + s * tau
            return cmath.exp(_IPI * level * (lam * lam - 2 * lam * mu) / tau) * eval_K(
                AppellSpec(level, EvalPoint(tau, lam - mu, mu)), tol
            )

        return tau * integrate_line(fb, 0.0, 1.0, tol)
    if level != 1:
        raise DomainError("cd-cycle integral is stated for level 1")
    c, d = spec.c, spec.d
    start = spec.alpha * tau - eps
    vec = c * tau + d

    def fcd(s: float) -> complex:
        lam = start + s * vec
        return cmath.exp(_IPI * (lam * lam + 2 * lam * mu) / (tau + d / c)) * eval_K(
            AppellSpec(1, EvalPoint(tau, -lam - mu, mu)), tol
        )

    return vec * integrate_line(fcd, 0.0, 1.0, tol)


def theta_cd_closed_form(c: int, d: int, tau: complex) -> complex:
    """i sqrt(-i (c tau + d)/c) * sum_{a=1}^{c} e^{-i pi a^2 d/c}: the Gaussian
    integral times the Gauss sum.  For coprime (c, d) this equals
    (c tau + d)^{1/2} zeta_{c,d}^{-1}; for non-coprime rows with cd even the
    Gauss sum can vanish and the zeta form does not apply."""
    if (c * d) % 2:
        raise DomainError("cd even required")
    gauss = sum(cmath.exp(-_IPI * a_ * a_ * d / c) for a_ in range(1, c + 1))
    return 1j * cmath.sqrt(-1j * (c * tau + d) / c) * gauss


def twisted_phi_value(beta: Fraction, tau: complex, w: complex, n_residues: int, tol=None) -> complex:
    """e^{i pi (b^2 - 2 b w)/tau} [Phi(tau, w - b) + (i/sqrt(-i tau)) * residue sum]
    with b = frac(beta); the twisted Gaussian kernel value (see the automorphy
    module for the derivation)."""
    s = sqrt_neg_i_tau(tau)
    b = float(beta - math.floor(beta))
    if n_residues >= 0:
        corr = sum(cmath.exp(_IPI * n * n / tau + 2 * _IPI * n * (w - b) / tau) for n in range(n_residues))
    else:
        corr = -sum(cmath.exp(_IPI * n * n / tau + 2 * _IPI * n * (w - b) / tau) for n in range(n_residues, 0))
    return cmath.exp(_IPI * (b * b - 2 * b * w) / tau) * (eval_Phi(tau, w - b, tol=tol) + (1j / s) * corr)


def kcd_phi_sum(
    c: int, d: int, tau: complex, mu: complex, alpha: float = 0.0, tol: Tolerance | None = None
) -> complex:
    """Closed form of the (c,d)-cycle K_1 integral:

        -i sqrt(-i (tau + d/c)) sum_{r=0}^{c-1} e^{-i pi r^2 d/c}
            T(r d/c; tau + d/c, mu)

    plus, for a translated contour, minus the residues e^{i pi (p^2+2 p mu)/(tau+d/c)}
    of kernel poles p = -(frac(r d/c) + n) crossed by the translation, i.e. with
    0 < frac(r d/c) + n < alpha * d/c.
    """
    if (c * d) % 2:
        raise DomainError("cd even required")
    tt = tau + d / c
    acc = 0j
    for r in range(c):
        beta = Fraction(r * d, c)
        bfrac = beta - math.floor(beta)
        acc += cmath.exp(-_IPI * r * r * d / c) * twisted_phi_value(beta, tt, mu, math.ceil(bfrac), tol)
    out = -1j * cmath.sqrt(-1j * tt) * acc
    # contour-translation residues (exact window bookkeeping)
    if alpha != 0.0 and d != 0:
        lo, hi = sorted((0.0, alpha * d / c))
        for r in range(c):
            bfrac = Fraction(r * d, c) - math.floor(Fraction(r * d, c))
            n = math.floor(lo - float(bfrac)) + 1
            while float(bfrac) + n < hi:
                if float(bfrac) + n > lo:
                    p = -(float(bfrac) + n)
                    sign = -1.0 if alpha * d > 0 else 1.0
                    out += sign * cmath.exp(-_IPI * r * r * d / c) * cmath.exp(
                        _IPI * (p * p + 2 * p * mu) / tt
                    )
                n += 1
    return out


def principal_value_phi(tau: complex, mu: complex, tol: Tolerance | None = None) -> complex:
    """Symmetric-excision principal value of

        (i/sqrt(-i tau)) pv-int_0^tau e^{i pi (lam^2 - 2 lam mu)/tau}
                                      K_1(tau, lam - mu, mu) dlam,

    which equals the sinh-form phi(tau, mu).  The kernel pole sits at both
    endpoints (one pole of the periodic integrand); excision of radius delta
    around it plus the quadratic local correction delta*(F(delta)+F(1-delta))
    gives an O(delta^3) truncation, and delta is halved until stable.
    """
    tol = _tol(tol)

    def F(s: float) -> complex:
        lam = s * tau
        return tau * cmath.exp(_IPI * (lam * lam - 2 * lam * mu) / tau) * eval_K(
            AppellSpec(1, EvalPoint(tau, lam - mu, mu)), tol
        )

    def pv(delta: float) -> complex:
        core = integrate_line(F, delta, 1.0 - delta, tol)
        return core + delta * (F(delta) + F(1.0 - delta))

    delta = 1e-2
    prev = pv(delta)
    for _ in range(6):
        delta /= 2
        cur = pv(delta)
        if abs(cur - prev) < 100 * tol.abs_tol:
            prev = cur
            break
        prev = cur
    return (1j / sqrt_neg_i_tau(tau)) * prev


__all__ = [
    "CycleSpec",
    "theta_cd_closed_form",
    "cycle_integral_theta",
    "cycle_integral_K",
    "twisted_phi_value",
    "kcd_phi_sum",
    "principal_value_phi",
]
