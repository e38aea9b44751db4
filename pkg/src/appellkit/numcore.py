"""Scalar conventions, branch cuts, integer utilities, and adaptive quadrature.

Everything here is pure: no global mutable state, safe for concurrent use.
All complex arguments are "additive": a point (tau, nu, mu) corresponds to the
multiplicative variables q = e^{2*pi*i*tau}, x = e^{2*pi*i*nu}, y = e^{2*pi*i*mu}.
Fractional powers such as x**(1/2) are always taken as e^{pi*i*nu}, so no branch
ambiguity ever enters the evaluators.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

#: Default distance (in the nu+mu plane) below which evaluation near a pole
#: lattice is rejected instead of returning a huge value.
DELTA_POLE = 1e-6


class DomainError(ValueError):
    """Argument outside the analytic domain (e.g. Im(tau) <= 0)."""


class PoleProximityError(DomainError):
    """Evaluation point closer than delta_pole to a pole lattice."""


class RegionError(ValueError):
    """Input violates a convergence-region precondition such as |q| < |xy| < 1."""


class SubgroupError(ValueError):
    """Matrix not in the required congruence subgroup."""


class UndefinedSymbolError(ValueError):
    """Quadratic-residue symbol requested for an undefined argument pair."""


class CoprimalityError(ValueError):
    """Scaling parameters required to be coprime are not."""


class LabelError(ValueError):
    """Character label outside its admissible range."""


class SingularMatrixError(ValueError):
    """A representation matrix that must be invertible is numerically singular."""


class ConvergenceError(RuntimeError):
    """Series or iteration failed to meet the requested tolerance.

    Carries the best estimate and the achieved error bound.
    """

    def __init__(self, message: str, estimate: complex = 0j, bound: float = math.inf):
        super().__init__(message)
        self.estimate = estimate
        self.bound = bound


class QuadratureError(ConvergenceError):
    """Adaptive quadrature did not converge; .estimate and .bound are set."""


@dataclass(frozen=True)
class Tolerance:
    """Error budget shared by series evaluators and quadrature.

    series_tail_bound is the certified bound on every truncated series tail and
    must not exceed abs_tol/10 so that composite expressions keep a margin.
    """

    abs_tol: float = 1e-11
    rel_tol: float = 1e-11
    series_tail_bound: float = 1e-12

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.series_tail_bound > 0):
            raise DomainError("tolerances must be strictly positive")
        if self.series_tail_bound > self.abs_tol / 10 * (1 + 1e-15):
            raise DomainError("series_tail_bound must be <= abs_tol/10")


DEFAULT_TOL = Tolerance()


def _tol(tol: Tolerance | None) -> Tolerance:
    return DEFAULT_TOL if tol is None else tol


@dataclass(frozen=True)
class EvalPoint:
    """The universal argument (tau, nu, mu) with tau in the upper half-plane."""

    tau: complex
    nu: complex = 0j
    mu: complex = 0j

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise DomainError(f"tau={self.tau} must have Im(tau) > 0")

    def shifted(self, dtau: complex = 0, dnu: complex = 0, dmu: complex = 0) -> "EvalPoint":
        return EvalPoint(self.tau + dtau, self.nu + dnu, self.mu + dmu)


class BranchConvention:
    """Principal square root with argument in (-pi/2, pi/2], applied to (-i*tau)
    and to (c*tau + d).

    For tau in the upper half-plane, -i*tau lies in the right half-plane and
    c*tau + d (c > 0) in the upper half-plane, so the principal branch is
    unambiguous; sqrt(-i*tau) is positive real on the imaginary axis tau = i*t.
    Powers like (c*tau+d)**(3/2) are formed as (c*tau+d) * sqrt(c*tau+d) to keep
    the branch consistent.
    """

    @staticmethod
    def sqrt(z: complex) -> complex:
        return cmath.sqrt(z)

    @staticmethod
    def pow_3_2(z: complex) -> complex:
        return z * cmath.sqrt(z)


def sqrt_neg_i_tau(tau: complex) -> complex:
    """Principal branch of sqrt(-i*tau); positive real for tau on i*R_+."""
    if complex(tau).imag <= 0:
        raise DomainError(f"tau={tau} must have Im(tau) > 0")
    return cmath.sqrt(-1j * tau)


def mod_floor(x: int, p: int) -> tuple[int, int]:
    """Return (remainder, quotient) with x = p*quotient + remainder, 0 <= remainder < p."""
    if p < 1:
        raise DomainError("modulus p must be >= 1")
    q = x // p
    return x - p * q, q


def rbar(ell: int, u: int, n: int) -> int:
    """floor(ell*n/u) in exact integer arithmetic."""
    return (ell * n) // u


def lattice_distance(z: complex, tau: complex) -> float:
    """Distance from z to the lattice Z*tau + Z."""
    z = complex(z)
    tau = complex(tau)
    a = z.imag / tau.imag
    m0 = math.floor(a)
    best = math.inf
    for m in range(m0 - 2, m0 + 3):
        w = z - m * tau
        n = round(w.real)
        best = min(best, abs(w - n))
    return best


def one_minus_exp2pi(w: complex) -> complex:
    """1 - e^{2*pi*i*w}, guarded against overflow for very negative Im(w)."""
    if w.imag < -50.0:
        # |e^{2 pi i w}| = e^{-2 pi Im w} would overflow; the '1' is negligible.
        return -cmath.exp(2j * math.pi * w)
    return 1.0 - cmath.exp(2j * math.pi * w)


def log_one_minus_exp2pi(w: complex) -> complex:
    """log(1 - e^{2*pi*i*w}) stable for all Im(w)."""
    if w.imag < -0.05:
        # 1 - e^z = -e^z (1 - e^{-z})
        return 1j * math.pi + 2j * math.pi * w + cmath.log(1.0 - cmath.exp(-2j * math.pi * w))
    return cmath.log(1.0 - cmath.exp(2j * math.pi * w))


def gaussian_series_cutoff(alpha: float, beta: float, tail: float) -> int:
    """Smallest M such that sum_{|m| >= M} e^{-alpha*m^2 + beta*|m|} < tail.

    alpha > 0 is the Gaussian decay rate, beta >= 0 the linear growth of the
    summand.  Uses the geometric-ratio bound once the ratio drops below 1.
    """
    if alpha <= 0:
        raise DomainError("gaussian cutoff needs alpha > 0")
    M = max(1, math.ceil(beta / alpha) + 1)
    while M < 100000:
        # ratio between consecutive terms at m >= M
        log_ratio = -alpha * (2 * M + 1) + beta
        if log_ratio < -0.1:
            log_t = -alpha * M * M + beta * M
            # two-sided sum bounded by 2 * t(M) / (1 - ratio)
            bound = 2.0 * math.exp(min(700.0, log_t)) / (1.0 - math.exp(log_ratio))
            if bound < tail:
                return M
        M += 1
    raise ConvergenceError("no admissible Gaussian cutoff found", bound=math.inf)


def gaussian_integral_cutoff(c: float, tail: float) -> float:
    """Smallest X with e^{-pi*X^2 + c*X} <= tail, used to truncate R-integrals."""
    L = max(1.0, math.log(1.0 / tail))
    c = max(0.0, c)
    return (c + math.sqrt(c * c + 4.0 * math.pi * L)) / (2.0 * math.pi) + 1.0


# Gauss-Legendre pair used for the adaptive panels: the 21-point rule is the
# estimate, |G21 - G10| the panel error.
_G10_NODES, _G10_WEIGHTS = np.polynomial.legendre.leggauss(10)
_G21_NODES, _G21_WEIGHTS = np.polynomial.legendre.leggauss(21)


def _panel(f, a: float, b: float) -> tuple[complex, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    lo = 0j
    for x, w in zip(_G10_NODES, _G10_WEIGHTS):
        lo += w * f(mid + half * x)
    hi = 0j
    for x, w in zip(_G21_NODES, _G21_WEIGHTS):
        hi += w * f(mid + half * x)
    lo *= half
    hi *= half
    return hi, abs(hi - lo)


def integrate_line_bounded(
    f,
    a: float,
    b: float,
    tol: Tolerance | None = None,
    max_panels: int = 4096,
) -> tuple[complex, float]:
    """Adaptive panel integration of a complex-valued f over the real interval [a, b].

    Returns (value, error_bound).  Deterministic: panels are split and summed
    left to right.  Raises QuadratureError (carrying the best estimate and the
    achieved bound) if the budget is exhausted before the tolerance is met.
    Callers must hand in integrands that are smooth on [a, b]; contours are
    shifted off poles before this is invoked.
    """
    tol = _tol(tol)
    if a == b:
        return 0j, 0.0
    length = abs(b - a)
    # magnitude scale from a coarse pass so that exponentially large integrands
    # are resolved to relative accuracy instead of an unreachable absolute one
    coarse, _ = _panel(f, a, b)
    scale = max(1.0, abs(coarse))
    target = max(tol.abs_tol, tol.rel_tol * scale)
    # (start, end, depth), processed LIFO with the right half pushed first
    stack = [(a, b, 0)]
    total = 0j
    err_total = 0.0
    panels = 0
    while stack:
        lo, hi, depth = stack.pop()
        value, err = _panel(f, lo, hi)
        scale = max(scale, abs(value))
        target = max(tol.abs_tol, tol.rel_tol * scale)
        panels += 1
        if panels > max_panels:
            raise QuadratureError(
                f"quadrature budget of {max_panels} panels exhausted",
                estimate=total + value,
                bound=err_total + err,
            )
        local_target = target * max(1e-3, (hi - lo) / length)
        if err <= local_target or depth >= 48:
            total += value
            err_total += err
        else:
            mid = 0.5 * (lo + hi)
            stack.append((mid, hi, depth + 1))
            stack.append((lo, mid, depth + 1))
    if err_total > 10 * target:
        raise QuadratureError(
            "quadrature error estimate above tolerance",
            estimate=total,
            bound=err_total,
        )
    return total, err_total


def integrate_line(f, a: float, b: float, tol: Tolerance | None = None) -> complex:
    """Adaptive line integral; see integrate_line_bounded for the contract."""
    return integrate_line_bounded(f, a, b, tol)[0]
