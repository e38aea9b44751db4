"""The companion special functions phi and Phi of the Appell S-transform.

Primary route is the Gaussian sinh-ratio integral (pole-free on the real line)

    phi(tau, mu) = -(1/2) int_R dx e^{-pi x^2}
                   sinh(pi x sqrt(-i tau) (1 + 2 mu/tau)) / sinh(pi x sqrt(-i tau)),
    Phi(tau, mu) = phi(tau, mu) - i / (2 sqrt(-i tau)).

The R - i0 form is a documented cross-check only (its integrand has a pole at
x = 0); it is reproduced here through Phi = phi - i/(2 sqrt(-i tau)) and the
principal-value contour integral implemented in the torus-integral module.

Before quadrature, mu is reduced with the exact translation laws so that the
reduced mu0 = xi + zeta*tau has |xi| <= 1/2, |zeta| <= 1/2, which bounds the
integrand growth.  The quadrature itself is analytic in tau on the whole upper
half-plane (the integrand's poles sit at least 45 degrees off the real axis);
the functional-equation tests pin down the numerically validated region, which
comfortably covers |Re tau| <= 6 Im(tau).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .numcore import (
    DomainError,
    Tolerance,
    _tol,
    gaussian_integral_cutoff,
    integrate_line,
    sqrt_neg_i_tau,
)

_IPI = 1j * math.pi
_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class PhiArg:
    """Argument pair (tau, mu) with tau in the upper half-plane."""

    tau: complex
    mu: complex = 0j

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise DomainError(f"tau={self.tau} must have Im(tau) > 0")


@dataclass(frozen=True)
class AsymptoticOrder:
    """Truncation orders for the double asymptotic series; capped because the
    expansions are asymptotic, not convergent."""

    n_max: int = 6
    j_max: int = 6

    def __post_init__(self):
        if not (0 <= self.n_max <= 30 and 0 <= self.j_max <= 30):
            raise DomainError("asymptotic orders must lie in 0..30")


def _arg(arg_or_tau, mu=None) -> PhiArg:
    if isinstance(arg_or_tau, PhiArg):
        return arg_or_tau
    return PhiArg(complex(arg_or_tau), 0j if mu is None else complex(mu))


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n by the defining recurrence sum_{k<=m} C(m+1,k) B_k = 0."""
    table = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * table[k]
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n < 0:
        raise DomainError("Bernoulli index must be >= 0")
    return _bernoulli_table(n)[n]


def erf_complex(z: complex) -> complex:
    """erf for complex argument: Maclaurin series for moderate |z|, Lentz
    continued fraction for erfc when Re(z) is large."""
    z = complex(z)
    if z.real < 0:
        return -erf_complex(-z)
    if abs(z) <= 3.0:
        term = z
        acc = z
        z2 = z * z
        for n in range(1, 120):
            term *= -z2 / n
            acc += term / (2 * n + 1)
            if abs(term) < 1e-18 * (1.0 + abs(acc)):
                break
        return 2.0 / _SQRT_PI * acc
    return 1.0 - erfc_complex(z)


def erfc_complex(z: complex) -> complex:
    """erfc for complex argument with Re(z) >= 0 handled by the Legendre
    continued fraction; elsewhere through the reflection erfc(-z) = 2 - erfc(z)."""
    z = complex(z)
    if z.real < 0:
        return 2.0 - erfc_complex(-z)
    if abs(z) <= 3.0:
        return 1.0 - erf_complex(z)
    # erfc(z) = e^{-z^2}/sqrt(pi) * 1/(z + 1/2/(z + 1/(z + 3/2/(z + ...))))
    # evaluated with the modified Lentz algorithm.
    tiny = 1e-300
    b = z
    c = 1e300
    d = 1.0 / b
    h = d
    for i in range(1, 300):
        a = i / 2.0
        b = z if i % 2 else complex(1.0)
        # continued fraction a_i/(b_i + ...) with alternating b
        d = b + a * d
        if abs(d) < tiny:
            d = tiny
        c = b + a / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return cmath.exp(-z * z) / _SQRT_PI * h


def _phi_quadrature(tau: complex, mu: complex, tol: Tolerance) -> complex:
    """Raw sinh-ratio quadrature, no argument reduction."""
    s = sqrt_neg_i_tau(tau)
    w = 1.0 + 2.0 * mu / tau
    a_coeff = math.pi * s * w
    b_coeff = math.pi * s
    growth = math.pi * abs(s) * (abs(w) + 1.0)
    X = gaussian_integral_cutoff(growth, tol.series_tail_bound)

    def integrand(x: float) -> complex:
        if x == 0.0:
            return w
        A = a_coeff * x
        B = b_coeff * x
        if abs(A.real) < 300.0 and abs(B.real) < 300.0 and abs(A.imag) < 1e6:
            return cmath.exp(-math.pi * x * x) * cmath.sinh(A) / cmath.sinh(B)
        # log-scaled form for large exponents: sinh(A)/sinh(B) written with the
        # dominant exponential factored out of each sinh
        sA = 1.0 if A.real >= 0 else -1.0
        expo = -math.pi * x * x + sA * A - B
        return (
            sA
            * cmath.exp(expo)
            * (1.0 - cmath.exp(-2.0 * sA * A))
            / (1.0 - cmath.exp(-2.0 * B))
        )

    # integrand is even in x, so -(1/2) int_R = -int_0^X
    return -integrate_line(integrand, 0.0, X, tol)


def _mu_reduction(tau: complex, mu: complex):
    """Split mu = mu0 + m*tau + n with |coefficients of mu0| <= 1/2 and return
    (mu0, rebuild) where rebuild(Phi(tau, mu0)) = Phi(tau, mu)."""
    mu = complex(mu)
    zeta = mu.imag / tau.imag
    m = round(zeta)
    mu_p = mu - m * tau
    xi = mu_p.real - (mu_p.imag / tau.imag) * tau.real
    n = round(xi)
    mu0 = mu_p - n

    def rebuild(phi0: complex) -> complex:
        # unit-lattice step: Phi(tau, mu0 + n) from Phi(tau, mu0)
        val = phi0
        if n != 0:
            pref, corr = _unit_shift(tau, mu0, n)
            val = pref * val + corr
        # tau-lattice step: Phi(tau, mu_p + m*tau) from Phi(tau, mu_p)
        if m != 0:
            _, corr = _tau_shift(tau, mu_p, m)
            val = val + corr
        return val

    return mu0, rebuild


def _tau_shift(tau: complex, mu: complex, m: int) -> tuple[complex, complex]:
    """(prefactor, correction) with Phi(tau, mu + m*tau) = prefactor*Phi(tau,mu) + correction."""
    if m > 0:
        corr = -sum(cmath.exp(-_IPI * (mu + j * tau) ** 2 / tau) for j in range(1, m + 1))
    else:
        corr = sum(cmath.exp(-_IPI * (mu - j * tau) ** 2 / tau) for j in range(0, -m))
    return 1.0 + 0j, corr


def _unit_shift(tau: complex, mu: complex, m: int) -> tuple[complex, complex]:
    """(prefactor, correction) with Phi(tau, mu + m) = prefactor*Phi(tau,mu) + correction."""
    s = sqrt_neg_i_tau(tau)
    if m > 0:
        pref = cmath.exp(-_IPI * m * m / tau - 2 * _IPI * m * mu / tau)
        corr = (1j / s) * sum(
            cmath.exp(_IPI * j * (j - 2 * m) / tau - 2 * _IPI * j * mu / tau)
            for j in range(1, m + 1)
        )
    else:
        mm = -m
        pref = cmath.exp(-_IPI * mm * mm / tau + 2 * _IPI * mm * mu / tau)
        corr = -(1j / s) * sum(
            cmath.exp(_IPI * j * (j - 2 * mm) / tau + 2 * _IPI * j * mu / tau)
            for j in range(0, mm)
        )
    return pref, corr


def eval_Phi(arg_or_tau, mu=None, tol: Tolerance | None = None) -> complex:
    """Phi(tau, mu) = phi(tau, mu) - i/(2 sqrt(-i tau)), with mu reduced to the
    fundamental cell of the (1, tau) lattice before quadrature."""
    arg = _arg(arg_or_tau, mu)
    tol = _tol(tol)
    mu0, rebuild = _mu_reduction(arg.tau, arg.mu)
    phi0 = _phi_quadrature(arg.tau, mu0, tol)
    Phi0 = phi0 - 0.5j / sqrt_neg_i_tau(arg.tau)
    return rebuild(Phi0)


def eval_phi_lower(arg_or_tau, mu=None, tol: Tolerance | None = None) -> complex:
    """phi(tau, mu): the sinh-ratio integral (equals Phi + i/(2 sqrt(-i tau)))."""
    arg = _arg(arg_or_tau, mu)
    return eval_Phi(arg, tol=tol) + 0.5j / sqrt_neg_i_tau(arg.tau)


def phi_special_value(tau: complex, m: int) -> complex:
    """Closed form of phi(tau, m*tau/2) for integer m (both signs)."""
    tau = complex(tau)
    if m >= 0:
        return -0.5 * sum(cmath.exp(-_IPI * tau * (m - 2 * j) ** 2 / 4) for j in range(0, m + 1))
    mm = -m
    return 0.5 * sum(cmath.exp(-_IPI * tau * (mm - 2 * j) ** 2 / 4) for j in range(1, mm))


def translate_Phi(arg_or_tau, mu=None, m: int = 1, direction: str = "tau-lattice") -> tuple[complex, complex]:
    """Exact one-sided translation law: returns (prefactor, correction) with

        Phi(tau, mu + m*tau) = prefactor*Phi(tau, mu) + correction   (tau-lattice)
        Phi(tau, mu + m)     = prefactor*Phi(tau, mu) + correction   (unit-lattice)
    """
    arg = _arg(arg_or_tau, mu)
    if m == 0:
        raise DomainError("translation step m must be nonzero")
    if direction in ("tau-lattice", "tau"):
        return _tau_shift(arg.tau, arg.mu, m)
    if direction in ("unit-lattice", "unit"):
        return _unit_shift(arg.tau, arg.mu, m)
    raise DomainError(f"unknown direction {direction!r}")


def s_transform_Phi(arg_or_tau, mu=None, tol: Tolerance | None = None) -> complex:
    """Value of Phi(-1/tau, mu/tau) assembled on the tau side:

        -i sqrt(-i tau) (e^{i pi mu^2/tau} Phi(tau, mu) + 1).
    """
    arg = _arg(arg_or_tau, mu)
    tau, m = arg.tau, arg.mu
    s = sqrt_neg_i_tau(tau)
    return -1j * s * (cmath.exp(_IPI * m * m / tau) * eval_Phi(arg, tol=tol) + 1.0)


def s_transform_Phi_second_form(arg_or_tau, mu=None, tol: Tolerance | None = None) -> complex:
    """The equivalent assembly -i sqrt(-i tau) e^{i pi mu^2/tau} Phi(tau, mu - tau)."""
    arg = _arg(arg_or_tau, mu)
    tau, m = arg.tau, arg.mu
    s = sqrt_neg_i_tau(tau)
    return -1j * s * cmath.exp(_IPI * m * m / tau) * eval_Phi(tau, m - tau, tol=tol)


def rescale_Phi(
    arg_or_tau,
    mu=None,
    factor: int = 2,
    m: int = 0,
    form: str = "phi-u",
    tol: Tolerance | None = None,
) -> complex:
    """Finite scaling sums for Phi.  Returns the stated sum, which equals:

    form="phi-u" (factor=p):          sum_b Phi(p^2 tau, p mu - b p tau)
                                      == Phi(tau, mu)
    form="phi-2p" (factor=l, any m):  sum_a e^{i pi a m/l} Phi(2l tau, 2l mu - a tau)
                                      == e^{i pi [m]^2/(2l tau) + 2 i pi mu [m]/tau}
                                         Phi(tau/(2l), mu + [m]/(2l)),  [m] = m mod 2l
    form="dual-scaling-m":            (1/2l) sum_a e^{2 i pi a mu/tau - i pi a m/l
                                         + i pi a^2/(2l tau)} Phi(tau/(2l), mu + a/(2l))
                                      == Phi(2l tau, 2l mu - [m] tau)
    """
    arg = _arg(arg_or_tau, mu)
    tau, mm = arg.tau, arg.mu
    if factor < 1:
        raise DomainError("scaling factor must be a positive integer")
    if form == "phi-u":
        p = factor
        return sum(eval_Phi(p * p * tau, p * mm - b * p * tau, tol=tol) for b in range(p))
    if form == "phi-2p":
        ell = factor
        return sum(
            cmath.exp(_IPI * a * m / ell) * eval_Phi(2 * ell * tau, 2 * ell * mm - a * tau, tol=tol)
            for a in range(2 * ell)
        )
    if form == "dual-scaling-m":
        ell = factor
        acc = 0j
        for a in range(2 * ell):
            phase = cmath.exp(
                2 * _IPI * a * mm / tau - _IPI * a * m / ell + _IPI * a * a / (2 * ell * tau)
            )
            acc += phase * eval_Phi(tau / (2 * ell), mm + a / (2 * ell), tol=tol)
        return acc / (2 * ell)
    raise DomainError(f"unknown scaling form {form!r}")


def st_relation_residual(tau: complex, mu: complex, tol: Tolerance | None = None) -> float:
    """Residual of the three-point relation tying Phi at tau, 1 - 1/tau, and
    tau - 1, obtained by composing the S-law with the half-shift T-law of the
    level-1 Appell function:

        i sqrt(-i tau) e^{i pi mu^2/tau} Phi(tau, mu)
        + e^{i pi/4} e^{i pi (mu+1/2)^2/(tau-1)} Phi(1 - 1/tau, mu/tau + 1/2)
        - i sqrt(-i tau) e^{i pi (mu+1/2)^2/(tau-1)} Phi(tau-1, mu+1/2) = 0.

    The e^{i pi/4} on the middle term is forced: without it the combination
    does not vanish (it is off by exactly that unit at every point).
    """
    tau, mu = complex(tau), complex(mu)
    s = sqrt_neg_i_tau(tau)
    t0 = 1j * s * cmath.exp(_IPI * mu * mu / tau) * eval_Phi(tau, mu, tol=tol)
    shared = cmath.exp(_IPI * (mu + 0.5) ** 2 / (tau - 1))
    t1 = cmath.exp(_IPI / 4) * shared * eval_Phi(1 - 1 / tau, mu / tau + 0.5, tol=tol)
    t2 = -1j * s * shared * eval_Phi(tau - 1, mu + 0.5, tol=tol)
    return abs(t0 + t1 + t2)


def _asymp_large_t_sum(t: float, y: complex, order: AsymptoticOrder) -> complex:
    """Partial sum of the t -> infinity expansion of phi(i t, i y)."""
    acc = -0.5 * cmath.exp(math.pi * y * y / t) * erfc_complex(-cmath.sqrt(math.pi / t) * y)
    B = _bernoulli_table(2 * (order.n_max + order.j_max + 1))
    for n in range(order.n_max + 1):
        for j in range(order.j_max + 1):
            b = B[2 * (j + n + 1)]
            coeff = (
                (-4.0) ** j
                * math.pi ** (2 * j + n + 1)
                * float(b)
                / ((j + n + 1) * math.factorial(2 * j + 1) * math.factorial(n))
            )
            acc -= coeff * y ** (2 * j + 1) / t ** (1.5 + 2 * j + n)
    return acc


def _asymp_small_t_sum(t: float, y: complex, order: AsymptoticOrder) -> complex:
    """Partial sum of the t -> 0 expansion of phi(i t, i y)."""
    gauss = cmath.exp(math.pi * y * y / t)
    acc = -0.5 * gauss + (0.5j / math.sqrt(t)) * erf_complex(1j * cmath.sqrt(math.pi / t) * y)
    B = _bernoulli_table(2 * (order.n_max + order.j_max + 1))
    inner = 0j
    for n in range(order.n_max + 1):
        for j in range(order.j_max + 1):
            b = B[2 * (j + n + 1)]
            coeff = (
                4.0 ** j
                * math.pi ** (2 * j + n + 1)
                * float(b)
                / ((j + n + 1) * math.factorial(n) * math.factorial(2 * j + 1))
            )
            inner += coeff * y ** (2 * j + 1) * t ** n
    return acc - gauss * inner


def phi_asymptotic(
    arg_or_tau,
    mu=None,
    regime: str = "large_t",
    order: AsymptoticOrder | None = None,
) -> complex:
    """Asymptotic value of phi(tau, mu) on the axis tau = i*t, mu = i*y (t > 0,
    y real).  The expected error is the magnitude of the first omitted term of
    the double series (the expansion is asymptotic, not convergent)."""
    arg = _arg(arg_or_tau, mu)
    order = order or AsymptoticOrder()
    tau, m = complex(arg.tau), complex(arg.mu)
    if abs(tau.real) > 1e-12 * abs(tau) or abs(m.real) > 1e-12 * max(1.0, abs(m)):
        raise DomainError("asymptotic expansions require tau = i*t, mu = i*y with real t, y")
    t, y = tau.imag, m.imag
    if regime == "large_t":
        return _asymp_large_t_sum(t, y, order)
    if regime == "small_t":
        return _asymp_small_t_sum(t, y, order)
    raise DomainError(f"unknown regime {regime!r}")


def asymptotic_first_omitted(t: float, y: float, regime: str, order: AsymptoticOrder) -> float:
    """Magnitude of the first omitted double-series term, the documented error scale."""
    n, j = order.n_max + 1, 0
    b = abs(float(bernoulli(2 * (j + n + 1))))
    coeff = 4.0 ** j * math.pi ** (2 * j + n + 1) * b / ((j + n + 1) * math.factorial(n))
    if regime == "large_t":
        return coeff * abs(y) ** (2 * j + 1) / t ** (1.5 + 2 * j + n)
    return coeff * abs(y) ** (2 * j + 1) * t ** n * math.exp(math.pi * y * y / t)


def sduality_asymptotic_residual(t: float, y: float, order: AsymptoticOrder | None = None) -> float:
    """Residual of the closing S-duality combination of the two expansions:

        [small-t sum at (1/t, -i y/t)] + i sqrt(t) e^{-pi y^2/t} [large-t sum at (t, y)]
        - ( -i sqrt(t)/2 - e^{-pi y^2/t}/2 )
    """
    order = order or AsymptoticOrder()
    left = _asymp_small_t_sum(1.0 / t, -1j * y / t, order)
    left += 1j * math.sqrt(t) * math.exp(-math.pi * y * y / t) * _asymp_large_t_sum(t, y, order)
    right = -0.5j * math.sqrt(t) - 0.5 * math.exp(-math.pi * y * y / t)
    return abs(left - right)


__all__ = [
    "PhiArg",
    "AsymptoticOrder",
    "bernoulli",
    "erf_complex",
    "erfc_complex",
    "eval_Phi",
    "eval_phi_lower",
    "phi_special_value",
    "translate_Phi",
    "s_transform_Phi",
    "s_transform_Phi_second_form",
    "st_relation_residual",
    "rescale_Phi",
    "phi_asymptotic",
    "asymptotic_first_omitted",
    "sduality_asymptotic_residual",
]
