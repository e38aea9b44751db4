"""Theta and eta functions, quadratic-residue symbols, and scalar automorphy factors.

Conventions (multiplicative variables q = e^{2*pi*i*tau}, z = e^{2*pi*i*nu}):

    theta10(q, z) = sum_m q^{(m^2-m)/2} z^{-m}
                  = prod_{m>=0}(1+z^{-1}q^m) prod_{m>=1}(1+z q^m) prod_{m>=1}(1-q^m)
    theta11(q, z) = sum_m q^{(m^2-m)/2} (-z)^{-m}
    theta00(q, z) = sum_m q^{m^2/2} z^m = theta10(q, z q^{-1/2})
    eta(q)        = q^{1/24} prod_{m>=1}(1-q^m)
    theta_rl(r, l): sum over j in Z + r/(2l) of q^{l j^2} z^{l j}
                  = z^{r/2} q^{r^2/(4l)} theta00(q^{2l}, z^l q^r)

theta11 vanishes exactly on nu in Z + Z*tau; points within DELTA_POLE of that
lattice return an exact 0 so downstream residue formulas never divide by a tiny
nonzero value.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .numcore import (
    DELTA_POLE,
    DomainError,
    SubgroupError,
    Tolerance,
    UndefinedSymbolError,
    _tol,
    gaussian_series_cutoff,
    lattice_distance,
    sqrt_neg_i_tau,
)

_IPI = 1j * math.pi


@dataclass(frozen=True)
class ThetaKind:
    """Selector for eval_theta: one of the four classical kinds, eta, or a
    higher-level theta with index r at level >= 1 (r is reduced mod 2*level)."""

    name: str
    r: int = 0
    level: int = 1

    _NAMES = ("theta00", "theta10", "theta11", "eta", "higher")

    def __post_init__(self):
        if self.name not in self._NAMES:
            raise DomainError(f"unknown theta kind {self.name!r}")
        if self.name == "higher" and self.level < 1:
            raise DomainError("higher-level theta needs level >= 1")


def _require_upper(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError(f"tau={tau} must have Im(tau) > 0")
    return tau


def _reduce_mod_tau(tau: complex, nu: complex) -> tuple[complex, int, int]:
    """nu = nu0 + a + b*tau with |Im nu0| <= Im(tau)/2 and |Re nu0| <= 1/2."""
    nu = complex(nu)
    b = round(nu.imag / tau.imag)
    nu0 = nu - b * tau
    a = round(nu0.real)
    nu0 -= a
    return nu0, a, b


def theta00(tau: complex, nu: complex = 0j, tol: Tolerance | None = None) -> complex:
    """theta(q, z) = sum_m q^{m^2/2} z^m with certified series tail."""
    tau = _require_upper(tau)
    tol = _tol(tol)
    nu0, _, b = _reduce_mod_tau(tau, nu)
    # theta00(nu0 + b*tau) = q^{-b^2/2} x0^{-b} theta00(nu0)
    prefactor = cmath.exp(-_IPI * tau * b * b - 2 * _IPI * b * nu0)
    alpha = math.pi * tau.imag
    beta = 2 * math.pi * abs(nu0.imag)
    M = gaussian_series_cutoff(alpha, beta, tol.series_tail_bound)
    acc = 0j
    for m in range(-M, M + 1):
        acc += cmath.exp(_IPI * tau * m * m + 2 * _IPI * m * nu0)
    return prefactor * acc


def _theta1x(tau: complex, nu: complex, tol: Tolerance, signed: bool) -> complex:
    """Series for theta10 (signed=False) / theta11 (signed=True)."""
    nu0, _, b = _reduce_mod_tau(tau, nu)
    # theta1x(nu0 + b*tau) = (+-1)^b q^{-(b^2+b)/2} x0^{-b} theta1x(nu0)
    prefactor = cmath.exp(-_IPI * tau * (b * b + b) - 2 * _IPI * b * nu0)
    if signed and b % 2:
        prefactor = -prefactor
    alpha = math.pi * tau.imag
    beta = math.pi * tau.imag + 2 * math.pi * abs(nu0.imag)
    M = gaussian_series_cutoff(alpha, beta, tol.series_tail_bound)
    acc = 0j
    for m in range(-M, M + 1):
        term = cmath.exp(_IPI * tau * (m * m - m) - 2 * _IPI * m * nu0)
        if signed and m % 2:
            term = -term
        acc += term
    return prefactor * acc


def theta10(tau: complex, nu: complex = 0j, tol: Tolerance | None = None) -> complex:
    """theta_{1,0}(q, z) = sum_m q^{(m^2-m)/2} z^{-m}."""
    return _theta1x(_require_upper(tau), complex(nu), _tol(tol), signed=False)


def theta11(tau: complex, nu: complex = 0j, tol: Tolerance | None = None) -> complex:
    """theta_{1,1}(q, z); returns exact 0 when nu is within DELTA_POLE of Z + Z*tau."""
    tau = _require_upper(tau)
    if lattice_distance(nu, tau) < DELTA_POLE:
        return 0j
    return _theta1x(tau, complex(nu), _tol(tol), signed=True)


def _theta_product(tau: complex, nu: complex, tol: Tolerance, signed: bool) -> complex:
    """Triple-product forms of theta10/theta11 (cross-check route)."""
    nu0, _, b = _reduce_mod_tau(tau, nu)
    prefactor = cmath.exp(-_IPI * tau * (b * b + b) - 2 * _IPI * b * nu0)
    if signed and b % 2:
        prefactor = -prefactor
    q = cmath.exp(2 * _IPI * tau)
    zi = cmath.exp(-2 * _IPI * nu0)
    z = cmath.exp(2 * _IPI * nu0)
    s = -1.0 if signed else 1.0
    N = max(8, math.ceil(math.log(tol.series_tail_bound) / math.log(abs(q))) + 2)
    acc = 1.0 + s * zi
    qm = 1.0 + 0j
    for _ in range(1, N + 1):
        qm *= q
        acc *= (1.0 + s * zi * qm) * (1.0 + s * z * qm) * (1.0 - qm)
    return prefactor * acc


def theta10_product(tau: complex, nu: complex = 0j, tol: Tolerance | None = None) -> complex:
    return _theta_product(_require_upper(tau), complex(nu), _tol(tol), signed=False)


def theta11_product(tau: complex, nu: complex = 0j, tol: Tolerance | None = None) -> complex:
    tau = _require_upper(tau)
    if lattice_distance(nu, tau) < DELTA_POLE:
        return 0j
    return _theta_product(tau, complex(nu), _tol(tol), signed=True)


def eval_eta(tau: complex, tol: Tolerance | None = None) -> complex:
    """Dedekind eta, q^{1/24} prod_{m>=1} (1-q^m), tail below tol.series_tail_bound."""
    tau = _require_upper(tau)
    tol = _tol(tol)
    q = cmath.exp(2 * _IPI * tau)
    aq = abs(q)
    N = max(8, math.ceil(math.log(tol.series_tail_bound * (1 - aq)) / math.log(aq)) + 2)
    acc = cmath.exp(_IPI * tau / 12)
    qm = 1.0 + 0j
    for _ in range(1, N + 1):
        qm *= q
        acc *= 1.0 - qm
    return acc


def theta_rl(
    r: int,
    level: int,
    tau: complex,
    nu: complex = 0j,
    tol: Tolerance | None = None,
    form: str = "theta",
) -> complex:
    """Higher-level theta theta_{r,level}(q, z); r is reduced mod 2*level first."""
    tau = _require_upper(tau)
    if level < 1:
        raise DomainError("level must be >= 1")
    r = r % (2 * level)
    if form == "theta":
        # z^{r/2} q^{r^2/(4 level)} theta00(q^{2 level}, z^level q^r)
        pref = cmath.exp(_IPI * r * nu + _IPI * tau * r * r / (2 * level))
        return pref * theta00(2 * level * tau, level * nu + r * tau, tol)
    if form == "series":
        tol = _tol(tol)
        rho = r / (2 * level)
        alpha = 2 * math.pi * tau.imag * level
        beta = 2 * math.pi * level * (abs(nu.imag) + 2 * rho * tau.imag + abs(nu.imag))
        M = gaussian_series_cutoff(alpha, beta, tol.series_tail_bound)
        acc = 0j
        for n in range(-M, M + 1):
            j = n + rho
            acc += cmath.exp(2 * _IPI * tau * level * j * j + 2 * _IPI * level * nu * j)
        return acc
    raise DomainError(f"unknown form {form!r}")


def eval_theta(kind: ThetaKind, tau: complex, nu: complex = 0j, tol: Tolerance | None = None) -> complex:
    """Dispatch on a ThetaKind; the eta kind ignores nu."""
    if kind.name == "theta00":
        return theta00(tau, nu, tol)
    if kind.name == "theta10":
        return theta10(tau, nu, tol)
    if kind.name == "theta11":
        return theta11(tau, nu, tol)
    if kind.name == "eta":
        return eval_eta(tau, tol)
    return theta_rl(kind.r, kind.level, tau, nu, tol)


def theta11_derivative_at_lattice(tau: complex, n: int, tol: Tolerance | None = None) -> complex:
    """d theta11(q, z)/dz at z = q^n:  (-1)^n q^{-1/8} eta(q)^3 q^{-n^2/2 - 3n/2}."""
    tau = _require_upper(tau)
    eta3 = eval_eta(tau, tol) ** 3
    val = eta3 * cmath.exp(-_IPI * tau / 4 + 2 * _IPI * tau * (-n * n / 2 - 1.5 * n))
    return -val if n % 2 else val


def jacobi_symbol(c: int, d: int) -> int:
    """Quadratic-residue symbol (c|d) for odd positive prime d, extended
    multiplicatively to all d (Kronecker convention); (0|+-1) = 1."""
    if c % 2 == 0 and d % 2 == 0:
        raise UndefinedSymbolError(f"({c}|{d}) undefined: both arguments even")
    a, n = c, d
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def zeta_cd(c: int, d: int) -> complex:
    """The 8th root of unity in the theta multiplier for a bottom row (c, d):
    e^{i*pi*(d-1)/4} (c | |d|) for even c, e^{-i*pi*c/4} (d | c) for odd c.

    Rows with c < 0 are reduced through zeta_{c,d} = i * zeta_{-c,-d}, forced by
    the principal branch: for Im(w) < 0, sqrt(-w) = i*sqrt(w), and theta00 is
    even in nu, so the multipliers of (c, d) and (-c, -d) must compose to 1.
    """
    if c % 2 == 0 and d % 2 == 0:
        raise UndefinedSymbolError(f"zeta_({c},{d}) undefined: c and d both even")
    if c < 0:
        return 1j * zeta_cd(-c, -d)
    if c % 2 == 0:
        return cmath.exp(_IPI * (d - 1) / 4) * jacobi_symbol(c, abs(d))
    return cmath.exp(-_IPI * c / 4) * jacobi_symbol(d, c)


def _entries(gamma) -> tuple[int, int, int, int]:
    """Accept a ModularMatrix-like object or a 4-tuple (a, b, c, d)."""
    if hasattr(gamma, "a"):
        e = (gamma.a, gamma.b, gamma.c, gamma.d)
    else:
        e = tuple(gamma)
    a, b, c, d = (int(v) for v in e)
    if a * d - b * c != 1:
        raise SubgroupError(f"matrix {e} has determinant != 1")
    return a, b, c, d


def in_gamma_1_2(gamma) -> bool:
    a, b, c, d = _entries(gamma)
    return (a * b) % 2 == 0 and (c * d) % 2 == 0


def mumford_automorphy(gamma, tau: complex, nu: complex = 0j) -> complex:
    """Scalar factor j with j * theta00(gamma.(tau, nu)) = theta00(tau, nu) on
    the subgroup with a*b and c*d even:

        j = zeta_{c,d}^{-1} (c*tau+d)^{-1/2} e^{-i*pi*c*nu^2/(c*tau+d)}
    """
    a, b, c, d = _entries(gamma)
    if not in_gamma_1_2(gamma):
        raise SubgroupError(f"({a},{b};{c},{d}) has odd a*b or c*d")
    tau = _require_upper(tau)
    j = c * tau + d
    return cmath.exp(-_IPI * c * nu * nu / j) / (zeta_cd(c, d) * cmath.sqrt(j))


def eta_cubed_abcd(gamma, tau: complex, tol: Tolerance | None = None) -> complex:
    """eta(gamma*tau)^3 through the closed form

        zeta_{c,d} (c*tau+d)^{3/2}
        e^{i*pi*(a+c)(b+d)/4 + i*pi/4 - i*pi*(a+c)/2} eta(tau)^3

    valid for a*b and c*d even."""
    a, b, c, d = _entries(gamma)
    if not in_gamma_1_2(gamma):
        raise SubgroupError(f"({a},{b};{c},{d}) has odd a*b or c*d")
    tau = _require_upper(tau)
    j = c * tau + d
    phase = cmath.exp(_IPI * ((a + c) * (b + d) / 4 + 0.25 - (a + c) / 2))
    return zeta_cd(c, d) * (j * cmath.sqrt(j)) * phase * eval_eta(tau, tol) ** 3


__all__ = [
    "ThetaKind",
    "eval_eta",
    "eval_theta",
    "theta00",
    "theta10",
    "theta11",
    "theta10_product",
    "theta11_product",
    "theta_rl",
    "theta11_derivative_at_lattice",
    "jacobi_symbol",
    "zeta_cd",
    "mumford_automorphy",
    "eta_cubed_abcd",
    "in_gamma_1_2",
    "sqrt_neg_i_tau",
]
