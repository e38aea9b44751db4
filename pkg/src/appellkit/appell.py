"""Level-l Appell functions by three independent routes plus their functional
equations.

The defining series (multiplicative variables q = e^{2*pi*i*tau} etc.):

    K_l(q, x, y) = sum_{m in Z} q^{l m^2/2} x^{l m} / (1 - x y q^m),
    tau in H, mu + nu not in Z*tau + Z.

Routes: the series above (eval_K), the double series valid on |q| < |x*y| < 1
(eval_K_double), and the contour integral over a segment lifted into the strip
0 < Im(lambda) < Im(tau) (eval_K_contour).  The lift realizes the "+i0"
prescription: the integrand is 1-periodic in lambda, so the vertical edges of
the deformation cancel and any height in the pole-free strip gives the same
value.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .numcore import (
    DELTA_POLE,
    CoprimalityError,
    DomainError,
    EvalPoint,
    PoleProximityError,
    RegionError,
    Tolerance,
    _tol,
    gaussian_series_cutoff,
    integrate_line,
    lattice_distance,
    log_one_minus_exp2pi,
    one_minus_exp2pi,
)
from .thetakit import eval_eta, theta00, theta11

_IPI = 1j * math.pi


@dataclass(frozen=True)
class AppellSpec:
    """A level together with the evaluation point."""

    level: int
    point: EvalPoint

    def __post_init__(self):
        if self.level < 1:
            raise DomainError("Appell level must be a positive integer")


def spec(level: int, tau: complex, nu: complex, mu: complex) -> AppellSpec:
    return AppellSpec(level, EvalPoint(tau, nu, mu))


@dataclass(frozen=True)
class ThetaTerm:
    """One additive correction coefficient * theta00(theta_tau, theta_nu)."""

    coefficient: complex
    theta_level: int
    theta_tau: complex
    theta_nu: complex

    def value(self, tol: Tolerance | None = None) -> complex:
        return self.coefficient * theta00(self.theta_tau, self.theta_nu, tol)


@dataclass(frozen=True)
class TranslationResult:
    """K_l(translated point) = prefactor * K_l(base point) + sum of theta terms."""

    base: AppellSpec
    translated_point: EvalPoint
    prefactor: complex
    theta_corrections: tuple[ThetaTerm, ...]

    def reconstruct(self, tol: Tolerance | None = None) -> complex:
        acc = self.prefactor * eval_K(self.base, tol)
        for term in self.theta_corrections:
            acc += term.value(tol)
        return acc


@dataclass(frozen=True)
class RescaleResult:
    """Sum of coefficient * K(sub-spec) terms plus theta terms, reproducing the target."""

    k_terms: tuple[tuple[complex, AppellSpec], ...]
    theta_terms: tuple[ThetaTerm, ...] = field(default_factory=tuple)

    def reconstruct(self, tol: Tolerance | None = None) -> complex:
        acc = 0j
        for coeff, sub in self.k_terms:
            acc += coeff * eval_K(sub, tol)
        for term in self.theta_terms:
            acc += term.value(tol)
        return acc


def _reduce(level: int, tau: complex, nu: complex, mu: complex):
    """Exact argument reduction; returns (nu0, mu0, prefactor) with
    K(tau, nu, mu) = prefactor * K(tau, nu0, mu0).

    Order: nu, mu mod 1; nu mod tau (quasiperiodicity factor); then the
    antidiagonal integer shift by m/l, which is free of corrections.
    """
    nu = complex(nu) - round(complex(nu).real)
    mu = complex(mu) - round(complex(mu).real)
    n = round(nu.imag / tau.imag)
    nu0 = nu - n * tau
    prefactor = cmath.exp(-_IPI * level * tau * n * n - 2 * _IPI * level * n * nu0)
    m = round(nu0.real * level)
    nu0 -= m / level
    mu0 = mu + m / level
    return nu0, mu0, prefactor


def _series_value(level: int, tau: complex, nu: complex, mu: complex, tail: float):
    """Symmetric m-sum with a certified tail bound; no argument reduction here."""
    dist = lattice_distance(nu + mu, tau)
    if dist < DELTA_POLE:
        raise PoleProximityError(
            f"nu+mu={nu + mu} is within {dist:.2e} of the pole lattice Z*tau+Z"
        )
    t = tau.imag
    alpha = math.pi * level * t
    beta = 2 * math.pi * level * abs(nu.imag)
    M = gaussian_series_cutoff(alpha, beta, tail)
    # beyond the near-pole band every denominator is bounded away from 0
    M = max(8, M, math.ceil((1.0 + abs((nu + mu).imag)) / t) + 1)
    acc = 0j
    for m in range(-M, M + 1):
        expo = _IPI * level * tau * m * m + 2 * _IPI * level * m * nu
        acc += cmath.exp(expo - log_one_minus_exp2pi(nu + mu + m * tau))
    # tail: |terms| <= e^{-alpha m^2 + beta m} / (1 - e^{-2 pi}) for |m| > M
    log_t = -alpha * M * M + beta * M
    log_ratio = -alpha * (2 * M + 1) + beta
    bound = 2.0 * math.exp(min(700.0, log_t)) / (1.0 - math.exp(min(-0.1, log_ratio)))
    bound /= 1.0 - math.exp(-2 * math.pi)
    return acc, bound


def eval_K_bounded(spec: AppellSpec, tol: Tolerance | None = None) -> tuple[complex, float]:
    """Defining-series evaluation; returns (value, certified truncation bound)."""
    tol = _tol(tol)
    pt = spec.point
    nu0, mu0, pref = _reduce(spec.level, pt.tau, pt.nu, pt.mu)
    value, bound = _series_value(spec.level, pt.tau, nu0, mu0, tol.series_tail_bound)
    return pref * value, abs(pref) * bound


def eval_K(spec: AppellSpec, tol: Tolerance | None = None) -> complex:
    """K_l(tau, nu, mu) by the defining series after argument reduction."""
    return eval_K_bounded(spec, tol)[0]


def eval_K_double(
    level: int, tau: complex, nu: complex, mu: complex, tol: Tolerance | None = None
) -> complex:
    """Double-series route, valid for |q| < |x*y| < 1; the independent oracle.

    Sums q^{l m^2/2 + m n} x^{l m + n} y^n over the quadrant m,n >= 0 minus the
    quadrant m,n <= -1, each with geometric tail bounds in n.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError("Im(tau) must be positive")
    tol = _tol(tol)
    im_s = (nu + mu).imag
    if not (0.0 < im_s < tau.imag):
        raise RegionError(
            f"|q| < |xy| < 1 requires 0 < Im(nu+mu) < Im(tau); got Im={im_s}"
        )
    tail = tol.series_tail_bound
    t = tau.imag

    def row(m: int, sign: int) -> complex:
        # sign=+1: n >= 0; sign=-1: n <= -1
        pre = _IPI * level * tau * m * m + 2 * _IPI * level * m * nu
        ratio_log = sign * (2 * _IPI * (nu + mu) + 2 * _IPI * m * tau)
        acc = 0j
        n = 0 if sign > 0 else 1
        term = cmath.exp(pre + n * ratio_log) * (1 if sign > 0 else -1)
        r = abs(cmath.exp(ratio_log))
        while True:
            acc += term
            n += 1
            term *= cmath.exp(ratio_log)
            if abs(term) / max(1e-300, 1.0 - r) < tail:
                acc += term / (1.0 - cmath.exp(ratio_log))  # closed geometric tail
                break
            if n > 100000:
                raise RegionError("double series row failed to converge")
        return acc

    total = 0j
    m = 0
    while True:
        r_pos = row(m, +1)
        total += r_pos
        if m >= 4 and abs(r_pos) < tail:
            break
        m += 1
    m = -1
    while True:
        r_neg = row(m, -1)
        total += r_neg
        if m <= -4 and abs(r_neg) < tail:
            break
        m -= 1
    return total


def eval_K_contour(
    spec: AppellSpec, tol: Tolerance | None = None, delta_factor: float = 0.2
) -> complex:
    """Integral route: minus e^{-i*pi*tau/4} times the integral over
    lambda in [i*delta, 1 + i*delta] of

        theta00(l*tau, l*nu - lambda) * theta11(tau, nu+mu+lambda) * eta(tau)^3
        / (theta11(tau, nu+mu) * theta11(tau, lambda)).

    delta = delta_factor * Im(tau) keeps the contour inside the pole-free strip.
    """
    tol = _tol(tol)
    pt = spec.point
    tau, nu, mu = pt.tau, pt.nu, pt.mu
    if not (0.0 < delta_factor < 1.0):
        raise DomainError("delta_factor must lie in (0, 1)")
    delta = delta_factor * tau.imag
    ell = spec.level
    denom = theta11(tau, nu + mu, tol)
    if denom == 0:
        raise PoleProximityError("nu+mu on the pole lattice")
    const = -cmath.exp(-_IPI * tau / 4) * eval_eta(tau, tol) ** 3 / denom

    def integrand(s: float) -> complex:
        lam = s + 1j * delta
        return theta00(ell * tau, ell * nu - lam, tol) * theta11(tau, nu + mu + lam, tol) / theta11(tau, lam, tol)

    return const * integrate_line(integrand, 0.0, 1.0, tol)


def translate_K(
    spec: AppellSpec,
    n_antidiag: int | None = None,
    n_mu: int | None = None,
    n_nu: int | None = None,
) -> TranslationResult:
    """Exact lattice-translation law for K_l along one of the three families.

    n_nu:       K_l(tau, nu + n*tau, mu)          (quasiperiodic, no corrections)
    n_antidiag: K_l(tau, nu - n*tau/l, mu + n*tau/l)
    n_mu:       K_l(tau, nu, mu + n*tau)          (l distinct thetas per step)
    """
    chosen = [v for v in (n_antidiag, n_mu, n_nu) if v is not None]
    if len(chosen) != 1:
        raise DomainError("pass exactly one of n_antidiag, n_mu, n_nu")
    ell = spec.level
    pt = spec.point
    tau, nu, mu = pt.tau, pt.nu, pt.mu
    q_pow = lambda e: cmath.exp(2 * _IPI * tau * e)
    x_pow = lambda e: cmath.exp(2 * _IPI * nu * e)
    y_pow = lambda e: cmath.exp(2 * _IPI * mu * e)
    terms: list[ThetaTerm] = []

    if n_nu is not None:
        n = n_nu
        translated = pt.shifted(dnu=n * tau)
        prefactor = q_pow(-n * n * ell / 2) * x_pow(-n * ell)
        return TranslationResult(spec, translated, prefactor, ())

    if n_antidiag is not None:
        n = n_antidiag
        translated = pt.shifted(dnu=-n * tau / ell, dmu=n * tau / ell)
        prefactor = x_pow(n) * y_pow(n)
        if n > 0:
            rng, sign = range(1, n + 1), 1.0
        else:
            rng, sign = range(n + 1, 1), -1.0
        for r in rng:
            coeff = sign * x_pow(n - r) * y_pow(n - r)
            terms.append(ThetaTerm(coeff, ell, ell * tau, ell * nu - r * tau))
        return TranslationResult(spec, translated, prefactor, tuple(terms))

    n = n_mu
    translated = pt.shifted(dmu=n * tau)
    prefactor = q_pow(n * n * ell / 2) * y_pow(n * ell)
    j_range = range(0, n) if n > 0 else range(n, 0)
    sign = 1.0 if n > 0 else -1.0
    for j in j_range:
        outer = sign * q_pow(j * (2 * n - j) * ell / 2) * y_pow(j * ell)
        for r in range(ell):
            coeff = outer * x_pow(r) * y_pow(r) * q_pow((n - j) * r)
            terms.append(ThetaTerm(coeff, ell, ell * tau, ell * nu + r * tau))
    return TranslationResult(spec, translated, prefactor, tuple(terms))


def inversion_K(spec: AppellSpec, tol: Tolerance | None = None) -> tuple[complex, complex]:
    """Return (K_l(q, 1/x, 1/y), theta00(l*tau, l*nu)); the inversion law reads

        K_l(q, x, y) = -K_l(q, 1/x, 1/y) + theta00(q^l, x^l).
    """
    pt = spec.point
    reflected = eval_K(AppellSpec(spec.level, EvalPoint(pt.tau, -pt.nu, -pt.mu)), tol)
    theta_term = theta00(spec.level * pt.tau, spec.level * pt.nu, tol)
    return reflected, theta_term


def inversion_K_second_form(spec: AppellSpec, tol: Tolerance | None = None) -> complex:
    """-1/(xy) * K_l(q, x^{-1} q^{1/l}, y^{-1} q^{-1/l}), the second inversion form."""
    ell = spec.level
    pt = spec.point
    shifted = EvalPoint(pt.tau, -pt.nu + pt.tau / ell, -pt.mu - pt.tau / ell)
    pref = -cmath.exp(-2 * _IPI * (pt.nu + pt.mu))
    return pref * eval_K(AppellSpec(ell, shifted), tol)


def t_transform_K(spec: AppellSpec, tol: Tolerance | None = None) -> complex:
    """Value of K_l(tau+1, nu, mu) computed on the tau line: K_l(tau, nu, mu) for
    even l and K_l(tau, nu + 1/2, mu - 1/2) for odd l."""
    if spec.level % 2 == 0:
        return eval_K(spec, tol)
    pt = spec.point
    return eval_K(AppellSpec(spec.level, pt.shifted(dnu=0.5, dmu=-0.5)), tol)


def s_transform_K_rhs(spec: AppellSpec, phi_eval=None, tol: Tolerance | None = None) -> complex:
    """Right-hand side of the S-transform law:

        K_l(-1/tau, nu/tau, mu/tau)
          = tau e^{i*pi*l*(nu^2-mu^2)/tau} K_l(tau, nu, mu)
          + tau sum_{a=0}^{l-1} e^{i*pi*(l/tau)(nu + a*tau/l)^2}
                Phi(l*tau, l*mu - a*tau) theta00(l*tau, l*nu + a*tau).

    phi_eval(tau, mu) defaults to the quadrature evaluator of the companion
    special function.
    """
    if phi_eval is None:
        from .phifun import eval_Phi

        phi_eval = eval_Phi
    ell = spec.level
    pt = spec.point
    tau, nu, mu = pt.tau, pt.nu, pt.mu
    acc = tau * cmath.exp(_IPI * ell * (nu * nu - mu * mu) / tau) * eval_K(spec, tol)
    for a in range(ell):
        w = nu + a * tau / ell
        acc += (
            tau
            * cmath.exp(_IPI * ell * w * w / tau)
            * phi_eval(ell * tau, ell * mu - a * tau)
            * theta00(ell * tau, ell * nu + a * tau, tol)
        )
    return acc


def s_transform_K_rhs_alt(spec: AppellSpec, phi_eval=None, tol: Tolerance | None = None) -> complex:
    """Alternative S-transform assembly through Phi(tau/l, mu + a/l):

        tau e^{i*pi*l*(nu^2-mu^2)/tau} K_l(tau,nu,mu)
          + (tau/l) sum_{a=0}^{l-1} e^{i*pi*l*nu^2/tau + i*pi*a^2/(l*tau) + 2*i*pi*a*mu/tau}
            Phi(tau/l, mu + a/l) theta00(tau/l, nu - a/l).
    """
    if phi_eval is None:
        from .phifun import eval_Phi

        phi_eval = eval_Phi
    ell = spec.level
    pt = spec.point
    tau, nu, mu = pt.tau, pt.nu, pt.mu
    acc = tau * cmath.exp(_IPI * ell * (nu * nu - mu * mu) / tau) * eval_K(spec, tol)
    for a in range(ell):
        phase = cmath.exp(
            _IPI * ell * nu * nu / tau + _IPI * a * a / (ell * tau) + 2 * _IPI * a * mu / tau
        )
        acc += (tau / ell) * phase * phi_eval(tau / ell, mu + a / ell) * theta00(tau / ell, nu - a / ell, tol)
    return acc


def rescale_K(
    level: int,
    u: int,
    point: EvalPoint,
    form: str = "elementary",
    tol: Tolerance | None = None,
) -> RescaleResult:
    """Period-multiplication decompositions of K_l.

    form="elementary": K_l(q, x, y) as a u^2-term sum of K_l at nome q^{u^2}
    (any positive u).
    form="coprime": the alternative q^{u^2} decomposition with a finite theta
    correction sum restricted to u*r - l*s >= 1; requires gcd(l, u) = 1.
    form="blowup": the difference K_{2l}(q^{1/u}, x^{1/u}, y^{1/u}) -
    K_{2l}(q^{1/u}, x^{-1/u}, y^{1/u}) as a sum of K_{2l} pairs at nome q^u;
    requires gcd(l, u) = 1 (use blowup_lhs for the left side).
    """
    if u < 1:
        raise DomainError("u must be a positive integer")
    tau, nu, mu = point.tau, point.nu, point.mu
    q_pow = lambda e: cmath.exp(2 * _IPI * tau * e)
    x_pow = lambda e: cmath.exp(2 * _IPI * nu * e)
    y_pow = lambda e: cmath.exp(2 * _IPI * mu * e)
    ell = level

    if form == "elementary":
        k_terms = []
        for a in range(u):
            for b in range(u):
                coeff = q_pow(a * a * ell / 2 + a * b) * x_pow(a * ell + b) * y_pow(b)
                sub = EvalPoint(
                    u * u * tau,
                    u * nu + (u * a + b * u / ell) * tau,
                    u * mu - (b * u / ell) * tau,
                )
                k_terms.append((coeff, AppellSpec(ell, sub)))
        return RescaleResult(tuple(k_terms))

    if form == "coprime":
        if math.gcd(ell, u) != 1:
            raise CoprimalityError(f"coprime form requires gcd({ell},{u}) = 1")
        k_terms = []
        for s in range(u):
            for th in range(u):
                coeff = x_pow(ell * s) * y_pow(ell * th) * q_pow((s * s - th * th) * ell / 2)
                sub = EvalPoint(u * u * tau, u * nu + s * u * tau, u * mu - th * u * tau)
                k_terms.append((coeff, AppellSpec(ell, sub)))
        theta_terms = []
        for r in range(1, ell):
            for s in range(1, u):
                if u * r - ell * s >= 1:
                    coeff = x_pow(u * r) * y_pow(u * r - ell * s) * q_pow(u * r * s - ell * s * s / 2)
                    theta_terms.append(ThetaTerm(coeff, ell, ell * tau, ell * nu + u * r * tau))
        return RescaleResult(tuple(k_terms), tuple(theta_terms))

    if form == "blowup":
        if math.gcd(ell, u) != 1:
            raise CoprimalityError(f"blowup form requires gcd({ell},{u}) = 1")
        k_terms = []
        for sp in range(1, u + 1):
            for b in range(u):
                rb = (ell * (sp + 2 * b + 1)) // u
                coeff = (
                    x_pow(ell * (sp - 1) / u)
                    * y_pow(ell * (sp + 1 + 2 * b) / u)
                    * q_pow(-ell * (b + 1) * (b + sp) / u)
                    * (x_pow(-rb) * y_pow(-rb) * q_pow((b + 1) * rb))
                )
                mu_slot = mu + (-(sp + 1) / 2 - b + u * rb / (2 * ell)) * tau
                first = EvalPoint(u * tau, nu + ((sp - 1) / 2 - u * rb / (2 * ell)) * tau, mu_slot)
                second = EvalPoint(u * tau, -nu + (-(sp - 1) / 2 - u * rb / (2 * ell)) * tau, mu_slot)
                k_terms.append((coeff, AppellSpec(2 * ell, first)))
                k_terms.append((-coeff * x_pow(2 * rb) * q_pow((sp - 1) * rb), AppellSpec(2 * ell, second)))
        return RescaleResult(tuple(k_terms))

    raise DomainError(f"unknown rescale form {form!r}")


def blowup_lhs(level: int, u: int, point: EvalPoint, tol: Tolerance | None = None) -> complex:
    """K_{2l}(q^{1/u}, x^{1/u}, y^{1/u}) - K_{2l}(q^{1/u}, x^{-1/u}, y^{1/u})."""
    tau, nu, mu = point.tau, point.nu, point.mu
    a = eval_K(AppellSpec(2 * level, EvalPoint(tau / u, nu / u, mu / u)), tol)
    b = eval_K(AppellSpec(2 * level, EvalPoint(tau / u, -nu / u, mu / u)), tol)
    return a - b


__all__ = [
    "AppellSpec",
    "spec",
    "ThetaTerm",
    "TranslationResult",
    "RescaleResult",
    "eval_K",
    "eval_K_bounded",
    "eval_K_double",
    "eval_K_contour",
    "translate_K",
    "inversion_K",
    "inversion_K_second_form",
    "t_transform_K",
    "s_transform_K_rhs",
    "s_transform_K_rhs_alt",
    "rescale_K",
    "blowup_lhs",
]
