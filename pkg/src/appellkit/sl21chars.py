"""Admissible affine-superalgebra characters and their modular data.

Everything is assembled from the level-2l Appell functions and the theta/eta
layer: the two-sided kernel psi (series route and Appell route), the Ramond
character and its three sector maps, the reducible-module characters Omega,
spectral flow, the finite S-matrix on (s, theta) labels, the R-functions
multiplying the Omega's in the S-transform, and the N=2 / N=4 character layer
obtained by residues and specialization.

All arguments are additive: a point (tau, nu, mu) stands for
(q, x, y) = (e^{2 pi i tau}, e^{2 pi i nu}, e^{2 pi i mu}); half-integer powers
like x^{1/2} are e^{i pi nu}.  The level k = l/u - 1 is kept as an exact
Fraction and converted to float only inside exponents.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .numcore import (
    DELTA_POLE,
    DomainError,
    EvalPoint,
    LabelError,
    PoleProximityError,
    Tolerance,
    _tol,
    gaussian_series_cutoff,
    lattice_distance,
    rbar,
)
from .appell import AppellSpec, eval_K
from .thetakit import eval_eta, theta10, theta11, theta_rl, theta11_derivative_at_lattice

_IPI = 1j * math.pi

SECTORS = ("R", "NS", "sR", "sNS")


@dataclass(frozen=True)
class AdmissibleLabel:
    """(r, s, ell, u, theta) with gcd(ell,u)=1, 1 <= s <= u, 1 <= r <= ell,
    plus the sector tag; the level k = ell/u - 1 is derived, never stored."""

    r: int
    s: int
    ell: int
    u: int
    theta: int = 0
    sector: str = "R"

    def __post_init__(self):
        if math.gcd(self.ell, self.u) != 1:
            raise LabelError(f"gcd({self.ell},{self.u}) != 1")
        if not (1 <= self.s <= self.u):
            raise LabelError(f"s={self.s} outside 1..u={self.u}")
        if not (1 <= self.r <= self.ell):
            raise LabelError(f"r={self.r} outside 1..ell={self.ell}")
        if self.sector not in SECTORS:
            raise LabelError(f"unknown sector {self.sector!r}")

    @property
    def level(self) -> Fraction:
        return Fraction(self.ell, self.u) - 1


@dataclass(frozen=True)
class VermaWeight:
    h_minus: complex
    h_plus: complex
    theta: int = 0


@dataclass(frozen=True)
class OmegaLabel:
    """Index data of a reducible-module character; h may be any complex value,
    the distinguished values h = +-(r/2 - (ell/u)(s+1)/2) select the barred and
    unbarred short characters."""

    r: int
    s: int
    h: complex
    barred: bool = False


def omega_short(r: int, s: int, ell: int, u: int, barred: bool = False) -> OmegaLabel:
    h = r / 2 - (ell / u) * (s + 1) / 2
    return OmegaLabel(r, s, -h if barred else h, barred)


def big_theta(point: EvalPoint, tol: Tolerance | None = None) -> complex:
    """theta10(q, (xy)^{1/2}) theta10(q, (x/y)^{1/2}) / (theta11(q,x) q^{-1/8} eta^3)."""
    tau, nu, mu = point.tau, point.nu, point.mu
    denom = theta11(tau, nu, tol)
    if denom == 0:
        raise PoleProximityError(f"nu={nu} on the theta11 zero lattice")
    num = theta10(tau, (nu + mu) / 2, tol) * theta10(tau, (nu - mu) / 2, tol)
    return num / (denom * cmath.exp(-_IPI * tau / 4) * eval_eta(tau, tol) ** 3)


def verma_char(w: VermaWeight, k, point: EvalPoint, tol: Tolerance | None = None) -> complex:
    """x^{h-} y^{h+ - (k+1)theta} q^{(h-^2-h+^2)/(k+1) + 2 theta h+ - (k+1) theta^2} * big_theta."""
    kf = float(k) if not isinstance(k, complex) else k
    if kf == -1:
        raise DomainError("level k = -1 is excluded (division by k+1)")
    tau, nu, mu = point.tau, point.nu, point.mu
    hm, hp, th = w.h_minus, w.h_plus, w.theta
    expo = (
        2 * _IPI * nu * hm
        + 2 * _IPI * mu * (hp - (kf + 1) * th)
        + 2 * _IPI * tau * ((hm * hm - hp * hp) / (kf + 1) + 2 * th * hp - (kf + 1) * th * th)
    )
    return cmath.exp(expo) * big_theta(point, tol)


def narrow_verma_char(
    h_minus: complex, k, theta: int, point: EvalPoint, kind: str = "minus", tol: Tolerance | None = None
) -> complex:
    """The two narrow quotients:

        kind="minus": verma(h-, h-) / (1 + q^{-theta} x^{-1/2} y^{-1/2})
        kind="plus":  verma(h-, -h-) / (1 + q^{theta} x^{-1/2} y^{1/2})
    """
    tau, nu, mu = point.tau, point.nu, point.mu
    if kind == "minus":
        denom = 1 + cmath.exp(-2 * _IPI * tau * theta - _IPI * nu - _IPI * mu)
        return verma_char(VermaWeight(h_minus, h_minus, theta), k, point, tol) / denom
    if kind == "plus":
        denom = 1 + cmath.exp(2 * _IPI * tau * theta - _IPI * nu + _IPI * mu)
        return verma_char(VermaWeight(h_minus, -h_minus, theta), k, point, tol) / denom
    raise DomainError(f"unknown narrow kind {kind!r}")


def psi(
    r: int,
    s: int,
    ell: int,
    u: int,
    point: EvalPoint,
    route: str = "series",
    tol: Tolerance | None = None,
) -> complex:
    """The two-sided character kernel by either route.

    route="series":
        sum_m q^{m^2 u l - m u (r-1)}
          [ q^{m l (s-1)} x^{-m l} / (1 + y^{-1/2} x^{-1/2} q^{m u - 1})
          - q^{(s-1)(r-1)} x^{1-r} q^{-m l (s-1)} x^{m l}
              / (1 + y^{-1/2} x^{1/2} q^{m u - s}) ]
    route="appell": the difference of two level-2l Appell functions at nome u*tau.

    The two routes agree within tolerance; r may be any integer here (the
    barred characters use r <= 0).
    """
    if math.gcd(ell, u) != 1:
        raise LabelError(f"gcd({ell},{u}) != 1")
    tau, nu, mu = point.tau, point.nu, point.mu
    if route == "appell":
        mu_slot = 0.5 - mu / 2 + (u * (r - 1) / (2 * ell)) * tau - ((s + 1) / 2) * tau
        first = eval_K(
            AppellSpec(2 * ell, EvalPoint(u * tau, -nu / 2 - (u * (r - 1) / (2 * ell)) * tau + ((s - 1) / 2) * tau, mu_slot)),
            tol,
        )
        second = eval_K(
            AppellSpec(2 * ell, EvalPoint(u * tau, nu / 2 - (u * (r - 1) / (2 * ell)) * tau - ((s - 1) / 2) * tau, mu_slot)),
            tol,
        )
        return first - cmath.exp(2 * _IPI * tau * (s - 1) * (r - 1) - 2 * _IPI * nu * (r - 1)) * second
    if route != "series":
        raise DomainError(f"unknown route {route!r}")
    tol = _tol(tol)
    t = tau.imag
    alpha = math.pi * 2 * u * ell * t
    beta = 2 * math.pi * (u * abs(r - 1) + ell * abs(s - 1) + ell * abs(nu.imag) + 1) * 2
    M = max(8, gaussian_series_cutoff(alpha, beta, tol.series_tail_bound))
    acc = 0j
    for m in range(-M, M + 1):
        base = 2 * _IPI * tau * (m * m * u * ell - m * u * (r - 1))
        d1 = 1 + cmath.exp(-_IPI * mu - _IPI * nu + 2 * _IPI * tau * (m * u - 1))
        d2 = 1 + cmath.exp(-_IPI * mu + _IPI * nu + 2 * _IPI * tau * (m * u - s))
        if min(abs(d1), abs(d2)) < DELTA_POLE:
            raise PoleProximityError(f"psi kernel pole at m={m}")
        t1 = cmath.exp(base + 2 * _IPI * tau * m * ell * (s - 1) - 2 * _IPI * nu * m * ell) / d1
        t2 = (
            cmath.exp(
                base
                + 2 * _IPI * tau * (s - 1) * (r - 1)
                + 2 * _IPI * nu * (1 - r)
                - 2 * _IPI * tau * m * ell * (s - 1)
                + 2 * _IPI * nu * m * ell
            )
            / d2
        )
        acc += t1 - t2
    return acc


def _chi_ramond(r: int, s: int, ell: int, u: int, theta: int, point: EvalPoint, tol) -> complex:
    """q^{(th+1)(r-1-(l/u)(s+th))} x^{(r-1)/2-(l/u)(s-1)/2}
    y^{(r-1)/2-(l/u)(s+1)/2-th l/u} psi_{r,s}(q,x,y q^{2 th}) big_theta(q,x,y);
    r unrestricted (the barred characters reach r <= 0)."""
    tau, nu, mu = point.tau, point.nu, point.mu
    lu = ell / u
    pref = cmath.exp(
        2 * _IPI * tau * (theta + 1) * (r - 1 - lu * (s + theta))
        + 2 * _IPI * nu * ((r - 1) / 2 - lu * (s - 1) / 2)
        + 2 * _IPI * mu * ((r - 1) / 2 - lu * (s + 1) / 2 - theta * lu)
    )
    flowed = EvalPoint(tau, nu, mu + 2 * theta * tau)
    return pref * psi(r, s, ell, u, flowed, "series", tol) * big_theta(point, tol)


def chi_admissible(label: AdmissibleLabel, point: EvalPoint, tol: Tolerance | None = None) -> complex:
    """Admissible character in the requested sector.

    Sector maps on the Ramond value chi:
        NS : e^{i pi k mu - i pi k tau/2}            chi(tau, nu, mu - tau)
        sR : chi(tau, nu, mu + 1)
        sNS: e^{i pi k mu - i pi k tau/2 + i pi k}   chi(tau, nu, mu - tau + 1)
    """
    k = float(label.level)
    tau, nu, mu = point.tau, point.nu, point.mu
    args = (label.r, label.s, label.ell, label.u, label.theta)
    if label.sector == "R":
        return _chi_ramond(*args, point, tol)
    if label.sector == "NS":
        pref = cmath.exp(_IPI * k * mu - _IPI * k * tau / 2)
        return pref * _chi_ramond(*args, EvalPoint(tau, nu, mu - tau), tol)
    if label.sector == "sR":
        return _chi_ramond(*args, EvalPoint(tau, nu, mu + 1), tol)
    pref = cmath.exp(_IPI * k * mu - _IPI * k * tau / 2 + _IPI * k)
    return pref * _chi_ramond(*args, EvalPoint(tau, nu, mu - tau + 1), tol)


def chi_admissible_barred(
    r: int, s: int, ell: int, u: int, theta: int, point: EvalPoint, tol: Tolerance | None = None
) -> complex:
    """The second half of the admissible characters:

        -q^{(th-s)(-r-(l/u)(th-1))} x^{-r/2-(l/u)(s-1)/2}
        y^{-r/2+(l/u)(s+1)/2-th l/u} psi_{1-r,s}(q,x,y q^{2(th-s-1)}) big_theta,

    equal to -chi_{1-r,s;th-s-1} and to chi_{r,s;th}(q,x,1/y)."""
    tau, nu, mu = point.tau, point.nu, point.mu
    lu = ell / u
    pref = -cmath.exp(
        2 * _IPI * tau * (theta - s) * (-r - lu * (theta - 1))
        + 2 * _IPI * nu * (-r / 2 - lu * (s - 1) / 2)
        + 2 * _IPI * mu * (-r / 2 + lu * (s + 1) / 2 - theta * lu)
    )
    flowed = EvalPoint(tau, nu, mu + 2 * (theta - s - 1) * tau)
    return pref * psi(1 - r, s, ell, u, flowed, "series", tol) * big_theta(point, tol)


def omega_char(
    label: OmegaLabel, ell: int, u: int, point: EvalPoint, tol: Tolerance | None = None
) -> complex:
    """Reducible-module character with the index reductions applied first:

        Omega_{r+2nl} = Omega_r,  Omega_{nl} = 0,  Omega_{-r} = -Omega_r,

    then y^h x^{-(l/u)(s-1)/2} q^{(l/(4u))(s-1)^2-(u/l)h^2}
    (theta_{r,l}(q^u, x q^{-(s-1)}) - theta_{-r,l}(q^u, x q^{-(s-1)})) big_theta."""
    r0 = label.r % (2 * ell)
    if r0 % ell == 0:
        return 0j
    sign = 1.0
    if r0 > ell:
        r0, sign = 2 * ell - r0, -1.0
    tau, nu, mu = point.tau, point.nu, point.mu
    s, h = label.s, label.h
    pref = cmath.exp(
        2 * _IPI * mu * h
        - 2 * _IPI * nu * (ell / u) * (s - 1) / 2
        + 2 * _IPI * tau * ((ell / (4 * u)) * (s - 1) ** 2 - (u / ell) * h * h)
    )
    zarg = nu - (s - 1) * tau
    diff = theta_rl(r0, ell, u * tau, zarg, tol) - theta_rl(-r0, ell, u * tau, zarg, tol)
    return sign * pref * diff * big_theta(point, tol)


def spectral_flow_char(chi, theta: int, k):
    """Exact flow on any character evaluator:

        (U_theta chi)(q, x, y) = y^{-k theta} q^{-k theta^2} chi(q, x, y q^{2 theta}).
    """
    kf = float(k)

    def flowed(point: EvalPoint, tol: Tolerance | None = None) -> complex:
        pref = cmath.exp(-2 * _IPI * point.mu * kf * theta - 2 * _IPI * point.tau * kf * theta * theta)
        return pref * chi(EvalPoint(point.tau, point.nu, point.mu + 2 * theta * point.tau), tol)

    return flowed


def selected_r(ell: int, u: int, s: int, theta: int) -> int:
    """The representative r = floor((l/u)(s + 2 theta + 1)) + 1, in exact
    integer arithmetic."""
    return rbar(ell, u, s + 2 * theta + 1) + 1


def s_matrix_entry(ell: int, u: int, s: int, theta: int, s_prime: int, theta_prime: int) -> complex:
    """Finite part of the character S-transform:

        (1/u) e^{2 i pi (l/u)(s+s'+th+th'+s' th+s th'+2 th th')}
              e^{i pi ([l(s'+1+2 th')]_u - [l(s+2 th+1)]_u)/u}.
    """
    if math.gcd(ell, u) != 1:
        raise LabelError("gcd(ell,u) != 1")
    if not (1 <= s <= u and 1 <= s_prime <= u):
        raise LabelError("s labels must lie in 1..u")
    if not (0 <= theta <= u - 1 and 0 <= theta_prime <= u - 1):
        raise LabelError("theta labels must lie in 0..u-1")
    lu = ell / u
    phase = 2 * _IPI * lu * (s + s_prime + theta + theta_prime + s_prime * theta + s * theta_prime + 2 * theta * theta_prime)
    m1 = (ell * (s_prime + 1 + 2 * theta_prime)) % u
    m2 = (ell * (s + 2 * theta + 1)) % u
    return cmath.exp(phase + _IPI * (m1 - m2) / u) / u


def r_function(
    ell: int,
    u: int,
    s: int,
    theta: int,
    r_prime: int,
    s_prime: int,
    tau: complex,
    mu: complex,
    phi_eval=None,
    tol: Tolerance | None = None,
) -> complex:
    """The function multiplying Omega_{r',s'}(tau, nu, mu+1) in the S-transform:

        ((-1)^{r' s}/u) e^{i pi (l/(2 u tau)) (mu + tau (s'+1-(u/l) r'))^2
                          - i pi [l(s+2 th+1)]_u/u + i pi (l/u)(2 s'+s-s s')}
        sum_{b=0}^{u-1} ( e^{i pi (s+2 th+1)(2 l b+[u r'+l(s'-1)]_{2l})/u}
                             Phi(2 u l tau, -l mu - 2 b l tau - [u r'-l(s'-1)]_{2l} tau)
                        - e^{i pi (s+2 th+1)(2 l (b+1)-[u r'+l(s'-1)]_{2l})/u}
                             Phi(2 u l tau, -l mu - 2(b+1) l tau + [u r'-l(s'-1)]_{2l} tau) ).

    The Phi arguments depend on s' only through s' mod 2.
    """
    if phi_eval is None:
        from .phifun import eval_Phi

        phi_eval = lambda t, m: eval_Phi(t, m, tol=tol)
    if not (1 <= r_prime <= ell - 1 and 1 <= s_prime <= u):
        raise LabelError("r' in 1..ell-1 and s' in 1..u required")
    lu = ell / u
    mplus = (u * r_prime + ell * (s_prime - 1)) % (2 * ell)
    mminus = (u * r_prime - ell * (s_prime - 1)) % (2 * ell)
    w = mu + tau * (s_prime + 1 - (u / ell) * r_prime)
    pref = (
        ((-1) ** (r_prime * s))
        / u
        * cmath.exp(
            _IPI * (ell / (2 * u)) * w * w / tau
            - _IPI * ((ell * (s + 2 * theta + 1)) % u) / u
            + _IPI * lu * (2 * s_prime + s - s * s_prime)
        )
    )
    acc = 0j
    big = 2 * u * ell * tau
    for b in range(u):
        acc += cmath.exp(_IPI * (s + 2 * theta + 1) * (2 * ell * b + mplus) / u) * phi_eval(
            big, -ell * mu - 2 * b * ell * tau - mminus * tau
        )
        acc -= cmath.exp(_IPI * (s + 2 * theta + 1) * (2 * ell * (b + 1) - mplus) / u) * phi_eval(
            big, -ell * mu - 2 * (b + 1) * ell * tau + mminus * tau
        )
    return pref * acc


def s_transform_chi_check(
    ell: int,
    u: int,
    s: int,
    theta: int,
    point: EvalPoint,
    tol: Tolerance | None = None,
    phi_eval=None,
) -> float:
    """Relative residual of the super-Ramond S-transform:

        chi^{sR}_{(s;th)}(-1/tau, nu/tau, mu/tau)
          = e^{i pi k (nu^2-mu^2)/(2 tau)}
            [ sum_{s',th'} S_{(s,th),(s',th')} chi^{sR}_{(s';th')}(tau,nu,mu)
              - sum_{r'=1}^{l-1} sum_{s'=1}^{u} R_{s,th,r',s'}(tau,mu)
                Omega_{r',s'}(tau,nu,mu+1) ],

    with the representative r = floor((l/u)(s+2 th+1)) + 1 on the left side.
    """
    k = Fraction(ell, u) - 1
    tau, nu, mu = point.tau, point.nu, point.mu

    def chi_sR(rr, ss, tth, p):
        # super-Ramond representative with r unrestricted (the selected r can
        # exceed ell; the character formulas extend to any integer r)
        return _chi_ramond(rr, ss, ell, u, tth, EvalPoint(p.tau, p.nu, p.mu + 1), tol)

    r_sel = selected_r(ell, u, s, theta)
    lhs = chi_sR(r_sel, s, theta, EvalPoint(-1 / tau, nu / tau, mu / tau))
    acc = 0j
    for sp in range(1, u + 1):
        for thp in range(u):
            rp_sel = selected_r(ell, u, sp, thp)
            acc += s_matrix_entry(ell, u, s, theta, sp, thp) * chi_sR(rp_sel, sp, thp, point)
    for rp in range(1, ell):
        for sp in range(1, u + 1):
            acc -= r_function(ell, u, s, theta, rp, sp, tau, mu, phi_eval, tol) * omega_char(
                omega_short(rp, sp, ell, u), ell, u, EvalPoint(tau, nu, mu + 1), tol
            )
    rhs = cmath.exp(_IPI * float(k) * (nu * nu - mu * mu) / (2 * tau)) * acc
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


# -- N=2 and N=4 layers --------------------------------------------------------


def n2_phi(r: int, s: int, u: int, ell: int, tau: complex, zeta: complex, tol: Tolerance | None = None) -> complex:
    """The Appell-function bracket of the N=2 character:

        K_{2l}(q^u, q^{r/2-(u/2l)(s-1)}, -z^{-1} q^{-r/2+(u/2l)(s-1)})
        - q^{r(s-1)} K_{2l}(q^u, q^{-r/2-(u/2l)(s-1)}, -z^{-1} q^{-r/2+(u/2l)(s-1)}).
    """
    shift = (u / (2 * ell)) * (s - 1)
    mu_slot = 0.5 - zeta + (-r / 2 + shift) * tau
    first = eval_K(AppellSpec(2 * ell, EvalPoint(u * tau, (r / 2 - shift) * tau, mu_slot)), tol)
    second = eval_K(AppellSpec(2 * ell, EvalPoint(u * tau, (-r / 2 - shift) * tau, mu_slot)), tol)
    return first - cmath.exp(2 * _IPI * tau * r * (s - 1)) * second


def n2_char(
    r: int,
    s: int,
    u: int,
    ell: int,
    theta: int,
    tau: complex,
    zeta: complex,
    tol: Tolerance | None = None,
) -> complex:
    """Admissible N=2 character at central charge c = 3(1 - 2 l/u):

        omega_{r,s,u,l}(q,z) = z^{-(l/u)(r-1)+s-1} n2_phi(q,z)
                               theta10(q,z)/(q^{-1/8} eta^3),
        1 <= r <= u-1, 1 <= s <= l,

    then flowed by z^{-(c/3) th} q^{(c/6)(th^2-th)} omega(q, z q^{-th})."""
    if math.gcd(ell, u) != 1:
        raise LabelError("gcd(ell,u) != 1")
    if not (1 <= r <= u - 1 and 1 <= s <= ell):
        raise LabelError(f"N=2 labels need 1 <= r <= u-1, 1 <= s <= ell; got r={r}, s={s}")
    c_third = 1 - 2 * ell / u

    def base(z: complex) -> complex:
        pref = cmath.exp(2 * _IPI * z * (-(ell / u) * (r - 1) + s - 1))
        ratio = theta10(tau, z, tol) / (cmath.exp(-_IPI * tau / 4) * eval_eta(tau, tol) ** 3)
        return pref * n2_phi(r, s, u, ell, tau, z, tol) * ratio

    flow_pref = cmath.exp(
        -2 * _IPI * zeta * c_third * theta + 2 * _IPI * tau * (c_third / 2) * (theta * theta - theta)
    )
    return flow_pref * base(zeta - theta * tau)


def residue_at_lattice(
    chi_of_nu, tau: complex, n: int, radius: float = 1e-3, points: int = 16
) -> complex:
    """Residue in the multiplicative variable x at x = q^n by a small-circle
    trapezoid rule (spectrally accurate): x = q^n (1 + radius e^{i phi})."""
    nu0 = n * tau
    x0 = cmath.exp(2 * _IPI * nu0)
    acc = 0j
    for jj in range(points):
        phi = 2 * math.pi * jj / points
        w = radius * cmath.exp(1j * phi)
        nu_j = nu0 + cmath.log(1 + w) / (2 * _IPI)
        acc += chi_of_nu(nu_j) * (1 + w) * w
    return x0 * acc / points


def n2_residue_link_residual(
    ell: int, u: int, r: int, s: int, theta: int, n: int, tau: complex, zeta: complex,
    tol: Tolerance | None = None,
) -> float:
    """Relative gap between the contour residue of chi_{r,s,l,u;th}(q, x, z^2)
    at x = q^n (even n) and the closed form

        z^{-k} q^{-k n^2/4 + n} (theta10(q,z)/(q^{-1/8} eta^3))
        omega_{s-n-1, r, u, l; -(th + n/2 + 1)}(q, z).
    """
    if n % 2:
        raise DomainError("the residue link is stated for even n")
    k = ell / u - 1

    def chi_of_nu(nu):
        return chi_admissible(
            AdmissibleLabel(r, s, ell, u, theta, "R"), EvalPoint(tau, nu, 2 * zeta), tol
        )

    res = residue_at_lattice(chi_of_nu, tau, n)
    pref = cmath.exp(
        -2 * _IPI * zeta * k + 2 * _IPI * tau * (-k * n * n / 4 + n)
    ) * theta10(tau, zeta, tol) / (cmath.exp(-_IPI * tau / 4) * eval_eta(tau, tol) ** 3)
    closed = pref * n2_char(s - n - 1, r, u, ell, -(theta + n // 2 + 1), tau, zeta, tol)
    return abs(res - closed) / max(1.0, abs(res), abs(closed))


def n4_char(
    k: int,
    j,
    tau: complex,
    zeta: complex,
    upsilon: complex,
    tol: Tolerance | None = None,
    limit_mode: bool = False,
) -> complex:
    """Unitary N=4 character at central charge 6k through level-2(k+1) Appell
    functions; j is a half-integer in 0..k/2.  The y = e^{2 pi i upsilon} = +-1
    prefactor pole is removable (the bracket vanishes there); limit_mode
    evaluates off the pole and Richardson-extrapolates."""
    if k < 1:
        raise DomainError("N=4 level k must be a positive integer")
    twoj = round(float(2 * j))
    if abs(2 * j - twoj) > 1e-12 or not (0 <= twoj <= k):
        raise DomainError("j must be a half-integer in 0..k/2")
    L = 2 * (k + 1)
    y = cmath.exp(2 * _IPI * upsilon)
    if abs(y - 1) < 1e-6 or abs(y + 1) < 1e-6:
        if not limit_mode:
            raise PoleProximityError("upsilon at the prefactor pole y=+-1; use limit_mode")
        h = 1e-3
        f1 = n4_char(k, j, tau, zeta, upsilon + h, tol)
        f2 = n4_char(k, j, tau, zeta, upsilon + h / 2, tol)
        return 2 * f2 - f1

    def kval(nu_shift, mu_shift, y_sign):
        nu = zeta + nu_shift * tau
        mu = 0.5 + y_sign * upsilon + mu_shift * tau
        return eval_K(AppellSpec(L, EvalPoint(tau, nu, mu)), tol)

    a = (2 * twoj / 2 + 1) / L  # (2j+1)/(2(k+1))
    b = (k - twoj) / L          # (k-2j)/(2(k+1))
    am = (-twoj + 1) / L
    bm = (twoj - k - 2) / L
    z2j = cmath.exp(2 * _IPI * zeta * twoj)
    qinv = cmath.exp(-2 * _IPI * tau)
    bracket = (
        y * z2j * kval(a, b, +1)
        - (1 / y) * z2j * kval(a, b, -1)
        - y / z2j * qinv * kval(am, bm, +1)
        + (1 / y) / z2j * qinv * kval(am, bm, -1)
    )
    denom11 = theta11(tau, 2 * zeta, tol)
    if denom11 == 0:
        raise PoleProximityError("zeta at the theta11(q, z^2) zero lattice")
    pref = (
        cmath.exp(2 * _IPI * tau * (float(j) - (2 * k - 1) / 8))
        / (1 / y - y)
        * theta10(tau, zeta + upsilon - tau / 2, tol)
        * theta10(tau, zeta - upsilon - tau / 2, tol)
        / (denom11 * eval_eta(tau, tol) ** 3)
    )
    return pref * bracket


__all__ = [
    "SECTORS",
    "AdmissibleLabel",
    "VermaWeight",
    "OmegaLabel",
    "omega_short",
    "big_theta",
    "verma_char",
    "narrow_verma_char",
    "psi",
    "chi_admissible",
    "chi_admissible_barred",
    "omega_char",
    "spectral_flow_char",
    "selected_r",
    "s_matrix_entry",
    "r_function",
    "s_transform_chi_check",
    "n2_phi",
    "n2_char",
    "residue_at_lattice",
    "n2_residue_link_residual",
    "n4_char",
    "theta11_derivative_at_lattice",
]
