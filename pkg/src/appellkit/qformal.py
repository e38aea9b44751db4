"""Exact truncated Laurent series over the rationals, and the formal identity
catalog proved coefficientwise.

Series live on a fractional exponent lattice in the variables ("q", "x", "y")
(a fourth variable "z" is used by the identities that need an extra free
parameter).  The first variable is the nome.  All coefficients are exact
Fractions; no floating point enters this module.

Each series carries two boxes: the retention box (what is stored) and the
completeness box (where the stored coefficients are guaranteed to equal the
coefficients of the exact object).  Monomial shifts move the completeness box,
sums intersect it, and products shrink it by the partner's support spread, so
a verified "difference is zero on the comparison box" statement is sound.

Expansion region (fixed policy): |q| < |x| < 1, |q| < |y| < 1, |q| < |xy| < 1.
Every monomial q^a x^b y^c z^d gets the weight a + b/64 + c/97 + d/131, which
realizes a generic point of that region; 1/(1-M) is expanded in M when the
weight is positive and in 1/M when it is negative.  Weight zero is a region
violation.  Both sides of an identity are expanded under one policy, so
coefficientwise equality proves the identity on the region (and then on the
common analyticity domain by continuation).

Ratio identities are never divided: both sides are multiplied by the product
of all denominators first, which turns them into polynomial-coefficient
identities in the ring.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .numcore import DomainError, RegionError

F = Fraction
_IPI = 1j * math.pi
_INF = F(10**9)

#: region weights; the nome must come first in every variable tuple
_WEIGHTS = {"q": F(1), "x": F(1, 64), "y": F(1, 97), "z": F(1, 131)}

QXY = ("q", "x", "y")
QXYZ = ("q", "x", "y", "z")


@dataclass(frozen=True)
class ExponentLattice:
    """Reported exponent denominators: every exponent of the owning series is
    an integer multiple of 1/denom for its variable."""

    denom_q: int
    denom_x: int
    denom_y: int
    denom_z: int = 1

    def __post_init__(self):
        if min(self.denom_q, self.denom_x, self.denom_y, self.denom_z) < 1:
            raise DomainError("lattice denominators must be positive integers")


def _weight(variables: tuple[str, ...], exps: tuple[F, ...]) -> F:
    return sum((_WEIGHTS[v] * e for v, e in zip(variables, exps)), F(0))


class TruncatedSeries:
    """Windowed Laurent series with exact rational coefficients.

    ret_q / ret_w bound what is stored (q-exponent above ret_q, or another
    exponent above ret_w in absolute value, is dropped); com_q / com_w bound
    where the stored data provably equals the exact expansion.  q_floor is a
    lower bound on all q-exponents of the exact object, needed to propagate
    com_q through products.
    """

    __slots__ = ("variables", "ret_q", "ret_w", "com_q", "com_w", "q_floor", "coeffs")

    def __init__(self, variables, q_order, window, coeffs=None):
        self.variables = tuple(variables)
        if self.variables[0] != "q":
            raise DomainError("first variable must be the nome 'q'")
        self.ret_q = F(q_order)
        self.ret_w = F(window)
        self.com_q = F(q_order)
        self.com_w = F(window)
        self.q_floor = F(0)
        self.coeffs: dict[tuple[F, ...], F] = {}
        if coeffs:
            for k, v in coeffs.items():
                self._add_term(tuple(F(e) for e in k), F(v))
            self._refloor()

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, variables, q_order, window):
        return cls(variables, q_order, window)

    @classmethod
    def monomial(cls, variables, q_order, window, coeff, exps):
        s = cls(variables, q_order, window)
        s._add_term(tuple(F(e) for e in exps), F(coeff))
        s._refloor()
        return s

    @classmethod
    def one(cls, variables, q_order, window):
        return cls.monomial(variables, q_order, window, 1, (0,) * len(variables))

    def _inside(self, exps) -> bool:
        if exps[0] > self.ret_q:
            return False
        return all(abs(e) <= self.ret_w for e in exps[1:])

    def _add_term(self, exps, coeff):
        if coeff == 0 or not self._inside(exps):
            return
        new = self.coeffs.get(exps, F(0)) + coeff
        if new == 0:
            self.coeffs.pop(exps, None)
        else:
            self.coeffs[exps] = new

    def _refloor(self):
        self.q_floor = min((k[0] for k in self.coeffs), default=F(0))
        self.q_floor = min(self.q_floor, F(0))

    def _blank(self, ret_q, ret_w):
        out = TruncatedSeries(self.variables, ret_q, ret_w)
        return out

    # -- inspection ----------------------------------------------------------
    @property
    def q_order(self) -> F:
        return self.com_q

    @property
    def window(self) -> F:
        return self.com_w

    def spread(self) -> F:
        """Bound on the exact object's non-nome support, or _INF if the stored
        data is window-clipped and no finite bound is known."""
        m = F(0)
        for k in self.coeffs:
            for e in k[1:]:
                m = max(m, abs(e))
        return _INF if m >= self.ret_w else m

    def is_zero(self) -> bool:
        return not self.coeffs

    def lattice(self) -> ExponentLattice:
        denoms = [1, 1, 1, 1]
        for k in self.coeffs:
            for i, e in enumerate(k):
                denoms[i] = denoms[i] * e.denominator // math.gcd(denoms[i], e.denominator)
        return ExponentLattice(denoms[0], denoms[1], denoms[2], denoms[3] if len(self.variables) > 3 else 1)

    def max_abs_exponent(self, var_index: int) -> F:
        if not self.coeffs:
            return F(0)
        return max(abs(k[var_index]) for k in self.coeffs)

    def restrict_box(self, q_order, window) -> "TruncatedSeries":
        """Coefficients on the requested sub-box; raises if it is not covered
        by the completeness box."""
        q_order, window = F(q_order), F(window)
        if q_order > self.com_q or window > self.com_w:
            raise DomainError(
                f"requested box (q<={q_order}, |e|<={window}) exceeds the "
                f"completeness box (q<={self.com_q}, |e|<={self.com_w})"
            )
        out = self._blank(q_order, window)
        for k, v in self.coeffs.items():
            out._add_term(k, v)
        out.com_q, out.com_w = q_order, window
        out._refloor()
        return out

    def eval_numeric(self, tau: complex, *nus: complex) -> complex:
        """Substitute q = e^{2 pi i tau}, var_j = e^{2 pi i nus[j-1]}."""
        if len(nus) != len(self.variables) - 1:
            raise DomainError("need one additive argument per non-nome variable")
        acc = 0j
        for k, v in sorted(self.coeffs.items()):
            expo = k[0] * tau + sum(e * n for e, n in zip(k[1:], nus))
            acc += float(v) * cmath.exp(2 * _IPI * complex(expo))
        return acc

    def __repr__(self):
        return (
            f"TruncatedSeries(vars={self.variables}, complete=(q<={self.com_q}, "
            f"|e|<={self.com_w}), terms={len(self.coeffs)})"
        )

    # -- ring operations -------------------------------------------------------
    def _check_compatible(self, other):
        if self.variables != other.variables:
            raise DomainError("series over different variable tuples")

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.monomial(
            self.variables, self.ret_q, self.ret_w, other, (0,) * len(self.variables)
        )

    def __add__(self, other):
        other = self._coerce(other)
        self._check_compatible(other)
        out = self._blank(min(self.ret_q, other.ret_q), min(self.ret_w, other.ret_w))
        for k, v in self.coeffs.items():
            out._add_term(k, v)
        for k, v in other.coeffs.items():
            out._add_term(k, v)
        out.com_q = min(self.com_q, other.com_q)
        out.com_w = min(self.com_w, other.com_w)
        out.q_floor = min(self.q_floor, other.q_floor)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = self._blank(self.ret_q, self.ret_w)
        for k, v in self.coeffs.items():
            out.coeffs[k] = -v
        out.com_q, out.com_w, out.q_floor = self.com_q, self.com_w, self.q_floor
        return out

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = F(other)
            out = self._blank(self.ret_q, self.ret_w)
            if c != 0:
                for k, v in self.coeffs.items():
                    out.coeffs[k] = v * c
            out.com_q, out.com_w, out.q_floor = self.com_q, self.com_w, self.q_floor
            return out
        self._check_compatible(other)
        out = self._blank(min(self.ret_q, other.ret_q), min(self.ret_w, other.ret_w))
        small, big = (self, other) if len(self.coeffs) <= len(other.coeffs) else (other, self)
        for k1, v1 in small.coeffs.items():
            for k2, v2 in big.coeffs.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out._add_term(k, v1 * v2)
        # completeness: a coefficient of the product at q-exponent e needs all
        # factor pairs (e1, e2 = e - e1) with e2 >= q_floor(other), hence
        # e <= com_q(self) + q_floor(other), and symmetrically
        out.com_q = min(self.com_q + other.q_floor, other.com_q + self.q_floor)
        sa, sb = self.spread(), other.spread()
        out.com_w = max(self.com_w - sb, other.com_w - sa)
        out.q_floor = self.q_floor + other.q_floor
        return out

    __rmul__ = __mul__

    def scale_monomial(self, coeff, exps) -> "TruncatedSeries":
        """Multiply by coeff * prod(var^exp); the completeness box shifts with
        the exponents."""
        exps = tuple(F(e) for e in exps)
        coeff = F(coeff)
        out = self._blank(self.ret_q + exps[0], self.ret_w)
        for k, v in self.coeffs.items():
            out._add_term(tuple(a + b for a, b in zip(k, exps)), v * coeff)
        out.com_q = self.com_q + exps[0]
        out.com_w = self.com_w - max((abs(e) for e in exps[1:]), default=F(0))
        out.q_floor = self.q_floor + exps[0]
        return out


def series_arith(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    """add / sub / mul with re-truncation to the tighter retention box."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise DomainError(f"unknown op {op!r}")


# -- expansion atoms ----------------------------------------------------------


def _mon(variables, **exps) -> tuple[F, ...]:
    """Exponent tuple from keyword exponents, e.g. _mon(QXY, q=F(1,2), x=1)."""
    return tuple(F(exps.get(v, 0)) for v in variables)


def _unit_q(variables):
    return tuple(F(1) if v == "q" else F(0) for v in variables)


def geometric_factor(variables, q_order, window, coeff, exps, n_cap: int = 200000) -> TruncatedSeries:
    """Expansion of 1/(1 - c*M) with M = prod(var^exp), direction decided by the
    region weight of M.  Raises RegionError on weight zero."""
    coeff = F(coeff)
    exps = tuple(F(e) for e in exps)
    w = _weight(variables, exps)
    if w == 0:
        raise RegionError(f"monomial with zero region weight: {exps}")
    out = TruncatedSeries(variables, q_order, window)
    if w > 0:
        cur_c, cur_e = F(1), tuple(F(0) for _ in exps)
        step_c, step_e = coeff, exps
    else:
        # 1/(1 - cM) = -sum_{n>=1} (cM)^{-n}
        step_c, step_e = 1 / coeff, tuple(-e for e in exps)
        cur_c, cur_e = -step_c, step_e
    n = 0
    while n <= n_cap:
        inside_q = cur_e[0] <= out.ret_q
        inside_w = all(abs(e) <= out.ret_w for e in cur_e[1:])
        if inside_q and inside_w:
            out._add_term(cur_e, cur_c)
        else:
            growing_q = step_e[0] > 0 and not inside_q
            growing_w = any(
                (se > 0 and ce > out.ret_w) or (se < 0 and ce < -out.ret_w)
                for se, ce in zip(step_e[1:], cur_e[1:])
            )
            if growing_q or growing_w:
                out._refloor()
                return out
        cur_c *= step_c
        cur_e = tuple(a + b for a, b in zip(cur_e, step_e))
        n += 1
    raise RegionError("geometric expansion failed to leave the retention box")


def expand_theta00(variables, q_order, window, nome_mult, coeff, exps) -> TruncatedSeries:
    """theta00(q^c, Z) = sum_m q^{c m^2/2} Z^m for Z = coeff * prod(var^exp)."""
    c = F(nome_mult)
    coeff = F(coeff)
    exps = tuple(F(e) for e in exps)
    uq = _unit_q(variables)
    out = TruncatedSeries(variables, q_order, window)
    cap = _theta_m_cap(c, exps[0], q_order, window)
    for m in range(-cap, cap + 1):
        qe = c * m * m / 2
        term_e = tuple(qe * u + m * ze for u, ze in zip(uq, exps))
        term_c = F(1) if coeff == 1 else coeff**m
        out._add_term(term_e, term_c)
    out._refloor()
    return out


def _theta_m_cap(c: F, z_qexp: F, q_order, window) -> int:
    """m-range such that c*m^2/2 - |z_qexp|*|m| > q_order is guaranteed outside."""
    bound = float(F(q_order) + F(window) * abs(z_qexp) + 4)
    cap = int(math.isqrt(int(2 * bound / float(c) + 4)) + 2 * (abs(float(z_qexp)) + 1) / float(c) + 4)
    return max(cap, int(F(window)) + 2)


def _theta1x_series(variables, q_order, window, nome_mult, coeff, exps, signed) -> TruncatedSeries:
    """theta10/theta11(q^c, Z) = sum_m (+-1)^m q^{c (m^2-m)/2} Z^{-m}."""
    c = F(nome_mult)
    coeff = F(coeff)
    exps = tuple(F(e) for e in exps)
    uq = _unit_q(variables)
    out = TruncatedSeries(variables, q_order, window)
    cap = _theta_m_cap(c, exps[0], q_order, window) + 2
    for m in range(-cap, cap + 1):
        qe = c * (m * m - m) / 2
        term_e = tuple(qe * u - m * ze for u, ze in zip(uq, exps))
        term_c = F(1) if coeff == 1 else coeff ** (-m)
        if signed and m % 2:
            term_c = -term_c
        out._add_term(term_e, term_c)
    out._refloor()
    return out


def expand_theta10(variables, q_order, window, nome_mult, coeff, exps):
    return _theta1x_series(variables, q_order, window, nome_mult, coeff, exps, signed=False)


def expand_theta11(variables, q_order, window, nome_mult, coeff, exps):
    return _theta1x_series(variables, q_order, window, nome_mult, coeff, exps, signed=True)


def expand_theta_rl(variables, q_order, window, r, level, nome_mult, coeff, exps) -> TruncatedSeries:
    """theta_{r,level}(q^c, Z) = sum_{j in Z + r/(2*level)} q^{c*level*j^2} Z^{level*j}."""
    c = F(nome_mult)
    coeff = F(coeff)
    exps = tuple(F(e) for e in exps)
    uq = _unit_q(variables)
    rho = F(r, 2 * level)
    out = TruncatedSeries(variables, q_order, window)
    cap = _theta_m_cap(2 * c * level, level * exps[0], q_order, window) + 2
    for n in range(-cap, cap + 1):
        j = n + rho
        qe = c * level * j * j
        term_e = tuple(qe * u + level * j * ze for u, ze in zip(uq, exps))
        if coeff == 1:
            term_c = F(1)
        else:
            lj = level * j
            if lj.denominator != 1:
                raise DomainError("fractional power of a non-unit coefficient")
            term_c = coeff ** int(lj)
        out._add_term(term_e, term_c)
    out._refloor()
    return out


def euler_product(variables, q_order, window, nome_mult, power: int = 1) -> TruncatedSeries:
    """prod_{m>=1} (1 - q^{c m})^power for integer power >= 1."""
    c = F(nome_mult)
    uq = _unit_q(variables)
    out = TruncatedSeries.one(variables, q_order, window)
    m = 1
    while c * m <= F(q_order):
        factor = TruncatedSeries.one(variables, q_order, window) - TruncatedSeries.monomial(
            variables, q_order, window, 1, tuple(c * m * u for u in uq)
        )
        for _ in range(power):
            out = out * factor
        m += 1
    return out


def expand_eta(variables, q_order, window, nome_mult, power: int = 1) -> TruncatedSeries:
    """eta(q^c)^power = q^{c*power/24} prod (1-q^{c m})^power."""
    c = F(nome_mult)
    uq = _unit_q(variables)
    prod = euler_product(variables, q_order + c * power / 24, window, c, power)
    return prod.scale_monomial(1, tuple(c * power / 24 * u for u in uq))


def expand_K(variables, q_order, window, level: int, nome_mult, x_mon, y_mon) -> TruncatedSeries:
    """K_level(q^c, X, Y) = sum_m q^{c*level*m^2/2} X^{level*m} / (1 - X Y q^{c m})
    with X, Y given as (coeff, exps) monomials."""
    c = F(nome_mult)
    xc, xe = F(x_mon[0]), tuple(F(e) for e in x_mon[1])
    yc, ye = F(y_mon[0]), tuple(F(e) for e in y_mon[1])
    uq = _unit_q(variables)
    out = TruncatedSeries(variables, q_order, window)

    def row(m: int) -> TruncatedSeries:
        pref_e = tuple(c * level * m * m / 2 * u + level * m * a for u, a in zip(uq, xe))
        pref_c = F(1) if xc == 1 else xc ** (level * m)
        denom_e = tuple(c * m * u + a + b for u, a, b in zip(uq, xe, ye))
        geom = geometric_factor(variables, q_order - pref_e[0], window, xc * yc, denom_e)
        return geom.scale_monomial(pref_c, pref_e)

    limit = 8 * (int(F(q_order)) + int(F(window)) + 8) + 8 * level
    for direction in (1, -1):
        empty = 0
        m = 0 if direction == 1 else -1
        while abs(m) <= limit:
            r = row(m)
            if r.is_zero():
                empty += 1
                if empty >= 2 and c * level * (abs(m) - 1) ** 2 / 2 - level * abs(m) * (
                    abs(xe[0]) + abs(ye[0]) + abs(c) + 1
                ) > F(q_order) + F(window):
                    break
            else:
                empty = 0
                out = out + _clip(r, q_order, window)
            m += direction
    out.com_q, out.com_w = F(q_order), F(window)
    out._refloor()
    return out


# ---------------------------------------------------------------------------
# identity catalog
# ---------------------------------------------------------------------------


@dataclass
class ProofRecord:
    """Result of a coefficientwise identity check."""

    identity: str
    params: dict
    q_order: str
    window: str
    status: str  # "verified" | "mismatch" | "region-error"
    lattice: dict = field(default_factory=dict)
    max_order_verified: str | None = None
    mismatch: dict | None = None

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


def _psi_series(variables, q_order, window, r, s, ell, u, theta: int = 0) -> TruncatedSeries:
    """The two-sided character kernel psi_{r,s,ell,u}(q, x, y q^{2 theta}):

        sum_m q^{m^2 u l - m u (r-1)}
          [ q^{m l (s-1)} x^{-m l} / (1 + y^{-1/2} x^{-1/2} q^{m u - 1 - theta})
          - q^{(s-1)(r-1)} x^{1-r} q^{-m l (s-1)} x^{m l}
              / (1 + y^{-1/2} x^{1/2} q^{m u - s - theta}) ].

    The flow only shifts the kernel q-exponents because def-psi carries no
    standalone y-powers.
    """
    ix = variables.index("x")
    iy = variables.index("y")
    out = TruncatedSeries(variables, q_order, window)
    limit = 8 * (int(F(q_order)) + int(F(window)) + 8) + 4 * (abs(r) + abs(s) + abs(theta) + u + ell)
    for direction in (1, -1):
        empty = 0
        m = 0 if direction == 1 else -1
        while abs(m) <= limit:
            base_q = F(m * m * u * ell - m * u * (r - 1))
            e1 = [F(0)] * len(variables)
            e1[0] = F(m * u - 1 - theta)
            e1[ix] = F(-1, 2)
            e1[iy] = F(-1, 2)
            g1 = geometric_factor(variables, q_order - base_q - F(m * ell * (s - 1)), window, -1, tuple(e1))
            t1 = g1.scale_monomial(
                1, tuple(
                    (base_q + F(m * ell * (s - 1))) if i == 0 else (F(-m * ell) if i == ix else F(0))
                    for i in range(len(variables))
                )
            )
            e2 = [F(0)] * len(variables)
            e2[0] = F(m * u - s - theta)
            e2[ix] = F(1, 2)
            e2[iy] = F(-1, 2)
            g2 = geometric_factor(
                variables, q_order - base_q - F((s - 1) * (r - 1)) + F(m * ell * (s - 1)), window, -1, tuple(e2)
            )
            t2 = g2.scale_monomial(
                -1, tuple(
                    (base_q + F((s - 1) * (r - 1)) - F(m * ell * (s - 1))) if i == 0
                    else (F(1 - r) + F(m * ell) if i == ix else F(0))
                    for i in range(len(variables))
                )
            )
            rsum = t1 + t2
            if rsum.is_zero():
                empty += 1
                if empty >= 2 and u * ell * (abs(m) - 1) ** 2 - abs(m) * (
                    u * (abs(r) + 1) + ell * (abs(s) + 1) + abs(theta) + s + u + 2
                ) > F(q_order) + F(window):
                    break
            else:
                empty = 0
                out = out + _clip(rsum, q_order, window)
            m += direction
    out.com_q, out.com_w = F(q_order), F(window)
    out._refloor()
    return out


def _omega_pre(variables, q_order, window, r_index, s, h: F, ell, u) -> TruncatedSeries:
    """Theta-stripped reducible-module character:

        y^h x^{-(l/u)(s-1)/2} q^{(l/(4u))(s-1)^2 - (u/l) h^2}
        (theta_{r,l}(q^u, x q^{-(s-1)}) - theta_{-r,l}(q^u, x q^{-(s-1)})).
    """
    ix = variables.index("x")
    iy = variables.index("y")
    pref_q = F(ell, 4 * u) * (s - 1) ** 2 - F(u, ell) * h * h
    ze = _mon(variables, q=-(s - 1), x=1)
    build_q = q_order - pref_q
    tplus = expand_theta_rl(variables, build_q, window, r_index, ell, u, 1, ze)
    tminus = expand_theta_rl(variables, build_q, window, -r_index, ell, u, 1, ze)
    pref = [F(0)] * len(variables)
    pref[0] = pref_q
    pref[ix] = -F(ell, u) * F(s - 1, 2)
    pref[iy] = h
    return (tplus - tminus).scale_monomial(1, tuple(pref))


def _chi_pre(variables, q_order, window, r, s, ell, u, theta) -> TruncatedSeries:
    """Theta-stripped admissible character in the Ramond sector:

        q^{(th+1)(r-1-(l/u)(s+th))} x^{(r-1)/2-(l/u)(s-1)/2}
        y^{(r-1)/2-(l/u)(s+1)/2 - th*l/u} psi_{r,s}(q, x, y q^{2 th}).
    """
    ix = variables.index("x")
    iy = variables.index("y")
    pref = [F(0)] * len(variables)
    pref[0] = F(theta + 1) * (F(r - 1) - F(ell, u) * (s + theta))
    pref[ix] = F(r - 1, 2) - F(ell, u) * F(s - 1, 2)
    pref[iy] = F(r - 1, 2) - F(ell, u) * F(s + 1, 2) - theta * F(ell, u)
    psi = _psi_series(variables, q_order - pref[0], window, r, s, ell, u, theta)
    return psi.scale_monomial(1, tuple(pref))


def _chi_bar_pre(variables, q_order, window, r, s, ell, u, theta) -> TruncatedSeries:
    """Theta-stripped barred character:

        -q^{(th-s)(-r-(l/u)(th-1))} x^{-r/2-(l/u)(s-1)/2}
        y^{-r/2+(l/u)(s+1)/2 - th l/u} psi_{1-r,s}(q, x, y q^{2(th-s-1)}).
    """
    ix = variables.index("x")
    iy = variables.index("y")
    pref = [F(0)] * len(variables)
    pref[0] = F(theta - s) * (F(-r) - F(ell, u) * (theta - 1))
    pref[ix] = -F(r, 2) - F(ell, u) * F(s - 1, 2)
    pref[iy] = -F(r, 2) + F(ell, u) * F(s + 1, 2) - theta * F(ell, u)
    psi = _psi_series(variables, q_order - pref[0], window, 1 - r, s, ell, u, theta - s - 1)
    return psi.scale_monomial(-1, tuple(pref))


def _support_check(series: TruncatedSeries, predicate) -> tuple[bool, tuple | None]:
    for k in sorted(series.coeffs):
        if not predicate(k):
            return False, k
    return True, None


def check_identity_formal(name: str, params: dict, q_order=6, window=None) -> ProofRecord:
    """Verify a catalog identity coefficientwise in exact arithmetic.

    The builder is run with enough headroom that the difference's completeness
    box covers (q_order, window/2); the comparison is re-run at an enlarged
    window so silent clipping cannot fake a zero.  Returns a ProofRecord with
    status "verified" or "mismatch" (the mismatch carries the offending
    exponent tuple and coefficient).
    """
    builder = _CATALOG.get(name)
    if builder is None:
        raise DomainError(f"unknown identity {name!r}; known: {sorted(_CATALOG)}")
    q_order = F(q_order)
    if window is None:
        scale = max(int(params.get("ell", 1)), int(params.get("u", 1)), int(params.get("p", 1)), 1)
        window = 2 * q_order * scale
    window = F(window)
    cmp_window = window / 2

    def run(win):
        slack_q, tries = F(4), 0
        while tries < 6:
            diff = builder(params, q_order + slack_q, win + slack_q)
            if isinstance(diff, tuple):
                return diff
            if diff.com_q >= q_order and diff.com_w >= cmp_window:
                return diff.restrict_box(q_order, cmp_window)
            slack_q *= 2
            tries += 1
        raise RegionError(f"could not reach completeness box for {name} {params}")

    try:
        boxed = run(window)
        boxed_wide = run(window + 4)
    except RegionError as exc:
        return ProofRecord(name, params, str(q_order), str(window), "region-error", mismatch={"error": str(exc)})

    if isinstance(boxed, tuple):  # support-property identities
        ok, bad = boxed
        ok2, _ = boxed_wide
        status = "verified" if (ok and ok2) else "mismatch"
        return ProofRecord(
            name, params, str(q_order), str(window), status,
            mismatch=None if status == "verified" else {"exponents": [str(e) for e in bad]},
            max_order_verified=str(q_order) if status == "verified" else None,
        )

    agree = boxed.coeffs == boxed_wide.coeffs
    if boxed.is_zero() and agree:
        return ProofRecord(
            name, params, str(q_order), str(window), "verified",
            lattice=boxed.lattice().__dict__, max_order_verified=str(q_order),
        )
    source = boxed if not boxed.is_zero() else boxed_wide
    key = min(source.coeffs, key=lambda k: (k[0], k[1:]))
    return ProofRecord(
        name, params, str(q_order), str(window), "mismatch",
        lattice=source.lattice().__dict__,
        mismatch={"exponents": [str(e) for e in key], "coefficient": str(source.coeffs[key])},
    )


# -- catalog builders: each returns lhs - rhs (a TruncatedSeries), or a
#    support-check tuple for the root-of-unity identities ---------------------


def _b_quasi(params, q_order, window):
    ell, n = params["ell"], params["n"]
    V = QXY
    shift_q = -F(n * n * ell, 2)
    lhs = expand_K(V, q_order, window, ell, 1, (1, _mon(V, q=n, x=1)), (1, _mon(V, y=1)))
    rhs = expand_K(V, q_order - shift_q, window + abs(n * ell), ell, 1, (1, _mon(V, x=1)), (1, _mon(V, y=1)))
    rhs = rhs.scale_monomial(1, _mon(V, q=shift_q, x=-n * ell))
    return lhs - rhs


def _b_diag(params, q_order, window):
    ell, n = params["ell"], params["n"]
    V = QXY
    lhs = expand_K(
        V, q_order, window, ell, 1,
        (1, _mon(V, q=-F(n, ell), x=1)), (1, _mon(V, q=F(n, ell), y=1)),
    )
    rhs = expand_K(V, q_order, window + 2 * abs(n), ell, 1, (1, _mon(V, x=1)), (1, _mon(V, y=1)))
    rhs = rhs.scale_monomial(1, _mon(V, x=n, y=n))
    rng = range(1, n + 1) if n > 0 else range(n + 1, 1)
    sign = 1 if n > 0 else -1
    for r in rng:
        th = expand_theta00(V, q_order + abs(r), window + 2 * abs(n), ell, 1, _mon(V, q=-r, x=ell))
        rhs = rhs + th.scale_monomial(sign, _mon(V, x=n - r, y=n - r))
    return lhs - rhs


def _b_veluti(params, q_order, window):
    ell, n = params["ell"], params["n"]
    V = QXY
    lhs = expand_K(V, q_order, window, ell, 1, (1, _mon(V, x=1)), (1, _mon(V, q=n, y=1)))
    big_w = window + 2 * abs(n) * ell + ell
    shift_q = F(n * n * ell, 2)
    rhs = expand_K(V, q_order - shift_q, big_w, ell, 1, (1, _mon(V, x=1)), (1, _mon(V, y=1)))
    rhs = rhs.scale_monomial(1, _mon(V, q=shift_q, y=n * ell))
    jr = range(0, n) if n > 0 else range(n, 0)
    sign = 1 if n > 0 else -1
    for j in jr:
        for r in range(ell):
            qshift = F(j * (2 * n - j) * ell, 2) + (n - j) * r
            th = expand_theta00(V, q_order - qshift, big_w, ell, 1, _mon(V, q=r, x=ell))
            rhs = rhs + th.scale_monomial(sign, _mon(V, q=qshift, x=r, y=j * ell + r))
    return lhs - rhs


def _b_inverse(params, q_order, window):
    ell = params["ell"]
    V = QXY
    a = expand_K(V, q_order, window, ell, 1, (1, _mon(V, x=1)), (1, _mon(V, y=1)))
    b = expand_K(V, q_order, window, ell, 1, (1, _mon(V, x=-1)), (1, _mon(V, y=-1)))
    th = expand_theta00(V, q_order, window, ell, 1, _mon(V, x=ell))
    return a + b - th


def _b_triv(params, q_order, window):
    ell = params["ell"]
    V = QXY
    k = expand_K(V, q_order, window, ell, 1, (1, _mon(V, x=1)), (1, _mon(V, y=1)))
    return _support_check(k, lambda e: e[1].denominator == 1 and e[2].denominator == 1)


def _b_integer(params, q_order, window):
    ell = params["ell"]
    V = QXY
    k = expand_K(V, q_order, window, ell, 1, (1, _mon(V, x=1)), (1, _mon(V, y=1)))
    return _support_check(k, lambda e: (e[1] - e[2]) % ell == 0)


def _b_elementary(params, q_order, window):
    ell, u = params["ell"], params["u"]
    V = QXY
    lhs = expand_K(V, q_order, window, ell, 1, (1, _mon(V, x=1)), (1, _mon(V, y=1)))
    rhs = TruncatedSeries.zero(V, q_order, window)
    for a in range(u):
        for b in range(u):
            qshift = F(a * a * ell, 2) + a * b
            sub = expand_K(
                V, q_order - qshift, window + a * ell + b, ell, u * u,
                (1, _mon(V, q=F(u * a) + F(b * u, ell), x=u)),
                (1, _mon(V, q=-F(b * u, ell), y=u)),
            )
            rhs = rhs + _clip(sub.scale_monomial(1, _mon(V, q=qshift, x=a * ell + b, y=b)), q_order, window)
    return lhs - rhs


def _b_coprime(params, q_order, window):
    ell, u = params["ell"], params["u"]
    if math.gcd(ell, u) != 1:
        raise RegionError("coprime form needs gcd(ell,u)=1")
    V = QXY
    lhs = expand_K(V, q_order, window, ell, 1, (1, _mon(V, x=1)), (1, _mon(V, y=1)))
    rhs = TruncatedSeries.zero(V, q_order, window)
    for s in range(u):
        for th in range(u):
            qshift = F((s * s - th * th) * ell, 2)
            sub = expand_K(
                V, q_order - qshift, window + ell * (s + th), ell, u * u,
                (1, _mon(V, q=s * u, x=u)), (1, _mon(V, q=-th * u, y=u)),
            )
            rhs = rhs + _clip(sub.scale_monomial(1, _mon(V, q=qshift, x=ell * s, y=ell * th)), q_order, window)
    for r in range(1, ell):
        for s in range(1, u):
            if u * r - ell * s >= 1:
                qshift = u * r * s - F(ell * s * s, 2)
                th = expand_theta00(V, q_order - qshift, window + 2 * u * r, ell, 1, _mon(V, q=u * r, x=ell))
                rhs = rhs + _clip(th.scale_monomial(1, _mon(V, q=qshift, x=u * r, y=u * r - ell * s)), q_order, window)
    return lhs - rhs


def _b_up(params, q_order, window):
    # exact polynomial identity: a box wide enough to hold every monomial
    ell, u = params["ell"], params["u"]
    if math.gcd(ell, u) != 1:
        raise RegionError("up-identity needs gcd(ell,u)=1")
    V = QXY
    big = F(ell * u + ell + u + 3)
    one = TruncatedSeries.one(V, big, window)
    qpow = lambda e: TruncatedSeries.monomial(V, big, window, 1, _mon(V, q=e))
    lhs = (one - qpow(ell * u)) * (one - qpow(1)) - (one - qpow(ell)) * (one - qpow(u))
    corr = TruncatedSeries.zero(V, big, window)
    for r in range(1, ell):
        for s in range(1, u):
            if u * r - ell * s >= 1:
                corr = corr + qpow(u * r - ell * s)
    lhs = lhs + (one - qpow(ell)) * (one - qpow(u)) * (one - qpow(1)) * corr
    return lhs


def _b_blowup(params, q_order, window):
    ell, u = params["ell"], params["u"]
    if math.gcd(ell, u) != 1:
        raise RegionError("blowup needs gcd(ell,u)=1")
    V = QXY
    lhs = expand_K(
        V, q_order, window, 2 * ell, F(1, u),
        (1, _mon(V, x=F(1, u))), (1, _mon(V, y=F(1, u))),
    ) - expand_K(
        V, q_order, window, 2 * ell, F(1, u),
        (1, _mon(V, x=-F(1, u))), (1, _mon(V, y=F(1, u))),
    )
    rhs = TruncatedSeries.zero(V, q_order, window)
    for sp in range(1, u + 1):
        for b in range(u):
            rb = (ell * (sp + 2 * b + 1)) // u
            coeff_e = _mon(
                V,
                q=-F(ell * (b + 1) * (b + sp), u) + (b + 1) * rb,
                x=F(ell * (sp - 1), u) - rb,
                y=F(ell * (sp + 1 + 2 * b), u) - rb,
            )
            mu_q = -F(sp + 1, 2) - b + F(u * rb, 2 * ell)
            wpad = window + 4 * (abs(rb) + u + ell)
            first = expand_K(
                V, q_order - coeff_e[0], wpad, 2 * ell, u,
                (1, _mon(V, q=F(sp - 1, 2) - F(u * rb, 2 * ell), x=1)),
                (1, _mon(V, q=mu_q, y=1)),
            )
            second = expand_K(
                V, q_order - coeff_e[0] - (sp - 1) * rb, wpad, 2 * ell, u,
                (1, _mon(V, q=-F(sp - 1, 2) - F(u * rb, 2 * ell), x=-1)),
                (1, _mon(V, q=mu_q, y=1)),
            )
            pair = first - second.scale_monomial(1, _mon(V, q=(sp - 1) * rb, x=2 * rb))
            rhs = rhs + _clip(pair.scale_monomial(1, coeff_e), q_order, window)
    return lhs - rhs


def _b_theta_rewrite(params, q_order, window):
    p = params["p"]
    V = QXY
    lhs = expand_theta00(V, q_order, window, 1, 1, _mon(V, x=1))
    rhs = TruncatedSeries.zero(V, q_order, window)
    for s in range(p):
        qshift = F(s * s, 2)
        th = expand_theta00(V, q_order - qshift, window + s, p * p, 1, _mon(V, q=p * s, x=p))
        rhs = rhs + _clip(th.scale_monomial(1, _mon(V, q=qshift, x=s)), q_order, window)
    return lhs - rhs


def _b_theta_rs(params, q_order, window):
    # note: the inner nome power is 2*u*l*k, forced by consistency with
    # theta-rewrite at p = 2*u*l (the k-representative invariance fails with
    # u*l*k, and so does the identity)
    ell, u = params["ell"], params["u"]
    if math.gcd(ell, u) != 1:
        raise RegionError("theta-rs needs gcd(ell,u)=1")
    V = QXY
    lhs = expand_theta00(V, q_order, window, 1, 1, _mon(V, x=1))
    rhs = TruncatedSeries.zero(V, q_order, window)
    p = 2 * ell * u
    for rpp in range(1, 2 * ell + 1):
        for spp in range(1, u + 1):
            k = u * rpp - ell * (spp - 1)
            qshift = F(k * k, 2)
            th = expand_theta00(V, q_order - qshift, window + abs(k) + p, p * p, 1, _mon(V, q=p * k, x=p))
            rhs = rhs + _clip(th.scale_monomial(1, _mon(V, q=qshift, x=k)), q_order, window)
    return lhs - rhs



def _clip(series: TruncatedSeries, q_order, window) -> TruncatedSeries:
    """Restrict to the intersection of the requested and completeness boxes."""
    return series.restrict_box(min(F(q_order), series.com_q), min(F(window), series.com_w))

def _kernel_sum(variables, q_order, window, y_mon_exps, x_var="x"):
    """sum_m x^m / (1 - Y q^m) expanded termwise.  Y carries no x, so row m is
    an x-delta at exponent m: rows beyond the window contribute nothing and the
    x-completeness of the result is the full window."""
    V = variables
    ixv = V.index(x_var)
    out = TruncatedSeries.zero(V, q_order, window)
    limit = int(F(window)) + 1
    for m in range(-limit, limit + 1):
        ye = list(y_mon_exps)
        ye[0] = ye[0] + m
        g = geometric_factor(V, q_order, window, 1, tuple(ye))
        xm = [F(0)] * len(V)
        xm[ixv] = F(m)
        for k, v in g.coeffs.items():
            out._add_term(tuple(a + b for a, b in zip(k, xm)), v)
    out.com_q, out.com_w = F(q_order), F(window)
    out._refloor()
    return out


def _b_truly(params, q_order, window):
    V = QXY
    pad = window + 8
    ker = _kernel_sum(V, q_order, pad, _mon(V, y=1))
    t11y = expand_theta11(V, q_order, pad, 1, 1, _mon(V, y=1))
    t11x = expand_theta11(V, q_order, pad, 1, 1, _mon(V, x=1))
    t11xy = expand_theta11(V, q_order, pad, 1, 1, _mon(V, x=1, y=1))
    qq3 = euler_product(V, q_order, pad, 1, 3)
    return ker * t11y * t11x + t11xy * qq3


def _K_kernel_sum(variables, q_order, window, ell):
    """sum_m K_ell(q, z, y q^m) x^m for the 4-variable identities.  Each K row
    carries no x, so the m-th summand is an x-delta at exponent m."""
    V = variables
    ix = V.index("x")
    out = TruncatedSeries.zero(V, q_order, window)
    limit = int(F(window)) + 1
    for m in range(-limit, limit + 1):
        k = expand_K(V, q_order, window, ell, 1, (1, _mon(V, z=1)), (1, _mon(V, q=m, y=1)))
        for key, v in k.coeffs.items():
            kk = list(key)
            kk[ix] = key[ix] + m
            out._add_term(tuple(kk), v)
    out.com_q, out.com_w = F(q_order), F(window)
    out._refloor()
    return out


def _b_combined(params, q_order, window):
    ell = params["ell"]
    V = QXYZ
    qb = q_order + F(1, 8)
    pad = window + 8
    lhs = _K_kernel_sum(V, qb, pad, ell)
    t11zy = expand_theta11(V, qb, pad, 1, 1, _mon(V, y=1, z=1))
    t11x = expand_theta11(V, qb, pad, 1, 1, _mon(V, x=1))
    lhs = lhs * t11zy * t11x
    th = expand_theta00(V, qb, pad, ell, 1, _mon(V, x=-1, z=ell))
    t11zyx = expand_theta11(V, qb, pad, 1, 1, _mon(V, x=1, y=1, z=1))
    eta3 = expand_eta(V, qb, pad, 1, 3)
    rhs = (th * t11zyx * eta3).scale_monomial(1, _mon(V, q=-F(1, 8)))
    return lhs + rhs


def _b_ilja(params, q_order, window):
    ell = params["ell"]
    V = QXYZ
    pad = window + 8
    lhs = _K_kernel_sum(V, q_order, pad, ell)
    th = expand_theta00(V, q_order, pad, ell, 1, _mon(V, x=-1, z=ell))
    ker = _kernel_sum(V, q_order, pad, _mon(V, y=1, z=1))
    return lhs - th * ker


def _b_favorite(params, q_order, window):
    ell = params["ell"]
    V = QXYZ
    qb = q_order + F(1, 8)
    pad = window + 8 + 2 * ell
    thx = expand_theta00(V, qb, pad, ell, 1, _mon(V, x=1))
    kzy = expand_K(V, qb, pad, ell, 1, (1, _mon(V, z=1)), (1, _mon(V, y=1)))
    lhs = thx * kzy
    for r in range(ell):
        th = expand_theta00(V, qb + r, pad, ell, 1, _mon(V, q=r, z=ell))
        k1 = expand_K(V, qb + r, pad, 1, ell, (1, _mon(V, x=-1)), (1, _mon(V, q=-r, y=ell)))
        lhs = lhs - _clip((th * k1).scale_monomial(1, _mon(V, y=r, z=r)), qb, pad)
    t11zy = expand_theta11(V, qb, pad, 1, 1, _mon(V, y=1, z=1))
    t11xyl = expand_theta11(V, qb, pad, 1, 1, _mon(V, x=1, y=-ell))
    lhs = lhs * t11zy * t11xyl
    th_r = expand_theta00(V, qb, pad, ell, 1, _mon(V, x=-1, y=ell, z=ell))
    t11m = expand_theta11(V, qb, pad, 1, 1, _mon(V, x=1, y=1 - ell, z=1))
    eta3 = expand_eta(V, qb, pad, 1, 3)
    rhs = (th_r * t11m * eta3).scale_monomial(1, _mon(V, q=-F(1, 8)))
    return lhs + rhs


def _b_even(params, q_order, window):
    ell = params["ell"]
    V = QXY
    qb = q_order + F(1, 8 * ell)
    pad = window + 8 + 2 * ell
    lhs = TruncatedSeries.zero(V, qb, pad)
    for b in range(ell):
        qshift = F(b * b, ell)
        kp = expand_K(
            V, qb - qshift, pad + 2 * b, 2 * ell, 1,
            (1, _mon(V, q=F(b, ell), x=1)), (1, _mon(V, y=1)),
        )
        km = expand_K(
            V, qb - qshift, pad + 2 * b, 2 * ell, 1,
            (1, _mon(V, q=-F(b, ell), x=-1)), (1, _mon(V, y=1)),
        )
        lhs = lhs + _clip((kp - km).scale_monomial(1, _mon(V, q=qshift, x=2 * b)), qb, pad)
    t11a = expand_theta11(V, qb, pad, F(1, ell), 1, _mon(V, x=1, y=1))
    t11b = expand_theta11(V, qb, pad, F(1, ell), 1, _mon(V, x=1, y=-1))
    lhs = lhs * t11a * t11b
    t11x2 = expand_theta11(V, qb, pad, F(1, ell), 1, _mon(V, x=2))
    eta3 = expand_eta(V, qb, pad, F(1, ell), 3)
    rhs = (t11x2 * eta3).scale_monomial(1, _mon(V, q=-F(1, 8 * ell)))
    return lhs + rhs


def _b_even2(params, q_order, window):
    return _b_even({"ell": 1}, q_order, window)


def _b_reduce_to_1(params, q_order, window):
    ell, u, r, s = params["ell"], params["u"], params["r"], params["s"]
    V = QXY
    lhs = _psi_series(V, q_order, window, r, s, ell, u)
    shift = _mon(V, q=-(r - 1), x=-F(r - 1, 2), y=-F(r - 1, 2))
    qb = q_order - shift[0]
    psi1 = _psi_series(V, qb, window + r, 1, s, ell, u)
    theta_part = TruncatedSeries.zero(V, qb, window + r)
    for rp in range(1, r):
        pref_q = -F(u * rp * rp, 4 * ell) + F(rp * (s + 1), 2)
        ze = _mon(V, q=-(s - 1), x=1)
        tp = expand_theta_rl(V, qb - pref_q, window + r, rp, ell, u, 1, ze)
        tm = expand_theta_rl(V, qb - pref_q, window + r, -rp, ell, u, 1, ze)
        theta_part = theta_part + _clip(
            (tp - tm).scale_monomial((-1) ** rp, _mon(V, q=pref_q, y=F(rp, 2))), qb, window + r
        )
    rhs = (psi1 + theta_part).scale_monomial((-1) ** (r - 1), shift)
    return lhs - _clip(rhs, q_order, window)


def _b_r_relation(params, q_order, window):
    ell, u = params["ell"], params["u"]
    r, rp, s, theta = params["r"], params["rp"], params["s"], params["theta"]
    V = QXY
    lhs = _chi_pre(V, q_order, window, r, s, ell, u, theta)
    rhs = _chi_pre(V, q_order, window, rp, s, ell, u, theta) * F((-1) ** (r - rp))
    h_of = lambda rr: F(rr, 2) - F(ell, u) * F(s + 1 + 2 * theta, 2)
    if rp < r:
        for a in range(0, r - rp):
            rhs = rhs + _omega_pre(V, q_order, window, r - 1 - a, s, h_of(r - 1 - a), ell, u) * F((-1) ** a)
    else:
        for a in range(0, rp - r):
            rhs = rhs + _omega_pre(V, q_order, window, r + a, s, h_of(r + a), ell, u) * F((-1) ** a)
    return lhs - rhs


def _b_reducible(params, q_order, window):
    ell, u, r, s = params["ell"], params["u"], params["r"], params["s"]
    barred = params.get("barred", False)
    V = QXY
    if not barred:
        lhs = _chi_pre(V, q_order, window, r + 1, s, ell, u, 0) + _chi_pre(V, q_order, window, r, s, ell, u, 0)
        h = F(r, 2) - F(ell, u) * F(s + 1, 2)
    else:
        lhs = _chi_bar_pre(V, q_order, window, r + 1, s, ell, u, 0) + _chi_bar_pre(
            V, q_order, window, r, s, ell, u, 0
        )
        h = -F(r, 2) + F(ell, u) * F(s + 1, 2)
    return lhs - _omega_pre(V, q_order, window, r, s, h, ell, u)


def _b_chi_bar(params, q_order, window):
    ell, u, r, s = params["ell"], params["u"], params["r"], params["s"]
    V = QXY
    lhs = _chi_bar_pre(V, q_order, window, r, s, ell, u, 0)
    rhs = _chi_pre(V, q_order, window, 1 - r, s, ell, u, -s - 1) * F(-1)
    return lhs - rhs


def _b_open_periodicity(params, q_order, window):
    ell, u, r, s, theta = params["ell"], params["u"], params["r"], params["s"], params["theta"]
    V = QXY
    k = F(ell, u) - 1
    lhs = _chi_pre(V, q_order, window, r, s, ell, u, theta + u) - _chi_pre(V, q_order, window, r, s, ell, u, theta)

    def flowed_omega(r_index, h, flow):
        # Omega_{;th}/Theta(q,x,y) = y^{-(k+1) th} q^{-(k+1) th^2 + 2 th h} pre-Omega
        # because pre-Omega depends on y only through the single power y^h
        qshift = -(k + 1) * flow * flow + 2 * flow * h
        base = _omega_pre(V, q_order - qshift, window + abs((k + 1) * flow), r_index, s, h, ell, u)
        return base.scale_monomial(1, _mon(V, q=qshift, y=-(k + 1) * flow))

    # the last sum carries plain Omega, not the barred one: with the bar the
    # relation fails for every r < l and the defect is exactly the
    # plain-vs-barred difference at flow theta+u (checked on the whole
    # (2,3)/(3,2) label grid)
    h_plain = lambda a: F(a, 2) - F(ell, u) * F(s + 1, 2)
    h_bar = lambda a: -F(a, 2) + F(ell, u) * F(s + 1, 2)
    for a in range(1, r):
        lhs = lhs + _clip(flowed_omega(a, h_plain(a), theta), q_order, window) * F((-1) ** (a + r + 1))
    for a in range(1, ell):
        lhs = lhs - _clip(flowed_omega(a, h_bar(a), theta + s + 1), q_order, window) * F((-1) ** (a + r + 1))
    for a in range(r, ell):
        lhs = lhs + _clip(flowed_omega(a, h_plain(a), theta + u), q_order, window) * F((-1) ** (a + r + 1))
    return lhs


def _b_omega_ell(params, q_order, window):
    ell, u, r, s, n = params["ell"], params["u"], params["r"], params["s"], params["n"]
    V = QXY
    h = F(r, 2) - F(ell, u) * F(s + 1, 2)
    d1 = _omega_pre(V, q_order, window, r + 2 * n * ell, s, h, ell, u) - _omega_pre(
        V, q_order, window, r, s, h, ell, u
    )
    d2 = _omega_pre(V, q_order, window, n * ell, s, h, ell, u)
    d3 = _omega_pre(V, q_order, window, -r, s, h, ell, u) + _omega_pre(V, q_order, window, r, s, h, ell, u)
    return d1 + d2 + d3


_CATALOG = {
    "quasi-periodicity": _b_quasi,
    "diag-periodicity": _b_diag,
    "veluti-periodicity": _b_veluti,
    "K-inverse": _b_inverse,
    "K-identity-triv": _b_triv,
    "K-identity-integer": _b_integer,
    "elementary": _b_elementary,
    "coprime-period": _b_coprime,
    "up-identity": _b_up,
    "psi-blow-u": _b_blowup,
    "theta-rewrite": _b_theta_rewrite,
    "theta-rs": _b_theta_rs,
    "truly-cleared": _b_truly,
    "ilja-cleared": _b_ilja,
    "combined-cleared": _b_combined,
    "favorite-cleared": _b_favorite,
    "even-identity-cleared": _b_even,
    "even-identity2-cleared": _b_even2,
    "reduce-to-1": _b_reduce_to_1,
    "r-relation": _b_r_relation,
    "eq-reducible": _b_reducible,
    "chi-bar": _b_chi_bar,
    "open-periodicity": _b_open_periodicity,
    "omega-ell": _b_omega_ell,
}


def catalog_names() -> list[str]:
    return sorted(_CATALOG)


__all__ = [
    "ExponentLattice",
    "TruncatedSeries",
    "ProofRecord",
    "series_arith",
    "geometric_factor",
    "expand_theta00",
    "expand_theta10",
    "expand_theta11",
    "expand_theta_rl",
    "expand_eta",
    "euler_product",
    "expand_K",
    "check_identity_formal",
    "catalog_names",
    "QXY",
    "QXYZ",
]
