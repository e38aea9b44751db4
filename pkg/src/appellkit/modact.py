"""SL(2,Z) machinery: subgroup classification, lattice-translation operators,
the bundle-section vector, the finite representation on theta components, and
the matrix automorphy factor that leaves the section invariant.

The section is the (l+1)-vector (K_l(tau,nu,mu), theta_vec) with
theta_vec_r = theta_{2r,l}(tau/2, nu) for r = 0..l-1; the same theta functions
appear in the additive terms of K_l's translation and S-transformation laws.
The matrix automorphy factor J_l acts as gamma.f = J_l(gamma) f(gamma point)
and satisfies the cocycle law J(ab; p) = J(b; p) J(a; b p).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from dataclasses import dataclass

import numpy as np

from .numcore import (
    DomainError,
    EvalPoint,
    SingularMatrixError,
    SubgroupError,
    Tolerance,
    _tol,
    sqrt_neg_i_tau,
)
from .appell import AppellSpec, eval_K
from .thetakit import theta_rl, zeta_cd

_IPI = 1j * math.pi


@dataclass(frozen=True)
class ModularMatrix:
    """Integer matrix (a, b; c, d) with ad - bc = 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise SubgroupError(f"determinant of {self} must be 1")

    def __mul__(self, other: "ModularMatrix") -> "ModularMatrix":
        return ModularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "ModularMatrix":
        return ModularMatrix(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "ModularMatrix":
        return ModularMatrix(-self.a, -self.b, -self.c, -self.d)

    def act_tau(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def act(self, point: EvalPoint) -> EvalPoint:
        """(tau, nu, mu) -> ((a tau + b)/(c tau + d), nu/(c tau + d), mu/(c tau + d))."""
        j = self.c * point.tau + self.d
        return EvalPoint((self.a * point.tau + self.b) / j, point.nu / j, point.mu / j)

    def __repr__(self):
        return f"({self.a},{self.b};{self.c},{self.d})"


S = ModularMatrix(0, -1, 1, 0)
T = ModularMatrix(1, 1, 0, 1)
C = ModularMatrix(-1, 0, 0, -1)
IDENTITY = ModularMatrix(1, 0, 0, 1)


def t_power(n: int) -> ModularMatrix:
    return ModularMatrix(1, n, 0, 1)


@dataclass(frozen=True)
class SubgroupClassification:
    in_gamma_1_2l: bool
    in_gamma_1_2: bool
    ell_a: int
    ell_c: int


def classify_subgroup(gamma: ModularMatrix, ell: int) -> SubgroupClassification:
    """Membership in the subgroup with ab = cd = 0 mod 2l (and mod 2), plus the
    divisors ell_a = gcd(l, a), ell_c = gcd(l, c), which multiply to l for
    members."""
    if ell < 1:
        raise DomainError("ell must be a positive integer")
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    in_2l = (a * b) % (2 * ell) == 0 and (c * d) % (2 * ell) == 0
    in_2 = (a * b) % 2 == 0 and (c * d) % 2 == 0
    ell_a = math.gcd(ell, abs(a))
    ell_c = math.gcd(ell, abs(c))
    if in_2l and ell_a * ell_c != ell:
        raise SubgroupError(f"gcd factorization l_a*l_c != l for {gamma} at l={ell}")
    return SubgroupClassification(in_2l, in_2, ell_a, ell_c)


def _require_member(gamma: ModularMatrix, ell: int) -> SubgroupClassification:
    cls = classify_subgroup(gamma, ell)
    if not cls.in_gamma_1_2l:
        raise SubgroupError(f"{gamma} is not in the level-{2*ell} theta subgroup")
    return cls


# -- lattice operators --------------------------------------------------------


def a2_matrix(ell: int) -> np.ndarray:
    diag = [1.0, 1.0] + [cmath.exp(-2 * _IPI * r / ell) for r in range(1, ell)]
    return np.diag(np.array(diag, dtype=complex))


def a3_factor(ell: int, tau: complex, nu: complex) -> complex:
    return cmath.exp(_IPI * ell * tau + 2 * _IPI * ell * nu)


def b_cycle_matrix(ell: int) -> np.ndarray:
    """Cyclic permutation: (Bx)_0 = x_{l-1}, (Bx)_i = x_{i-1}."""
    B = np.zeros((ell, ell), dtype=complex)
    B[0, ell - 1] = 1.0
    for i in range(1, ell):
        B[i, i - 1] = 1.0
    return B


def a4_matrix(ell: int, tau: complex, nu: complex, mu: complex) -> np.ndarray:
    """Top-left entry times K plus the coupling row, cyclic block on the theta
    components.  With the component ordering theta_{2r,l}, r = 0..l-1, the
    coupling row picks the last component (index r wraps to 0 under the
    translation by tau/l), which reduces to the displayed (1,0,...,0) row for
    l = 1."""
    out = np.zeros((ell + 1, ell + 1), dtype=complex)
    out[0, 0] = cmath.exp(2 * _IPI * mu - _IPI * tau / ell)
    out[0, ell] = 1.0
    out[1:, 1:] = b_cycle_matrix(ell)
    return cmath.exp(2 * _IPI * nu + _IPI * tau / ell) * out


def lattice_operator(i: int, ell: int, f):
    """U_i acting on f: (tau, nu, mu) -> C^{l+1}; the four operators implement
    the translations nu+1, (nu,mu)+(1,-1)/l, nu+tau, (nu,mu)+(tau,-tau)/l."""
    if i == 1:
        return lambda tau, nu, mu: f(tau, nu + 1, mu)
    if i == 2:
        def u2(tau, nu, mu):
            return a2_matrix(ell) @ f(tau, nu + 1.0 / ell, mu - 1.0 / ell)
        return u2
    if i == 3:
        def u3(tau, nu, mu):
            return a3_factor(ell, tau, nu) * f(tau, nu + tau, mu)
        return u3
    if i == 4:
        def u4(tau, nu, mu):
            return a4_matrix(ell, tau, nu, mu) @ f(tau, nu + tau / ell, mu - tau / ell)
        return u4
    raise DomainError("operator index must be 1..4")


def theta_vector(ell: int, tau: complex, nu: complex, tol: Tolerance | None = None) -> np.ndarray:
    """(theta_{2r,l}(tau/2, nu))_{r=0..l-1}."""
    return np.array([theta_rl(2 * r, ell, tau / 2, nu, tol) for r in range(ell)], dtype=complex)


def section_vector(ell: int, point: EvalPoint, tol: Tolerance | None = None) -> np.ndarray:
    """(K_l(tau, nu, mu), theta_vector(tau, nu)) of length l+1."""
    k = eval_K(AppellSpec(ell, point), tol)
    return np.concatenate(([k], theta_vector(ell, point.tau, point.nu, tol)))


# -- finite representation and automorphy matrices ----------------------------


def rep_Dprime(ell: int, gamma: ModularMatrix) -> np.ndarray:
    """d_{s,n} = l_a^{-1/2} e^{-2 pi i b c r s / l} when n = (s a - r c) mod l
    for the unique 0 <= r < l_a, else 0."""
    cls = _require_member(gamma, ell)
    a, b, c = gamma.a, gamma.b, gamma.c
    out = np.zeros((ell, ell), dtype=complex)
    norm = 1.0 / math.sqrt(cls.ell_a)
    for s in range(ell):
        for r in range(cls.ell_a):
            n = (s * a - r * c) % ell
            out[s, n] += norm * cmath.exp(-2 * _IPI * b * c * r * s / ell)
    return out


def rep_D(ell: int, gamma: ModularMatrix) -> np.ndarray:
    """D_l(gamma) = D'_l(gamma)^{-1}, with a conditioning assertion."""
    dp = rep_Dprime(ell, gamma)
    cond = np.linalg.cond(dp)
    if not np.isfinite(cond) or cond > 1e8:
        raise SingularMatrixError(
            f"D'_l({gamma}) numerically singular (cond={cond:.2e}); convention bug"
        )
    return np.linalg.inv(dp)


def theta_block(ell: int, gamma: ModularMatrix, tau: complex) -> np.ndarray:
    """E_l(gamma; tau) = zeta_{c/l_c, l_a d}^{-1} (c tau + d)^{-1/2} D_l(gamma)."""
    cls = _require_member(gamma, ell)
    c, d = gamma.c, gamma.d
    zeta = zeta_cd(c // cls.ell_c, cls.ell_a * d)
    return rep_D(ell, gamma) / (zeta * cmath.sqrt(c * tau + d))


def theta_vector_automorphy(ell: int, gamma: ModularMatrix, tau: complex, nu: complex) -> np.ndarray:
    """k_l(gamma; tau, nu) E_l(gamma; tau): the l x l factor under which the
    theta vector is invariant."""
    c, d = gamma.c, gamma.d
    k = cmath.exp(-_IPI * c * ell * nu * nu / (c * tau + d))
    return k * theta_block(ell, gamma, tau)


@dataclass(frozen=True)
class AutomorphyMatrix:
    entries: np.ndarray
    gamma: ModularMatrix
    case_tag: str


def automorphy_J(
    ell: int,
    gamma: ModularMatrix,
    point: EvalPoint,
    phi_eval=None,
    tol: Tolerance | None = None,
) -> AutomorphyMatrix:
    """The (l+1) x (l+1) matrix automorphy factor.

    Cases: c > 0 assembles the generic block with the Phi-vector; c = 0 splits
    into the central element, pure T-powers, and their product; c < 0 composes
    as J(gamma) = J(-gamma) J(C) through the cocycle (C is central and J(C) is
    constant).  The Phi-vector components are indexed r = 0..l-1, pairing with
    the theta components theta_{2r,l}; this is fixed by the S-example, where
    the components are Phi(l tau, l mu - a tau) for a = 0..l-1.
    """
    if phi_eval is None:
        from .phifun import eval_Phi

        phi_eval = eval_Phi
    cls = _require_member(gamma, ell)
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    tau, nu, mu = point.tau, point.nu, point.mu
    n = ell + 1

    if c == 0:
        if gamma.a == 1:
            return AutomorphyMatrix(np.eye(n, dtype=complex), gamma, "T-power")
        # gamma = -1 or (-1, 2lb; 0, -1): the constant block (-1, v; 0, D(C))
        out = np.zeros((n, n), dtype=complex)
        out[0, 0] = -1.0
        out[0, 1] = 1.0
        out[1, 1] = 1.0
        for i in range(2, n):
            out[i, n + 1 - i] = 1.0
        tag = "C" if gamma == C else "negative-T-power"
        return AutomorphyMatrix(out, gamma, tag)

    if c < 0:
        jneg = automorphy_J(ell, -gamma, point, phi_eval, tol).entries
        jc = automorphy_J(ell, C, point, phi_eval, tol).entries
        return AutomorphyMatrix(jneg @ jc, gamma, "negative-c")

    j = c * tau + d
    zeta = zeta_cd(c // cls.ell_c, cls.ell_a * d)
    k_factor = cmath.exp(-_IPI * c * ell * nu * nu / j)
    l_factor = cmath.exp(_IPI * c * ell * mu * mu / j) / j
    E = rep_D(ell, gamma) / (zeta * cmath.sqrt(j))
    Fvec = _phi_vector(ell, gamma, cls, tau, mu, phi_eval)
    out = np.zeros((n, n), dtype=complex)
    out[0, 0] = k_factor * l_factor
    out[0, 1:] = k_factor * (Fvec @ E)
    out[1:, 1:] = k_factor * E
    return AutomorphyMatrix(out, gamma, "c>0")


def _twisted_phi(b: float, tau: complex, w: complex, n_residues: int, phi_eval) -> complex:
    """The root-of-unity-twisted Gaussian kernel value through Phi:

        e^{i pi (b^2 - 2 b w)/tau} [Phi(tau, w - b)
            + (i/sqrt(-i tau)) * (sum_{n=0}^{N-1} or -sum_{n=N}^{-1})
              e^{i pi n^2/tau + 2 i pi n (w-b)/tau}]

    b is the fractional part of the kernel twist; N counts the kernel poles
    crossed when the defining contour is reduced to the R - i0 reference line.
    """
    s = sqrt_neg_i_tau(tau)
    if n_residues >= 0:
        corr = sum(
            cmath.exp(_IPI * m * m / tau + 2 * _IPI * m * (w - b) / tau) for m in range(n_residues)
        )
    else:
        corr = -sum(
            cmath.exp(_IPI * m * m / tau + 2 * _IPI * m * (w - b) / tau) for m in range(n_residues, 0)
        )
    return cmath.exp(_IPI * (b * b - 2 * b * w) / tau) * (phi_eval(tau, w - b) + (1j / s) * corr)


def _phi_vector(ell, gamma, cls, tau, mu, phi_eval) -> np.ndarray:
    """The row vector F coupling K to the theta components for c > 0.

    The s-th kernel carries the twist beta_s = s * l_a d l_c / c; only its
    fractional part enters, and the residue count depends on the component
    index through N_s(r) = ceil(frac(beta_s) - r d/c) (the displayed formula
    with plain Phi(l tau + l d/c, l mu + s l d/c - r tau) is the special case
    where every twist is below 1 and r = 0).  Fixed by solving the invariance
    condition for F and verified on random subgroup elements for l <= 3.
    """
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    j = c * tau + d
    cp = c // cls.ell_c
    dp = cls.ell_a * d
    tt = ell * tau + ell * Fraction(d, c)
    zeta = zeta_cd(cp, dp)
    pref = -zeta * 1j * cmath.sqrt(-1j) * math.sqrt(cls.ell_c / c) * cmath.exp(_IPI * c * ell * mu * mu / j)
    out = np.zeros(ell, dtype=complex)
    for r in range(ell):
        w = ell * mu - r * tau
        acc = 0j
        for s_idx in range(cp):
            beta = Fraction(s_idx * dp, cp)
            bfrac = beta - math.floor(beta)
            n_res = math.ceil(bfrac - Fraction(r * d, c))
            acc += cmath.exp(-_IPI * s_idx * s_idx * dp / cp) * _twisted_phi(
                float(bfrac), complex(tt), w, n_res, phi_eval
            )
        out[r] = pref * cmath.exp(_IPI * r * d * (2 * ell * mu - r * tau) / (ell * j)) * acc
    return out


def check_bundle_invariance(
    ell: int,
    gamma: ModularMatrix,
    point: EvalPoint,
    tol: Tolerance | None = None,
    phi_eval=None,
) -> float:
    """sup-norm of J_l(gamma; p) section(gamma p) - section(p)."""
    jm = automorphy_J(ell, gamma, point, phi_eval, tol)
    transformed = section_vector(ell, gamma.act(point), tol)
    base = section_vector(ell, point, tol)
    return float(np.max(np.abs(jm.entries @ transformed - base)))


def check_cocycle(
    ell: int,
    alpha: ModularMatrix,
    beta: ModularMatrix,
    point: EvalPoint,
    tol: Tolerance | None = None,
    phi_eval=None,
) -> float:
    """Normalized sup-norm of J(alpha beta; p) - J(beta; p) J(alpha; beta p)."""
    left = automorphy_J(ell, alpha * beta, point, phi_eval, tol).entries
    right = (
        automorphy_J(ell, beta, point, phi_eval, tol).entries
        @ automorphy_J(ell, alpha, beta.act(point), phi_eval, tol).entries
    )
    scale = max(1.0, float(np.max(np.abs(left))))
    return float(np.max(np.abs(left - right))) / scale


def random_subgroup_element(
    ell: int,
    rng,
    max_c: int = 8,
    max_word: int = 10,
    max_tries: int = 400,
) -> ModularMatrix:
    """Random word in {S, S^-1, T^{+-2l}} with |c| <= max_c, with d centered
    modulo 2l*c to keep rational offsets d/c small (right T^{2l}-multiplication
    stays in the subgroup)."""
    gens = [S, S.inverse(), t_power(2 * ell), t_power(-2 * ell)]
    for _ in range(max_tries):
        m = IDENTITY
        for _ in range(rng.randint(1, max_word)):
            m = m * gens[rng.randrange(len(gens))]
        if m.c == 0 or abs(m.c) > max_c:
            continue
        k = round(-m.d / (2 * ell * m.c))
        m = m * t_power(2 * ell * k)
        cls = classify_subgroup(m, ell)
        if cls.in_gamma_1_2l:
            return m
    raise SubgroupError("could not sample a subgroup element within bounds")


__all__ = [
    "ModularMatrix",
    "S",
    "T",
    "C",
    "IDENTITY",
    "t_power",
    "SubgroupClassification",
    "classify_subgroup",
    "a2_matrix",
    "a3_factor",
    "a4_matrix",
    "b_cycle_matrix",
    "lattice_operator",
    "theta_vector",
    "section_vector",
    "rep_Dprime",
    "rep_D",
    "theta_block",
    "theta_vector_automorphy",
    "AutomorphyMatrix",
    "automorphy_J",
    "check_bundle_invariance",
    "check_cocycle",
    "random_subgroup_element",
]
