"""Explicit orthogonal maps to reduced forms.

* :func:`recover_n2` solves the closed-form angle equations for n = 2 and
  returns all eight decoupling maps (four rotations, four reflections).
* :func:`recover_rotation_via_covariant` and :func:`recover_fd_generic`
  diagonalize a covariant matrix and test the 2**n eigenvector sign
  choices.
* :func:`recover_pd_params` and :func:`recover_pd_rotation` invert the
  partial-test quantities to canonical parameters and find the map.

Maps found numerically for an exact tensor are snapped to nearby rationals
and re-verified in exact arithmetic; if that succeeds the report is exact
(residual 0), otherwise it falls back to float maps.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateEigenvalues,
    NoCandidateMatches,
    NotDecoupleable,
    NotOrthogonal,
    Unsolvable,
    ZeroTensor,
)
from .orbitlab import fd_pattern_triples, make_pd_canonical, pd_pattern_triples
from .tensor import OrthogonalMap, SymTensor3, act, gamma_star2, covariants, u_dot_gamma
from .tolerance import DEFAULT_TOL, EIGEN_GAP, threshold

__all__ = [
    "PDParams",
    "RecoveryReport",
    "fd_residual",
    "ode_matrices",
    "pd_residual",
    "recover_fd_generic",
    "recover_n2",
    "recover_pd_params",
    "recover_pd_rotation",
    "recover_rotation_via_covariant",
]

RECOVER_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class RecoveryReport:
    """Verified maps and what they produce.

    ``residual`` is the largest off-pattern (or off-target) entry over the
    returned maps, recomputed with :func:`act`.
    """

    maps: list
    reduced: SymTensor3 | None
    residual: object
    branch_count: int
    reduced_forms: list = field(default_factory=list)
    angles: list = field(default_factory=list)


def fd_residual(gamma: SymTensor3):
    """Largest entry outside the (i, i, i) diagonal."""
    return max((abs(gamma[t]) for t in fd_pattern_triples(gamma.n)), default=gamma.values[0] * 0)


def pd_residual(gamma: SymTensor3):
    """Largest entry coupling the last axis to the others."""
    return max((abs(gamma[t]) for t in pd_pattern_triples(gamma.n)), default=gamma.values[0] * 0)


def _snap(mat, max_den=10**7):
    """Nearest rational matrix, if it is exactly orthogonal."""
    q = np.array([[Fraction(float(x)).limit_denominator(max_den) for x in row] for row in mat], dtype=object)
    try:
        return OrthogonalMap.from_matrix(q)
    except NotOrthogonal:
        return None


def _verified(gamma, mat, residual_fn, tol, target=None):
    """(map, image, residual) if ``mat`` passes the check, else None.

    The float check uses ``tol * (1 + |G|)``.  For exact tensors a passing
    candidate is then snapped to a rational map and, if that reproduces the
    pattern with zero residual, the exact map is returned instead.
    """
    sigma = OrthogonalMap.from_matrix(np.asarray(mat, dtype=float), tol=1e-9)
    img = act(sigma, gamma.to_float())
    res = float(residual_fn(img)) if target is None else img.max_abs_diff(target.to_float())
    if res > tol * (1 + gamma.norm()):
        return None
    if gamma.exact:
        exact_sigma = _snap(mat)
        if exact_sigma is not None:
            exact_img = act(exact_sigma, gamma)
            exact_res = residual_fn(exact_img) if target is None else exact_img.max_abs_diff(target)
            if exact_res == 0:
                return exact_sigma, exact_img, Fraction(0)
    return sigma, img, res


# -- n = 2 ------------------------------------------------------------------


def n2_relation(gamma: SymTensor3):
    """a2 (a2 - a0) - a1 (a3 - a1); zero exactly on decoupleable tensors."""
    a0, a1, a2, a3 = gamma.n2_params()
    return a2 * (a2 - a0) - a1 * (a3 - a1)


def _n2_angles(a0, a1, a2, a3):
    num = complex(float(a0 + a2), float(a1 + a3))
    den = complex(float(a0 - 3 * a2), float(a3 - 3 * a1))
    if den == 0:
        raise NotDecoupleable("angle equation has a zero denominator")
    base = cmath.phase(num / den) / 4
    return [base + m * math.pi / 2 for m in range(4)]


def _rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def recover_n2(gamma: SymTensor3, tol=DEFAULT_TOL) -> RecoveryReport:
    """All eight orthogonal maps taking an n = 2 tensor to decoupled form.

    With e^{4i theta} = ((a0 + a2) + i(a1 + a3)) / ((a0 - 3a2) + i(a3 - 3a1)),
    the rotation by theta decouples; the four solutions differ by quarter
    turns.  The reflection branch applies the same equation to the swapped
    tensor and composes with the swap.  ``angles`` lists the rotation angle
    of each map (reflection maps are rotation(angle) @ swap).
    """
    if gamma.n != 2:
        raise NotDecoupleable("recover_n2 needs n = 2")
    if gamma.is_zero():
        raise ZeroTensor("the zero tensor has no distinguished decoupling map")
    rel = n2_relation(gamma)
    thresh = threshold(gamma.norm(), 2, tol)
    if (gamma.exact and rel != 0) or (not gamma.exact and abs(rel) > thresh):
        raise NotDecoupleable(f"a2(a2 - a0) - a1(a3 - a1) = {rel}")
    swap = OrthogonalMap.swap2()
    swapped = act(swap, gamma)
    maps, forms, angles, residuals = [], [], [], []
    for src, pre in ((gamma, None), (swapped, swap)):
        for theta in _n2_angles(*src.n2_params()):
            mat = _rot(theta)
            if pre is not None:
                mat = mat @ pre.float_matrix()
            ok = _verified(gamma, mat, fd_residual, tol)
            if ok is None:
                raise NoCandidateMatches(f"branch at angle {theta:.6g} does not decouple")
            sigma, img, res = ok
            maps.append(sigma)
            forms.append(img)
            angles.append(theta)
            residuals.append(res)
    return RecoveryReport(maps, forms[0], max(residuals), len(maps), forms, angles)


# -- covariant eigenvector method ---------------------------------------------


_SELECTORS = {
    "gamma_star2": gamma_star2,
    "d_star2": lambda g: covariants(g).d_star2,
    "u_dot_gamma": u_dot_gamma,
}


def sorted_eigh(q, gap=EIGEN_GAP):
    """Ascending eigenpairs with sign-normalized eigenvectors.

    Each eigenvector's first clearly nonzero component is made positive.
    Raises DegenerateEigenvalues when two eigenvalues are closer than
    ``gap * (1 + |Q|)``.
    """
    q = np.asarray(q, dtype=float)
    vals, vecs = np.linalg.eigh(q)
    scale = 1.0 + float(np.max(np.abs(q))) if q.size else 1.0
    if len(vals) > 1 and float(np.min(np.diff(vals))) <= gap * scale:
        raise DegenerateEigenvalues(f"eigenvalues {vals.tolist()} are not separated")
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        lead = next(x for x in col if abs(x) > 1e-12)
        if lead < 0:
            vecs[:, k] = -col
    return vals, vecs


def sign_vectors(n):
    return list(itertools.product((1, -1), repeat=n))


def recover_rotation_via_covariant(gamma1, gamma2, which="gamma_star2", tol=RECOVER_TOL) -> RecoveryReport:
    """Maps rho with act(rho, gamma1) = gamma2 built from eigenvectors.

    With Q1 = U diag U^T and Q2 = V diag V^T (same ascending eigenvalues),
    the candidates are V diag(eps) U^T over all sign vectors eps; only
    those reproducing gamma2 are kept.  An empty ``maps`` list means no
    candidate matched.
    """
    select = _SELECTORS[which]
    _, u = sorted_eigh(select(gamma1))
    _, v = sorted_eigh(select(gamma2))
    maps, residuals = [], []
    best = math.inf
    for eps in sign_vectors(gamma1.n):
        mat = v @ np.diag(eps) @ u.T
        ok = _verified(gamma1, mat, None, tol, target=gamma2)
        if ok is None:
            img = act(OrthogonalMap.from_matrix(mat, tol=1e-9), gamma1.to_float())
            best = min(best, img.max_abs_diff(gamma2.to_float()))
            continue
        maps.append(ok[0])
        residuals.append(ok[2])
    residual = max(residuals) if residuals else best
    return RecoveryReport(maps, gamma2, residual, 2**gamma1.n)


def recover_fd_generic(gamma: SymTensor3, tol=RECOVER_TOL) -> RecoveryReport:
    """Diagonalizing maps diag(eps) U^T from the eigenvectors of G*2.

    All 2**n candidates are tried in sign-vector order; the accepted ones
    are returned.  Empty ``maps`` proves the tensor is not fully
    decoupleable (given separated eigenvalues).
    """
    _, u = sorted_eigh(gamma_star2(gamma))
    maps, forms, residuals = [], [], []
    best = math.inf
    for eps in sign_vectors(gamma.n):
        mat = np.diag(eps) @ u.T
        ok = _verified(gamma, mat, fd_residual, tol)
        if ok is None:
            img = act(OrthogonalMap.from_matrix(mat, tol=1e-9), gamma.to_float())
            best = min(best, float(fd_residual(img)))
            continue
        maps.append(ok[0])
        forms.append(ok[1])
        residuals.append(ok[2])
    residual = max(residuals) if residuals else best
    return RecoveryReport(maps, forms[0] if forms else None, residual, 2**gamma.n, forms)


# -- partial decoupling, n = 3 -----------------------------------------------


@dataclass(frozen=True)
class PDParams:
    alpha: object
    gamma1: object
    gamma2: object
    beta3: object

    def as_tuple(self):
        return (self.alpha, self.gamma1, self.gamma2, self.beta3)

    def as_dict(self):
        return {"alpha": self.alpha, "gamma1": self.gamma1, "gamma2": self.gamma2, "beta3": self.beta3}


def _isqrt_exact(x):
    """Exact square root of a nonnegative Fraction, or None."""
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _sqrt(x, exact):
    if exact:
        r = _isqrt_exact(x)
        if r is not None:
            return r
    return math.sqrt(max(float(x), 0.0))


def degree8(q2, q3, q4):
    """Solvability polynomial; equals 4 q2^3 gamma2^2 on canonical forms."""
    return (
        -q2**4 + 4 * q2**2 * q3 - 16 * q3**2 + 2 * q2**3 * q4 - 8 * q2 * q3 * q4
        - 2 * q2**2 * q4**2 + 8 * q3 * q4**2 + 2 * q2 * q4**3 - q4**4
    )


def recover_pd_params(qt, norm=None, tol=DEFAULT_TOL) -> PDParams:
    """Canonical (alpha, gamma1, gamma2, beta3) from the partial quadruple.

    Returns alpha, gamma2, beta3 >= 0.  When q2 = 0 the block is a pure
    rotation-invariant family and (gamma1, gamma2) = (sqrt(q4)/2, 0) is
    chosen.  Raises Unsolvable naming the violated condition.  Values are
    Fractions when the inputs are and every square root is rational.

    ``norm`` (the tensor's Frobenius norm) scales the float tolerances.
    """
    q1, q2, q3, q4 = qt
    exact = all(isinstance(v, Fraction) for v in (q1, q2, q3, q4))
    nrm = 0.0 if norm is None else float(norm)

    def neg(x, degree):
        return x < 0 if exact else float(x) < -threshold(nrm, degree, tol)

    def zero(x, degree):
        return x == 0 if exact else abs(float(x)) <= threshold(nrm, degree, tol)

    if neg(q1, 2):
        raise Unsolvable("q1<0", f"q1 = {q1}")
    if neg(q2, 2):
        raise Unsolvable("q2<0", f"q2 = {q2}")
    beta3 = _sqrt(q1, exact)
    if zero(q2, 2):
        if neg(q3, 4) or neg(q4, 2) or not zero(q3 - q4 * q4 / 4, 4):
            raise Unsolvable("q2=0 branch", f"q3 = {q3}, q4 = {q4}")
        zero_val = Fraction(0) if exact else 0.0
        return _uniform(PDParams(zero_val, _sqrt(q4, exact) / 2, zero_val, beta3))
    d8 = degree8(q2, q3, q4)
    if neg(d8, 16):
        raise Unsolvable("degree8<0", f"value {d8}")
    alpha = _sqrt(q2, exact) / 4
    gamma1 = -alpha * (q2**2 - 8 * q3 - 2 * q2 * q4 + 2 * q4**2) / q2**2
    g2sq = d8 / (4 * q2**3)
    gamma2 = _sqrt(g2sq, exact and isinstance(g2sq, Fraction))
    return _uniform(PDParams(alpha, gamma1, gamma2, beta3))


def _uniform(p):
    """All Fractions, or all floats as soon as one root is irrational."""
    if all(isinstance(x, Fraction) for x in p.as_tuple()):
        return p
    return PDParams(*(float(x) for x in p.as_tuple()))


def recover_pd_rotation(gamma: SymTensor3, params: PDParams, tol=RECOVER_TOL) -> RecoveryReport:
    """Maps taking a partially decoupleable tensor to its canonical form."""
    target = make_pd_canonical(*params.as_tuple())
    if gamma.exact and not target.exact:
        gamma_for = gamma.to_float()
    else:
        gamma_for = gamma
    report = recover_rotation_via_covariant(gamma_for, target, "gamma_star2", tol)
    if not report.maps:
        raise NoCandidateMatches(f"no sign choice reproduces the canonical form (best {report.residual:.3e})")
    return RecoveryReport(report.maps, target, report.residual, report.branch_count, [target])


# -- the ODE behind the n = 2 angle equations ---------------------------------


def ode_matrices():
    """(L, E, Lambda) with E L = Lambda E.

    L generates the rotation action on (a0, a1, a2, a3); the rows of E are
    its complex eigen-coordinates, Lambda = diag(3i, -3i, i, -i).
    """
    lmat = np.array([[0, 3, 0, 0], [-1, 0, 2, 0], [0, -2, 0, 1], [0, 0, -3, 0]], dtype=complex)
    emat = np.array(
        [[1, -3j, -3, 1j], [-1, -3j, 3, 1j], [-1, 1j, -1, 1j], [1, 1j, 1, 1j]],
        dtype=complex,
    )
    lam = np.diag([3j, -3j, 1j, -1j])
    return lmat, emat, lam
