"""Membership classifiers for fully and partially decoupleable tensors."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import relations
from .errors import DegenerateEigenvalues, DimensionMismatch, Unsolvable
from .invariants import (
    charpoly_coefficients,
    domain_excluded,
    oa_basis,
    qtilde_full,
    qtilde_from_invariants,
    so2_basis,
)
from .recover import (
    RECOVER_TOL,
    n2_relation,
    recover_fd_generic,
    recover_n2,
    recover_pd_params,
)
from .tensor import SymTensor3, gamma_star2, u_dot_gamma
from .tolerance import BOUNDARY_FACTOR, DEFAULT_TOL, Judgement, combine, judge_zero, threshold

__all__ = [
    "Classification",
    "FullyDecoupleable",
    "Indeterminate",
    "NotDecoupleable",
    "PartiallyNotFully",
    "classify_fd_generic",
    "classify_fd_n3",
    "classify_n2",
    "classify_pd_not_fd_n3",
    "fd_necessary_quick",
]


@dataclass(frozen=True)
class FullyDecoupleable:
    betas: tuple  # nonnegative, ascending; signs are a recovery matter


@dataclass(frozen=True)
class PartiallyNotFully:
    alpha: object
    gamma1: object
    gamma2: object
    beta3: object


@dataclass(frozen=True)
class NotDecoupleable:
    pass


@dataclass(frozen=True)
class Indeterminate:
    reason: str  # "DegenerateEigenvalues" | "ToleranceBoundary" | "DomainExcluded"


@dataclass(frozen=True, eq=False)
class Classification:
    verdict: object
    residuals: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)  # (name, Judgement or bool)
    map: object = None

    @property
    def accepted(self):
        return isinstance(self.verdict, (FullyDecoupleable, PartiallyNotFully))

    @property
    def exit_code(self):
        if self.accepted:
            return 0
        return 2 if isinstance(self.verdict, Indeterminate) else 1

    def max_excess(self):
        """Largest |residual| / threshold over the residual table."""
        ratios = [abs(float(self.residuals[k])) / self.thresholds[k] for k in self.residuals if self.thresholds.get(k)]
        return max(ratios, default=0.0)


def _judge_table(res, degrees, gamma, tol):
    norm = gamma.norm()
    thresholds = {k: threshold(norm, degrees[k], tol) for k in res}
    marks = [(k, judge_zero(res[k], thresholds[k], gamma.exact)) for k in res]
    return thresholds, marks


def _from_judgement(j, accepted_verdict):
    if j is Judgement.PASS:
        return accepted_verdict
    if j is Judgement.BOUNDARY:
        return Indeterminate("ToleranceBoundary")
    return NotDecoupleable()


def _betas_from_eigs(gamma: SymTensor3, eigs=None):
    """Nonnegative ascending square roots of the eigenvalues of G*2.

    Exact tensors get rational betas when the float roots snap to
    rationals whose squares reproduce the characteristic polynomial.
    """
    g2 = gamma_star2(gamma)
    if eigs is None:
        eigs = np.linalg.eigvalsh(np.asarray(g2, dtype=float))
    betas = [float(np.sqrt(max(z, 0.0))) for z in sorted(eigs)]
    if gamma.exact:
        snapped = [Fraction(b).limit_denominator(10**6) for b in betas]
        coeffs = charpoly_coefficients(g2, True)
        squares = np.array([[b * b if i == j else Fraction(0) for j in range(len(betas))] for i, b in enumerate(snapped)], dtype=object)
        if charpoly_coefficients(squares, True) == coeffs:
            return tuple(snapped)
    return tuple(betas)


def classify_n2(gamma: SymTensor3, tol=DEFAULT_TOL) -> Classification:
    """n = 2 test: a2 (a2 - a0) = a1 (a3 - a1), cross-checked by I1 = I2.

    I1 = |Trace G|^2 and I2 = Trace G*2 come from the invariant module, so
    the two forms are computed along independent routes; they must agree.
    """
    if gamma.n != 2:
        raise DimensionMismatch("classify_n2 needs n = 2")
    rel = n2_relation(gamma)
    inv = so2_basis(gamma)
    trace_form = inv.i1 - inv.i2
    res = {"relation": rel, "I1-I2": trace_form}
    thresholds, marks = _judge_table(res, {"relation": 2, "I1-I2": 2}, gamma, tol)
    thresholds["I1-I2"] *= 2  # I1 - I2 = -2 * relation
    marks[1] = ("I1-I2", judge_zero(trace_form, thresholds["I1-I2"], gamma.exact))
    j_rel, j_tr = marks[0][1], marks[1][1]
    if j_rel is not j_tr:
        return Classification(Indeterminate("ToleranceBoundary"), res, thresholds, marks)
    if j_rel is not Judgement.PASS:
        return Classification(_from_judgement(j_rel, None), res, thresholds, marks)
    if gamma.is_zero():
        zero = Fraction(0) if gamma.exact else 0.0
        return Classification(FullyDecoupleable((zero, zero)), res, thresholds, marks)
    report = recover_n2(gamma, tol)
    reduced = report.reduced
    betas = tuple(sorted((abs(reduced[0, 0, 0]), abs(reduced[1, 1, 1]))))
    marks.append(("recover_n2", True))
    return Classification(FullyDecoupleable(betas), res, thresholds, marks, report.maps[0])


def fd_env(gamma: SymTensor3):
    inv = oa_basis(gamma)
    env = inv.as_dict()
    q = qtilde_full(gamma)
    env.update(q1=q[0], q2=q[1], q3=q[2])
    return env


def classify_fd_n3(gamma: SymTensor3, tol=DEFAULT_TOL) -> Classification:
    """n = 3 full decoupleability from the thirteen relations."""
    if gamma.n != 3:
        raise DimensionMismatch("classify_fd_n3 needs n = 3")
    env = fd_env(gamma)
    res = relations.residuals(relations.FD_RELATIONS, env, gamma.exact)
    degrees = {r.name: r.degree for r in relations.FD_RELATIONS}
    thresholds, marks = _judge_table(res, degrees, gamma, tol)
    j = combine(m for _, m in marks)
    if j is Judgement.PASS:
        return Classification(FullyDecoupleable(_betas_from_eigs(gamma)), res, thresholds, marks)
    return Classification(_from_judgement(j, None), res, thresholds, marks)


def classify_pd_not_fd_n3(gamma: SymTensor3, tol=DEFAULT_TOL) -> Classification:
    """n = 3 partial-but-not-full test: nine relations plus solvability.

    The test is only defined off the hypersurface H2 = 10 J2, which
    contains every fully decoupleable tensor; there the verdict is
    Indeterminate("DomainExcluded").
    """
    if gamma.n != 3:
        raise DimensionMismatch("classify_pd_not_fd_n3 needs n = 3")
    inv = oa_basis(gamma)
    if domain_excluded(gamma, inv, tol):
        marks = [("H2!=10*J2", Judgement.FAIL)]
        return Classification(Indeterminate("DomainExcluded"), {}, {}, marks)
    q = qtilde_from_invariants(inv.H2, inv.H4, inv.J2, inv.L4)
    if not gamma.exact:
        q = tuple(float(x) for x in q)
    env = inv.as_dict()
    env["q1"] = q[0]
    res = relations.residuals(relations.PD_RELATIONS, env, gamma.exact)
    degrees = {r.name: r.degree for r in relations.PD_RELATIONS}
    thresholds, marks = _judge_table(res, degrees, gamma, tol)
    marks.insert(0, ("H2!=10*J2", Judgement.PASS))
    j = combine(m for _, m in marks)
    if j is not Judgement.PASS:
        return Classification(_from_judgement(j, None), res, thresholds, marks)
    try:
        p = recover_pd_params(q, norm=gamma.norm(), tol=tol)
    except Unsolvable as exc:
        marks.append((f"solvable:{exc.condition}", Judgement.FAIL))
        return Classification(NotDecoupleable(), res, thresholds, marks)
    marks.append(("solvable", Judgement.PASS))
    verdict = PartiallyNotFully(p.alpha, p.gamma1, p.gamma2, p.beta3)
    return Classification(verdict, res, thresholds, marks)


def classify_fd_generic(gamma: SymTensor3, tol=RECOVER_TOL) -> Classification:
    """Any-n full decoupleability via eigenvectors of G*2.

    Complete whenever G*2 has distinct eigenvalues: Gamma is fully
    decoupleable iff one of the 2**n sign choices diagonalizes it.
    """
    if gamma.is_zero():
        zero = Fraction(0) if gamma.exact else 0.0
        return Classification(FullyDecoupleable((zero,) * gamma.n))
    try:
        report = recover_fd_generic(gamma, tol)
    except DegenerateEigenvalues:
        return Classification(Indeterminate("DegenerateEigenvalues"), certificates=[("eigen-gap", Judgement.FAIL)])
    thresh = tol * (1 + gamma.norm())
    res = {"offpattern": report.residual}
    ths = {"offpattern": thresh}
    if report.maps:
        marks = [("eigen-gap", Judgement.PASS), ("offpattern", Judgement.PASS)]
        betas = tuple(sorted(abs(report.reduced[i, i, i]) for i in range(gamma.n)))
        return Classification(FullyDecoupleable(betas), res, ths, marks, report.maps[0])
    if report.residual <= thresh * BOUNDARY_FACTOR:
        marks = [("eigen-gap", Judgement.PASS), ("offpattern", Judgement.BOUNDARY)]
        return Classification(Indeterminate("ToleranceBoundary"), res, ths, marks)
    marks = [("eigen-gap", Judgement.PASS), ("offpattern", Judgement.FAIL)]
    return Classification(NotDecoupleable(), res, ths, marks)


def fd_necessary_quick(gamma: SymTensor3, tol=DEFAULT_TOL) -> bool:
    """G*2 == u.G entrywise; False proves the tensor is not fully decoupleable."""
    diff = gamma_star2(gamma) - u_dot_gamma(gamma)
    if gamma.exact:
        return all(x == 0 for x in diff.flat)
    return float(np.max(np.abs(diff))) <= threshold(gamma.norm(), 2, tol)

