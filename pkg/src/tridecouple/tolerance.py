"""Tolerance conventions shared by every float-mode decision.

A degree-``d`` polynomial identity counts as satisfied when
``|lhs - rhs| <= tol * (1 + |Gamma|_F)**d``.  Residuals above the threshold but
within ``BOUNDARY_FACTOR`` of it are reported as sitting on the tolerance
boundary instead of being forced to a verdict.
Exact (rational) inputs bypass all of this: zero means zero.
"""
from enum import Enum

DEFAULT_TOL = 1e-9
ORTHO_TOL = 1e-10
EIGEN_GAP = 1e-8
BOUNDARY_FACTOR = 10.0


class Judgement(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    BOUNDARY = "boundary"


def threshold(norm, degree, tol=DEFAULT_TOL):
    return tol * (1.0 + float(norm)) ** degree


def judge_zero(residual, thresh, exact):
    """Decide whether ``residual`` is zero."""
    if exact:
        return Judgement.PASS if residual == 0 else Judgement.FAIL
    r = abs(float(residual))
    if r <= thresh:
        return Judgement.PASS
    if r > thresh * BOUNDARY_FACTOR:
        return Judgement.FAIL
    return Judgement.BOUNDARY


def judge_nonneg(value, thresh, exact):
    """Decide whether ``value >= 0``; small negatives are within tolerance."""
    if exact:
        return Judgement.PASS if value >= 0 else Judgement.FAIL
    v = float(value)
    if v >= -thresh:
        return Judgement.PASS
    if v < -thresh * BOUNDARY_FACTOR:
        return Judgement.FAIL
    return Judgement.BOUNDARY


def combine(judgements):
    """FAIL dominates, then BOUNDARY, else PASS."""
    js = list(judgements)
    if Judgement.FAIL in js:
        return Judgement.FAIL
    if Judgement.BOUNDARY in js:
        return Judgement.BOUNDARY
    return Judgement.PASS
