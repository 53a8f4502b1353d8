"""Polynomial invariants of symmetric 3-tensors.

* n = 2: the SO(2) integrity basis (j2, h2, l4, m4) and the O(2) basis
  (i1, i2, i3) = (|Trace G|^2, Trace G*2, det G*2).
* n = 3: the thirteen-element O(3) basis H2 ... H10 built from the
  trace-free part D (no 1/(n+2) rescaling).
* The "q-tilde" quantities: characteristic-polynomial coefficients of G*2
  (full test) and the four rational functions of (H2, H4, J2, L4) used by
  the partial test.

Every value is a Fraction for exact tensors and a float otherwise.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, DomainExcluded
from .tensor import SymTensor3, covariants, gamma_star2, trace_vector
from .tolerance import DEFAULT_TOL, threshold

__all__ = [
    "InvariantSetN2",
    "InvariantSetN3",
    "QTilde",
    "charpoly_coefficients",
    "o2_basis",
    "oa_basis",
    "qtilde_full",
    "qtilde_partial",
    "so2_basis",
]

OA_NAMES = ("H2", "J2", "H4", "J4", "K4", "L4", "H6", "J6", "K6", "L6", "M6", "H8", "H10")
OA_DEGREES = {name: int(name[1:]) for name in OA_NAMES}


def _need(gamma, n):
    if gamma.n != n:
        raise DimensionMismatch(f"expected an n={n} tensor, got n={gamma.n}")


def _scalar(x, exact):
    # numpy object reductions can hand back ints for all-zero inputs
    return Fraction(x) if exact else float(x)


@dataclass(frozen=True)
class InvariantSetN2:
    j2: object
    h2: object
    l4: object
    m4: object
    i1: object
    i2: object
    i3: object

    def as_dict(self):
        return asdict(self)

    def syzygy(self):
        """-h2 j2^3 + 4 l4^2 + 4 m4^2, identically zero."""
        return -self.h2 * self.j2**3 + 4 * self.l4**2 + 4 * self.m4**2


@dataclass(frozen=True)
class InvariantSetN3:
    H2: object
    J2: object
    H4: object
    J4: object
    K4: object
    L4: object
    H6: object
    J6: object
    K6: object
    L6: object
    M6: object
    H8: object
    H10: object

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class QTilde:
    """q-tilde values; three for the full test, four for the partial one."""

    values: tuple
    kind: str  # "full" | "partial"

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_dict(self):
        return {f"q{k + 1}": v for k, v in enumerate(self.values)}


def so2_basis(gamma: SymTensor3) -> InvariantSetN2:
    """(j2, h2, l4, m4) plus the O(2) triple for an n = 2 tensor.

    j2 = |u|^2, h2 = sum D^2, l4 = D(u, u, u) and m4 = det[u | w] (u and w
    as columns).  Under the swap x1 <-> x2, m4 changes sign and the rest are
    fixed.
    """
    _need(gamma, 2)
    exact = gamma.exact
    cov = covariants(gamma)
    u, w, d = cov.u, cov.w, cov.D.dense()
    j2 = _scalar(u.dot(u), exact)
    h2 = _scalar(np.sum(d * d), exact)
    l4 = _scalar(np.einsum("ijk,i,j,k->", d, u, u, u), exact)
    m4 = _scalar(u[0] * w[1] - u[1] * w[0], exact)
    o2 = o2_basis(gamma)
    return InvariantSetN2(j2=j2, h2=h2, l4=l4, m4=m4, i1=o2["i1"], i2=o2["i2"], i3=o2["i3"])


def o2_basis(gamma: SymTensor3):
    """(i1, i2, i3) = (|Trace G|^2, Trace G*2, det G*2) for n = 2.

    Computed from the trace vector and G*2 directly, without the
    harmonic decomposition.
    """
    _need(gamma, 2)
    exact = gamma.exact
    u = trace_vector(gamma)
    g2 = gamma_star2(gamma)
    return {
        "i1": _scalar(u.dot(u), exact),
        "i2": _scalar(g2[0, 0] + g2[1, 1], exact),
        "i3": _scalar(g2[0, 0] * g2[1, 1] - g2[0, 1] * g2[1, 0], exact),
    }


def oa_basis(gamma: SymTensor3) -> InvariantSetN3:
    """The thirteen O(3) invariants of an n = 3 tensor."""
    _need(gamma, 3)
    exact = gamma.exact
    cov = covariants(gamma)
    u, v, w, m = cov.u, cov.v, cov.w, cov.d_star2
    d = cov.D.dense()
    du = np.einsum("ijk,k->ij", d, u)
    mm = m.dot(m)
    vals = {
        "H2": np.sum(d * d),
        "J2": u.dot(u),
        "H4": np.trace(mm),
        "J4": np.sum(du * du),
        "K4": np.einsum("kl,klp,p->", m, d, u),
        "L4": np.einsum("ijk,i,j,k->", d, u, u, u),
        "H6": v.dot(v),
        "J6": u.dot(m).dot(w),
        "K6": v.dot(w),
        "L6": u.dot(m).dot(v),
        "M6": w.dot(w),
        "H8": u.dot(mm).dot(v),
        "H10": np.einsum("ijk,i,j,k->", d, v, v, v),
    }
    return InvariantSetN3(**{k: _scalar(x, exact) for k, x in vals.items()})


def charpoly_coefficients(mat, exact):
    """(e1, ..., en) with det(tI - A) = t^n - e1 t^(n-1) + e2 t^(n-2) - ...

    Faddeev-LeVerrier recursion; division-exact over the rationals.
    """
    n = mat.shape[0]
    a = np.array(mat, dtype=object if exact else float)
    eye = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object) if exact else np.eye(n)
    m = np.zeros_like(a)
    c = [Fraction(1) if exact else 1.0]
    for k in range(1, n + 1):
        m = a.dot(m) + c[-1] * eye
        am = a.dot(m)
        tr = sum(am[i, i] for i in range(n))
        c.append(-tr / k if not exact else Fraction(-tr) / k)
    # c_k are coefficients of t^(n-k) in det(tI - A); e_k = (-1)^k c_k
    return tuple(_scalar(c[k] if k % 2 == 0 else -c[k], exact) for k in range(1, n + 1))


def qtilde_full(gamma: SymTensor3) -> QTilde:
    """Characteristic-polynomial coefficients of G*2 (trace, 2x2 minors, ...)."""
    return QTilde(charpoly_coefficients(gamma_star2(gamma), gamma.exact), "full")


def partial_denominator(inv: InvariantSetN3):
    return inv.H2 - 10 * inv.J2


def domain_excluded(gamma: SymTensor3, inv: InvariantSetN3, tol=DEFAULT_TOL):
    """True when H2 = 10 J2 (exactly, or within the degree-2 threshold)."""
    gap = partial_denominator(inv)
    if gamma.exact:
        return gap == 0
    return abs(gap) <= threshold(gamma.norm(), 2, tol)


def qtilde_from_invariants(H2, H4, J2, L4):
    """The four partial-test quantities from degree-2 and degree-4 invariants.

    On a canonical partially decoupled tensor these equal beta3^2, 16 alpha^2,
    and the two remaining block invariants.
    """
    den = 9 * (H2 - 10 * J2)
    if den == 0:
        raise DomainExcluded("H2 = 10*J2")
    num = H2**2 - 2 * H4 - 3 * H2 * J2 + 6 * J2**2 + 6 * L4
    q1 = num / den
    q2 = J2 - q1
    q3 = (-8 * H2**2 + 25 * H4 + 60 * H2 * J2 + 1500 * J2**2 - 1200 * L4 - 11250 * J2 * q1 + 11250 * q1**2) / 11250
    q4 = (H2 + 15 * J2 - 25 * q1) / 25
    return q1, q2, q3, q4


def qtilde_partial(gamma: SymTensor3, tol=DEFAULT_TOL, inv=None) -> QTilde:
    """The partial-test quadruple; raises DomainExcluded when H2 = 10 J2."""
    _need(gamma, 3)
    inv = inv or oa_basis(gamma)
    if domain_excluded(gamma, inv, tol):
        raise DomainExcluded(f"H2 - 10*J2 = {partial_denominator(inv)} is zero within tolerance")
    vals = qtilde_from_invariants(inv.H2, inv.H4, inv.J2, inv.L4)
    return QTilde(tuple(_scalar(v, gamma.exact) for v in vals), "partial")
