"""Fully symmetric rank-3 tensors, their cubic forms, and the O(n) action.

Scalars are plain Python objects: :class:`fractions.Fraction` in exact mode
and ``float`` otherwise.  A tensor is exact when every stored entry is a
Fraction; any operation mixing an exact and a float operand returns a float
result.  Indices are 0-based throughout the Python API (the JSON format is
1-based, see :mod:`tridecouple.jsonio`).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kernels
from .errors import DimensionMismatch, MalformedPolynomial, NotOrthogonal
from .tolerance import DEFAULT_TOL, ORTHO_TOL

__all__ = [
    "CovariantSuite",
    "OrthogonalMap",
    "SymTensor3",
    "act",
    "as_scalar",
    "covariants",
    "eval_cubic",
    "tensor_from_cubic",
    "tensor_to_cubic",
    "u_dot_gamma",
]


def as_scalar(x, exact):
    """Coerce ``x`` to a Fraction (exact) or a float."""
    if exact:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, np.integer)):
            return Fraction(int(x))
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot use {x!r} as an exact scalar")
    return float(x)


def _is_exact_value(x):
    return isinstance(x, (Fraction, int, np.integer)) and not isinstance(x, bool)


def sorted_triples(n):
    return list(itertools.combinations_with_replacement(range(n), 3))


def multiplicity(triple):
    """Number of distinct orderings of an index triple: 1, 3 or 6."""
    return 6 // math.prod(math.factorial(triple.count(i)) for i in set(triple))


def _zero(exact):
    return Fraction(0) if exact else 0.0


class SymTensor3:
    """An immutable fully symmetric n x n x n tensor.

    Only the n(n+1)(n+2)/6 entries with sorted indices are stored.  Any index
    order may be used to read an entry::

        >>> g = SymTensor3.from_entries(2, {(0, 0, 1): 1})
        >>> g[1, 0, 0] == g[0, 1, 0] == 1
        True
    """

    __slots__ = ("n", "exact", "_values", "__dict__")

    def __init__(self, n, values, exact=None):
        n = int(n)
        if n < 1:
            raise DimensionMismatch("dimension must be positive")
        values = list(values)
        if len(values) != n * (n + 1) * (n + 2) // 6:
            raise DimensionMismatch(
                f"expected {n * (n + 1) * (n + 2) // 6} entries for n={n}, got {len(values)}"
            )
        if exact is None:
            exact = all(_is_exact_value(v) for v in values)
        self.n = n
        self.exact = bool(exact)
        self._values = tuple(as_scalar(v, self.exact) for v in values)

    # -- construction ------------------------------------------------------

    @classmethod
    def zeros(cls, n, exact=True):
        return cls(n, [_zero(exact)] * (n * (n + 1) * (n + 2) // 6), exact)

    @classmethod
    def from_entries(cls, n, entries, exact=None):
        """Build from a mapping of index triples (any order) to values."""
        if exact is None:
            exact = all(_is_exact_value(v) for v in entries.values())
        index = {t: q for q, t in enumerate(sorted_triples(n))}
        vals = [_zero(exact)] * len(index)
        for key, val in entries.items():
            t = tuple(sorted(int(i) for i in key))
            if len(t) != 3 or t not in index:
                raise DimensionMismatch(f"index {key} out of range for n={n}")
            vals[index[t]] = val
        return cls(n, vals, exact)

    @classmethod
    def from_dense(cls, arr, exact=None, check=True, tol=1e-12):
        """Build from a full (n, n, n) array, checking full symmetry."""
        arr = np.asarray(arr)
        n = arr.shape[0]
        if arr.shape != (n, n, n):
            raise DimensionMismatch(f"expected a cube array, got shape {arr.shape}")
        if exact is None:
            exact = arr.dtype == object and all(_is_exact_value(v) for v in arr.flat)
        if check:
            scale = max(1.0, max((abs(float(v)) for v in arr.flat), default=0.0))
            for perm in itertools.permutations(range(3)):
                diff = arr - arr.transpose(perm)
                if exact:
                    if any(v != 0 for v in diff.flat):
                        raise ValueError("array is not fully symmetric")
                elif np.max(np.abs(diff.astype(float))) > tol * scale:
                    raise ValueError("array is not fully symmetric")
        return cls(n, [arr[t] for t in sorted_triples(n)], exact)

    @classmethod
    def from_n2_params(cls, a0, a1, a2, a3, exact=None):
        """n = 2 tensor from a0 = G[1,1,1], a1 = G[0,1,1], a2 = G[0,0,1], a3 = G[0,0,0]."""
        # sorted triples for n=2: (0,0,0) (0,0,1) (0,1,1) (1,1,1)
        return cls(2, [a3, a2, a1, a0], exact)

    # -- access ------------------------------------------------------------

    @cached_property
    def _index(self):
        return {t: q for q, t in enumerate(sorted_triples(self.n))}

    def __getitem__(self, key):
        return self._values[self._index[tuple(sorted(key))]]

    @property
    def values(self):
        return self._values

    def entries(self):
        """Sorted-index triples mapped to values, including zeros."""
        return dict(zip(sorted_triples(self.n), self._values))

    def n2_params(self):
        """(a0, a1, a2, a3) for an n = 2 tensor."""
        if self.n != 2:
            raise DimensionMismatch("n2_params needs n = 2")
        a3, a2, a1, a0 = self._values
        return a0, a1, a2, a3

    @cached_property
    def _dense(self):
        n = self.n
        arr = np.empty((n, n, n), dtype=object if self.exact else float)
        for t, v in zip(sorted_triples(n), self._values):
            for p in set(itertools.permutations(t)):
                arr[p] = v
        arr.flags.writeable = False
        return arr

    def dense(self):
        """Full (n, n, n) array; object dtype holding Fractions in exact mode."""
        return self._dense

    # -- conversion and arithmetic ----------------------------------------

    def to_float(self):
        return self if not self.exact else SymTensor3(self.n, [float(v) for v in self._values], False)

    def to_exact(self):
        """Exact copy; floats are converted by their exact binary value."""
        if self.exact:
            return self
        return SymTensor3(self.n, [Fraction(v) for v in self._values], True)

    def norm(self):
        """Frobenius norm of the full array, as a float."""
        return math.sqrt(
            sum(multiplicity(t) * float(v) ** 2 for t, v in zip(sorted_triples(self.n), self._values))
        )

    def norm2(self):
        """Squared Frobenius norm, exact when the tensor is."""
        return sum(
            (multiplicity(t) * v * v for t, v in zip(sorted_triples(self.n), self._values)),
            _zero(self.exact),
        )

    def is_zero(self):
        return all(v == 0 for v in self._values)

    def _binary(self, other, op):
        if not isinstance(other, SymTensor3):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch("dimensions differ")
        exact = self.exact and other.exact
        a = self._values if exact else [float(v) for v in self._values]
        b = other._values if exact else [float(v) for v in other._values]
        return SymTensor3(self.n, [op(x, y) for x, y in zip(a, b)], exact)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __neg__(self):
        return SymTensor3(self.n, [-v for v in self._values], self.exact)

    def scale(self, t):
        exact = self.exact and _is_exact_value(t)
        t = as_scalar(t, exact)
        vals = self._values if exact else [float(v) for v in self._values]
        return SymTensor3(self.n, [t * v for v in vals], exact)

    def __eq__(self, other):
        if not isinstance(other, SymTensor3):
            return NotImplemented
        return self.n == other.n and self._values == other._values

    def __hash__(self):
        return hash((self.n, self._values))

    def max_abs_diff(self, other):
        if other.n != self.n:
            raise DimensionMismatch("dimensions differ")
        return max(abs(float(x) - float(y)) for x, y in zip(self._values, other._values))

    def __repr__(self):
        nz = {t: v for t, v in self.entries().items() if v != 0}
        body = ", ".join(f"{t}: {v}" for t, v in nz.items())
        return f"SymTensor3(n={self.n}, {'exact' if self.exact else 'float'}, {{{body}}})"


def _det_exact(m):
    """Determinant of a square object array of Fractions by elimination."""
    a = [list(row) for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


@dataclass(frozen=True, eq=False)
class OrthogonalMap:
    """A certified orthogonal matrix.

    Build instances through :meth:`from_matrix`, which checks
    ``sigma.T @ sigma == I`` exactly for Fraction entries and to
    ``ORTHO_TOL`` (max-entry norm) for floats.
    """

    matrix: np.ndarray
    det_sign: int

    @classmethod
    def from_matrix(cls, m, tol=ORTHO_TOL):
        m = np.asarray(m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
        n = m.shape[0]
        exact = m.dtype == object and all(_is_exact_value(v) for v in m.flat)
        if exact:
            m = np.array([[as_scalar(v, True) for v in row] for row in m], dtype=object)
            gram = m.T.dot(m)
            if any(gram[i, j] != (1 if i == j else 0) for i in range(n) for j in range(n)):
                raise NotOrthogonal("sigma^T sigma != I")
            det = _det_exact(m)
        else:
            m = np.array(m, dtype=float)
            err = np.max(np.abs(m.T @ m - np.eye(n))) if n else 0.0
            if not err <= tol:
                raise NotOrthogonal(f"|sigma^T sigma - I|_max = {err:.3e} exceeds {tol:.1e}")
            det = np.linalg.det(m)
        m.flags.writeable = False
        return cls(m, 1 if det > 0 else -1)

    @classmethod
    def identity(cls, n, exact=True):
        if exact:
            m = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
        else:
            m = np.eye(n)
        return cls.from_matrix(m)

    @classmethod
    def rotation2(cls, theta):
        """Planar rotation [[cos, -sin], [sin, cos]]."""
        c, s = math.cos(theta), math.sin(theta)
        return cls.from_matrix(np.array([[c, -s], [s, c]]))

    @classmethod
    def swap2(cls):
        """The reflection exchanging x1 and x2."""
        return cls.from_matrix(np.array([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]], dtype=object))

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def exact(self):
        return self.matrix.dtype == object

    def float_matrix(self):
        return np.asarray(self.matrix, dtype=float)

    def __matmul__(self, other):
        if not isinstance(other, OrthogonalMap):
            return NotImplemented
        if self.exact and other.exact:
            return OrthogonalMap.from_matrix(self.matrix.dot(other.matrix))
        return OrthogonalMap.from_matrix(self.float_matrix() @ other.float_matrix())

    @property
    def T(self):
        return OrthogonalMap(self.matrix.T, self.det_sign)

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"OrthogonalMap({kind}, det={self.det_sign:+d}, {self.matrix.tolist()})"


def _exact_act(s, g):
    t = np.tensordot(g, s, axes=([2], [1]))  # abk
    t = np.tensordot(t, s, axes=([1], [1]))  # akj
    t = np.tensordot(t, s, axes=([0], [1]))  # kji
    return t.transpose(2, 1, 0)


def act(sigma: OrthogonalMap, gamma: SymTensor3) -> SymTensor3:
    """The O(n) action ``(sigma . G)_ijk = sigma_ia sigma_jb sigma_kc G_abc``.

    Exact when both operands are exact.  Satisfies
    ``eval_cubic(act(sigma, G), x) == eval_cubic(G, sigma.T @ x)``.
    """
    if sigma.n != gamma.n:
        raise DimensionMismatch(f"map is {sigma.n}x{sigma.n} but tensor has n={gamma.n}")
    if sigma.exact and gamma.exact:
        arr = _exact_act(sigma.matrix, gamma.dense())
        return SymTensor3(gamma.n, [arr[t] for t in sorted_triples(gamma.n)], True)
    arr = kernels.act_dense(sigma.float_matrix(), np.asarray(gamma.dense(), dtype=float))
    return SymTensor3(gamma.n, [arr[t] for t in sorted_triples(gamma.n)], False)


def eval_cubic(gamma: SymTensor3, x):
    """f(x; G) = sum_ijk G_ijk x_i x_j x_k."""
    if len(x) != gamma.n:
        raise DimensionMismatch(f"vector of length {len(x)} for n={gamma.n}")
    exact = gamma.exact and all(_is_exact_value(v) for v in x)
    xs = [as_scalar(v, exact) for v in x]
    total = _zero(exact)
    for t, v in zip(sorted_triples(gamma.n), gamma.values):
        if v:
            c = v if exact else float(v)
            total += multiplicity(t) * c * xs[t[0]] * xs[t[1]] * xs[t[2]]
    return total


def _parse_monomial(key, n):
    if isinstance(key, str):
        parts = key.strip().strip("[]()").replace(" ", "").split(",")
        try:
            key = tuple(int(p) for p in parts if p != "")
        except ValueError:
            raise MalformedPolynomial(f"cannot read monomial {key!r}") from None
    key = tuple(int(e) for e in key)
    if len(key) != n:
        raise MalformedPolynomial(f"monomial {key} has {len(key)} exponents, expected {n}")
    if any(e < 0 for e in key) or sum(key) != 3:
        raise MalformedPolynomial(f"monomial {key} is not cubic")
    return key


def tensor_from_cubic(coeffs, n, exact=None) -> SymTensor3:
    """Tensor with ``G_ijk = (1/6) d_i d_j d_k f`` for a cubic form ``f``.

    ``coeffs`` maps exponent tuples (or strings like ``"2,1,0"``) to
    coefficients.  Repeated monomials add up.
    """
    if exact is None:
        exact = all(_is_exact_value(v) for v in coeffs.values())
    entries = {t: _zero(exact) for t in sorted_triples(n)}
    for key, c in coeffs.items():
        e = _parse_monomial(key, n)
        t = tuple(i for i in range(n) for _ in range(e[i]))
        entries[t] += as_scalar(c, exact) / multiplicity(t)
    return SymTensor3(n, [entries[t] for t in sorted_triples(n)], exact)


def tensor_to_cubic(gamma: SymTensor3):
    """Nonzero coefficients of f(x; G) keyed by exponent tuple."""
    out = {}
    for t, v in zip(sorted_triples(gamma.n), gamma.values):
        if v != 0:
            e = tuple(t.count(i) for i in range(gamma.n))
            out[e] = multiplicity(t) * v
    return out


@dataclass(frozen=True, eq=False)
class CovariantSuite:
    """Covariants of a tensor G.

    ``u``: trace vector, u_i = sum_l G_ill.
    ``B``: the tensor of (3/(n+2)) (u.x)|x|^2, which has trace vector u.
    ``D``: trace-free part, (n+2)(G - B), so G = B + D/(n+2).
    ``gamma_star2``: (G*2)_kl = sum_ij G_ijk G_ijl.
    ``d_star2``: the same contraction of D.
    ``v``: v_m = (D*2)_kl D_klm.
    ``w``: w_m = D_ijm u_i u_j.
    """

    u: np.ndarray
    B: SymTensor3
    D: SymTensor3
    gamma_star2: np.ndarray
    d_star2: np.ndarray
    v: np.ndarray
    w: np.ndarray


def _identity_like(n, exact):
    if exact:
        return np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
    return np.eye(n)


def trace_vector(gamma: SymTensor3):
    g = gamma.dense()
    return np.array([sum(g[i, l, l] for l in range(gamma.n)) for i in range(gamma.n)], dtype=g.dtype)


def covariants(gamma: SymTensor3) -> CovariantSuite:
    n = gamma.n
    exact = gamma.exact
    g = gamma.dense()
    u = trace_vector(gamma)
    eye = _identity_like(n, exact)
    inv = Fraction(1, n + 2) if exact else 1.0 / (n + 2)
    b = (np.einsum("i,jk->ijk", u, eye) + np.einsum("j,ik->ijk", u, eye) + np.einsum("k,ij->ijk", u, eye)) * inv
    d = (g - b) * (n + 2)
    m = np.einsum("ijk,ijl->kl", d, d)
    triples = sorted_triples(n)
    return CovariantSuite(
        u=u,
        B=SymTensor3(n, [b[t] for t in triples], exact),
        D=SymTensor3(n, [d[t] for t in triples], exact),
        gamma_star2=np.einsum("ijk,ijl->kl", g, g),
        d_star2=m,
        v=np.einsum("kl,klm->m", m, d),
        w=np.einsum("ijm,i,j->m", d, u, u),
    )


def gamma_star2(gamma: SymTensor3):
    g = gamma.dense()
    return np.einsum("ijk,ijl->kl", g, g)


def u_dot_gamma(gamma: SymTensor3):
    """(u.G)_kl = sum_i G_ikl u_i; equals G*2 on fully decoupleable tensors."""
    return np.einsum("ikl,i->kl", gamma.dense(), trace_vector(gamma))


def matrix_allclose(a, b, exact, tol=DEFAULT_TOL, scale=1.0):
    if exact:
        return bool(np.all(a == b))
    return float(np.max(np.abs(np.asarray(a, float) - np.asarray(b, float)))) <= tol * (1.0 + scale)
