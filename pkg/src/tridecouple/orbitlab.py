"""Reduced and canonical forms, random group elements, orbit samples, and a
numerical orbit-search oracle.

The oracle is a falsification tool: it reports the smallest off-pattern
norm it could reach over O(n), which bounds the true distance from the
orbit to the pattern from above.  Only the polynomial relations certify
membership.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DimensionMismatch
from .tensor import OrthogonalMap, SymTensor3, act, as_scalar, multiplicity, sorted_triples

__all__ = [
    "OracleResult",
    "OrbitSample",
    "fd_pattern_triples",
    "haar_orthogonal",
    "make_fd",
    "make_pd_canonical",
    "orbit_search_oracle",
    "pd_canonical_star2",
    "pd_forward_q",
    "pd_pattern_triples",
    "random_pd_params",
    "rational_orthogonal",
    "sample",
]


def make_fd(betas, exact=None) -> SymTensor3:
    """Fully decoupled tensor: entry (i, i, i) = betas[i], everything else 0."""
    betas = list(betas)
    n = len(betas)
    return SymTensor3.from_entries(n, {(i, i, i): b for i, b in enumerate(betas)}, exact)


def make_pd_canonical(alpha, gamma1, gamma2, beta3, exact=None) -> SymTensor3:
    """Canonical partially decoupled n = 3 tensor.

    Its cubic form is (3a - g1) x1^3 + 3 g2 x1^2 x2 + 3 (a + g1) x1 x2^2
    - g2 x2^3 + b3 x3^3: a trace-carrying 2x2 block plus one split-off axis.
    """
    vals = (alpha, gamma1, gamma2, beta3)
    if exact is None:
        exact = all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in vals)
    a, g1, g2, b3 = (as_scalar(v, exact) for v in vals)
    return SymTensor3.from_entries(
        3,
        {
            (0, 0, 0): 3 * a - g1,
            (0, 0, 1): g2,
            (0, 1, 1): a + g1,
            (1, 1, 1): -g2,
            (2, 2, 2): b3,
        },
        exact,
    )


def pd_canonical_star2(alpha, gamma1, gamma2, beta3):
    """Closed form of G*2 for the canonical partially decoupled tensor."""
    a, g1, g2, b3 = alpha, gamma1, gamma2, beta3
    z = a * 0
    return np.array(
        [
            [2 * (5 * a * a - 2 * a * g1 + g1 * g1 + g2 * g2), 4 * a * g2, z],
            [4 * a * g2, 2 * ((a + g1) ** 2 + g2 * g2), z],
            [z, z, b3 * b3],
        ],
        dtype=object,
    )


def pd_forward_q(alpha, gamma1, gamma2, beta3):
    """(q1, q2, q3, q4) of a canonical partially decoupled tensor."""
    a, g1, g2, b3 = alpha, gamma1, gamma2, beta3
    q1 = b3 * b3
    q2 = 16 * a * a
    q3 = (
        20 * a**4 + 32 * a**3 * g1 + 8 * a * a * g1 * g1 + 4 * g1**4
        + 8 * a * a * g2 * g2 + 8 * g1 * g1 * g2 * g2 + 4 * g2**4
    )
    q4 = 12 * a * a + 4 * g1 * g1 + 4 * g2 * g2
    return q1, q2, q3, q4


def haar_orthogonal(n, seed) -> OrthogonalMap:
    """Haar-distributed element of O(n), deterministic per seed."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    q = q * np.sign(np.diag(r))
    return OrthogonalMap.from_matrix(q)


def _solve_exact(a, b):
    """Solve a x = b over the rationals (a invertible), b a matrix."""
    n = a.shape[0]
    m = [list(a[i]) + list(b[i]) for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return np.array([row[n:] for row in m], dtype=object)


def rational_orthogonal(n, seed, reflect=None, max_entry=3) -> OrthogonalMap:
    """Orthogonal matrix with rational entries via the Cayley transform.

    ``(I - A)(I + A)^-1`` is orthogonal with determinant +1 for any skew
    rational ``A``; ``reflect`` (default: random) composes with a flip of
    the first axis.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    a = np.full((n, n), Fraction(0), dtype=object)
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(int(rng.integers(-max_entry, max_entry + 1)), int(rng.integers(1, max_entry + 1)))
            a[i, j], a[j, i] = v, -v
    eye = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
    q = _solve_exact((eye + a).T, (eye - a).T).T  # (I - A)(I + A)^-1
    if reflect is None:
        reflect = bool(rng.integers(0, 2))
    if reflect:
        q[:, 0] = -q[:, 0]
    return OrthogonalMap.from_matrix(q)


@dataclass(frozen=True, eq=False)
class OrbitSample:
    seed_form: SymTensor3
    map: OrthogonalMap
    label: str  # "FD" | "PDnotFD" | "Generic"
    params: tuple = ()

    @property
    def point(self) -> SymTensor3:
        return act(self.map, self.seed_form)


def _distinct_abs_ints(rng, n, lo=1, hi=9):
    vals = rng.choice(np.arange(lo, hi + 1), size=n, replace=False)
    signs = rng.choice([-1, 1], size=n)
    return [int(v * s) for v, s in zip(vals, signs)]


def random_pd_params(rng, exact=True, bound=6):
    """Random (alpha, gamma1, gamma2, beta3) with alpha^2 != gamma1^2 + gamma2^2 and beta3 != 0."""
    while True:
        if exact:
            p = [Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 4))) for _ in range(4)]
            p[0] = abs(p[0])
        else:
            p = list(rng.uniform(-bound, bound, size=4))
            p[0] = abs(p[0])
        a, g1, g2, b3 = p
        if b3 != 0 and a * a != g1 * g1 + g2 * g2:
            return tuple(p)


def sample(kind, n, seed, exact=False) -> OrbitSample:
    """A seeded orbit sample of the given kind ("fd", "pd" or "generic")."""
    rng = np.random.default_rng(seed)
    sigma = rational_orthogonal(n, rng) if exact else haar_orthogonal(n, rng)
    if kind == "fd":
        betas = _distinct_abs_ints(rng, n) if exact else list(rng.uniform(-3, 3, size=n))
        return OrbitSample(make_fd(betas, exact), sigma, "FD", tuple(betas))
    if kind == "pd":
        if n != 3:
            raise DimensionMismatch("partially decoupled samples need n = 3")
        p = random_pd_params(rng, exact)
        return OrbitSample(make_pd_canonical(*p, exact=exact), sigma, "PDnotFD", p)
    if kind == "generic":
        m = n * (n + 1) * (n + 2) // 6
        if exact:
            vals = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(m)]
        else:
            vals = list(rng.standard_normal(m))
        return OrbitSample(SymTensor3(n, vals, exact), OrthogonalMap.identity(n, exact), "Generic")
    raise ValueError(f"unknown sample kind {kind!r}")


# -- orbit-search oracle ----------------------------------------------------


def fd_pattern_triples(n):
    """Sorted triples that must vanish in a fully decoupled tensor."""
    return [t for t in sorted_triples(n) if not t[0] == t[1] == t[2]]


def pd_pattern_triples(n):
    """Sorted triples coupling the last axis to the others."""
    last = n - 1
    return [t for t in sorted_triples(n) if t.count(last) in (1, 2)]


@dataclass(frozen=True)
class OracleResult:
    residual: float  # Frobenius norm of the off-pattern part at the best point
    matrix: np.ndarray
    starts: int
    steps: int

    def __float__(self):
        return self.residual


def _pattern_setup(n, pattern):
    triples = fd_pattern_triples(n) if pattern == "fd" else pd_pattern_triples(n)
    flat = np.array([t[0] * n * n + t[1] * n + t[2] for t in triples], dtype=np.int64)
    weights = np.array([math.sqrt(multiplicity(t)) for t in triples])
    return flat, weights


def orbit_search_oracle(gamma: SymTensor3, pattern="fd", budget=32, steps=200, seed=0) -> OracleResult:
    """Minimize the off-pattern norm of act(sigma, gamma) over O(n).

    sigma runs over products of plane rotations, optionally followed by a
    flip of the first axis.  ``budget`` multi-starts (half of them with the
    flip) are refined together by damped Gauss-Newton steps with
    central-difference Jacobians.
    """
    if pattern not in ("fd", "pd"):
        raise ValueError(f"unknown pattern {pattern!r}")
    n = gamma.n
    if n < 2:
        raise DimensionMismatch("the oracle needs n >= 2")
    if gamma.is_zero():
        return OracleResult(0.0, np.eye(n), 0, 0)
    g = np.asarray(gamma.dense(), dtype=float)
    flat, weights = _pattern_setup(n, pattern)
    p = n * (n - 1) // 2
    b = max(int(budget), 2)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-np.pi, np.pi, size=(b, p))
    x[0] = 0.0
    x[1] = 0.0
    refl = np.arange(b) % 2 == 1
    h = 1e-6
    mu = np.full(b, 1e-3)
    eye = np.eye(p)

    def resid(angles, flags):
        return kernels.pattern_residuals(angles, flags, g, flat, weights)

    r = resid(x, refl)
    cost = np.sum(r * r, axis=1)
    refl_j = np.repeat(refl, 2 * p)
    done = 0
    for step in range(int(steps)):
        done = step + 1
        shifts = np.concatenate([eye * h, -eye * h])  # (2p, p)
        xp = (x[:, None, :] + shifts[None, :, :]).reshape(-1, p)
        rp = resid(xp, refl_j).reshape(b, 2 * p, -1)
        jac = ((rp[:, :p, :] - rp[:, p:, :]) / (2 * h)).transpose(0, 2, 1)  # (b, m, p)
        jtj = np.einsum("bmi,bmj->bij", jac, jac)
        jtr = np.einsum("bmi,bm->bi", jac, r)
        diag = np.einsum("bii->bi", jtj)
        lhs = jtj + mu[:, None, None] * (np.einsum("bi,ij->bij", diag, eye) + 1e-12 * eye)
        delta = -np.linalg.solve(lhs, jtr[..., None])[..., 0]
        xn = x + delta
        rn = resid(xn, refl)
        cn = np.sum(rn * rn, axis=1)
        better = cn < cost
        x[better], r[better], cost[better] = xn[better], rn[better], cn[better]
        mu = np.where(better, mu / 3, mu * 4)
        mu = np.clip(mu, 1e-15, 1e12)
        if np.min(cost) < 1e-30 or np.all(np.abs(delta) < 1e-15):
            break
    best = int(np.argmin(cost))
    mat = kernels.givens_batch(x[best : best + 1], refl[best : best + 1], n)[0]
    return OracleResult(float(math.sqrt(cost[best])), mat, b, done)
