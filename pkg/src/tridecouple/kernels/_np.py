"""Pure-numpy float64 kernels.

Every function here has a twin of the same name in ``_nb`` with identical
semantics. These are the reference versions; the jitted ones are checked
against them in the test suite.
"""
import numpy as np


def act_dense(s, g):
    """Return ``s . g`` for one orthogonal matrix ``s`` and dense tensor ``g``."""
    return np.einsum("ia,jb,kc,abc->ijk", s, s, s, g, optimize=True)


def act_batch(ss, g):
    """Act with a stack of matrices ``ss`` of shape (B, n, n) on ``g``."""
    t = np.einsum("zkc,abc->zabk", ss, g)
    t = np.einsum("zjb,zabk->zajk", ss, t)
    return np.einsum("zia,zajk->zijk", ss, t)


def plane_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def givens_batch(angles, reflect, n):
    """Products of plane rotations, one per row of ``angles``.

    The rotation for row ``z`` is ``G_1 G_2 ... G_p F`` where ``G_q`` rotates
    the q-th coordinate plane (lexicographic pair order) and ``F`` flips the
    first axis when ``reflect[z]`` is true.
    """
    angles = np.atleast_2d(angles)
    b = angles.shape[0]
    out = np.broadcast_to(np.eye(n), (b, n, n)).copy()
    c = np.cos(angles)
    s = np.sin(angles)
    # right-multiplying by a plane rotation only mixes columns i and j
    for q, (i, j) in enumerate(plane_pairs(n)):
        ci = out[:, :, i].copy()
        cj = out[:, :, j]
        out[:, :, i] = ci * c[:, q, None] + cj * s[:, q, None]
        out[:, :, j] = -ci * s[:, q, None] + cj * c[:, q, None]
    out[:, :, 0] *= np.where(reflect, -1.0, 1.0)[:, None]
    return out


def pattern_residuals(angles, reflect, g, flat_idx, weights):
    """Weighted off-pattern entries of ``act(givens(angles), g)``.

    Returns an array of shape (B, m); the sum of squares of a row equals the
    sum of squares of the full n**3 off-pattern block because ``weights``
    holds the square roots of the index multiplicities.
    """
    n = g.shape[0]
    ss = givens_batch(angles, reflect, n)
    t = act_batch(ss, g).reshape(ss.shape[0], -1)
    return t[:, flat_idx] * weights


def rep_matrices(thetas):
    """The 4x4 action on (a0, a1, a2, a3) for each rotation angle."""
    c = np.cos(thetas)
    s = np.sin(thetas)
    m = np.empty((len(thetas), 4, 4))
    m[:, 0, 0] = c**3
    m[:, 0, 1] = 3 * s * c**2
    m[:, 0, 2] = 3 * s**2 * c
    m[:, 0, 3] = s**3
    m[:, 1, 0] = -s * c**2
    m[:, 1, 1] = c**3 - 2 * s**2 * c
    m[:, 1, 2] = 2 * s * c**2 - s**3
    m[:, 1, 3] = s**2 * c
    m[:, 2, 0] = s**2 * c
    m[:, 2, 1] = s**3 - 2 * s * c**2
    m[:, 2, 2] = c**3 - 2 * s**2 * c
    m[:, 2, 3] = s * c**2
    m[:, 3, 0] = -s**3
    m[:, 3, 1] = 3 * s**2 * c
    m[:, 3, 2] = -3 * s * c**2
    m[:, 3, 3] = c**3
    return m


def charpoly_reciprocal(mats, max_degree):
    """Power-series coefficients of 1/det(I - lam*M), one row per matrix.

    The quartic det(I - lam*M) comes from Newton's identities on traces of
    powers; its reciprocal from the usual linear recurrence.
    """
    b = mats.shape[0]
    p = mats.copy()
    s = np.empty((b, 4))
    for k in range(4):
        s[:, k] = np.trace(p, axis1=1, axis2=2)
        p = p @ mats
    e1 = s[:, 0]
    e2 = (e1 * s[:, 0] - s[:, 1]) / 2
    e3 = (e2 * s[:, 0] - e1 * s[:, 1] + s[:, 2]) / 3
    e4 = (e3 * s[:, 0] - e2 * s[:, 1] + e1 * s[:, 2] - s[:, 3]) / 4
    poly = np.stack([-e1, e2, -e3, e4], axis=1)
    c = np.zeros((b, max_degree + 1))
    c[:, 0] = 1.0
    for d in range(1, max_degree + 1):
        acc = np.zeros(b)
        for k in range(1, min(d, 4) + 1):
            acc -= poly[:, k - 1] * c[:, d - k]
        c[:, d] = acc
    return c


def molien_average(thetas, reflected, max_degree):
    """Mean over the grid of the reciprocal-determinant series coefficients."""
    mats = rep_matrices(thetas)
    if reflected:
        mats = mats[:, ::-1, :].copy()
    c = charpoly_reciprocal(mats, max_degree)
    return c.mean(axis=0)
