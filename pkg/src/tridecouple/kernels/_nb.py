"""numba-compiled twins of the kernels in ``_np``."""
import numpy as np
from numba import njit


@njit(cache=True)
def act_dense(s, g):
    n = g.shape[0]
    t1 = np.zeros((n, n, n))
    for a in range(n):
        for b in range(n):
            for k in range(n):
                acc = 0.0
                for c in range(n):
                    acc += s[k, c] * g[a, b, c]
                t1[a, b, k] = acc
    t2 = np.zeros((n, n, n))
    for a in range(n):
        for j in range(n):
            for k in range(n):
                acc = 0.0
                for b in range(n):
                    acc += s[j, b] * t1[a, b, k]
                t2[a, j, k] = acc
    out = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = 0.0
                for a in range(n):
                    acc += s[i, a] * t2[a, j, k]
                out[i, j, k] = acc
    return out


@njit(cache=True)
def act_batch(ss, g):
    b = ss.shape[0]
    n = g.shape[0]
    out = np.empty((b, n, n, n))
    for z in range(b):
        out[z] = act_dense(ss[z], g)
    return out


@njit(cache=True)
def _givens_one(angles, reflect, n):
    out = np.eye(n)
    q = 0
    for i in range(n):
        for j in range(i + 1, n):
            c = np.cos(angles[q])
            s = np.sin(angles[q])
            for r in range(n):
                ci = out[r, i]
                cj = out[r, j]
                out[r, i] = ci * c + cj * s
                out[r, j] = -ci * s + cj * c
            q += 1
    if reflect:
        for r in range(n):
            out[r, 0] = -out[r, 0]
    return out


@njit(cache=True)
def givens_batch(angles, reflect, n):
    b = angles.shape[0]
    out = np.empty((b, n, n))
    for z in range(b):
        out[z] = _givens_one(angles[z], reflect[z], n)
    return out


@njit(cache=True)
def pattern_residuals(angles, reflect, g, flat_idx, weights):
    n = g.shape[0]
    b = angles.shape[0]
    m = flat_idx.shape[0]
    out = np.empty((b, m))
    for z in range(b):
        s = _givens_one(angles[z], reflect[z], n)
        t = act_dense(s, g).ravel()
        for q in range(m):
            out[z, q] = t[flat_idx[q]] * weights[q]
    return out


@njit(cache=True)
def _rep_one(theta, out):
    c = np.cos(theta)
    s = np.sin(theta)
    out[0, 0] = c**3
    out[0, 1] = 3 * s * c**2
    out[0, 2] = 3 * s**2 * c
    out[0, 3] = s**3
    out[1, 0] = -s * c**2
    out[1, 1] = c**3 - 2 * s**2 * c
    out[1, 2] = 2 * s * c**2 - s**3
    out[1, 3] = s**2 * c
    out[2, 0] = s**2 * c
    out[2, 1] = s**3 - 2 * s * c**2
    out[2, 2] = c**3 - 2 * s**2 * c
    out[2, 3] = s * c**2
    out[3, 0] = -s**3
    out[3, 1] = 3 * s**2 * c
    out[3, 2] = -3 * s * c**2
    out[3, 3] = c**3


@njit(cache=True)
def rep_matrices(thetas):
    m = np.empty((thetas.shape[0], 4, 4))
    for z in range(thetas.shape[0]):
        _rep_one(thetas[z], m[z])
    return m


@njit(cache=True)
def _reciprocal_one(mat, max_degree, c):
    p = mat.copy()
    s = np.empty(4)
    for k in range(4):
        tr = 0.0
        for i in range(4):
            tr += p[i, i]
        s[k] = tr
        p = p @ mat
    e1 = s[0]
    e2 = (e1 * s[0] - s[1]) / 2
    e3 = (e2 * s[0] - e1 * s[1] + s[2]) / 3
    e4 = (e3 * s[0] - e2 * s[1] + e1 * s[2] - s[3]) / 4
    poly = np.array([-e1, e2, -e3, e4])
    c[0] = 1.0
    for d in range(1, max_degree + 1):
        acc = 0.0
        for k in range(1, min(d, 4) + 1):
            acc -= poly[k - 1] * c[d - k]
        c[d] = acc


@njit(cache=True)
def charpoly_reciprocal(mats, max_degree):
    b = mats.shape[0]
    c = np.zeros((b, max_degree + 1))
    for z in range(b):
        _reciprocal_one(mats[z], max_degree, c[z])
    return c


@njit(cache=True)
def molien_average(thetas, reflected, max_degree):
    mat = np.empty((4, 4))
    row = np.zeros(max_degree + 1)
    total = np.zeros(max_degree + 1)
    for z in range(thetas.shape[0]):
        _rep_one(thetas[z], mat)
        if reflected:
            mat = mat[::-1, :].copy()
        _reciprocal_one(mat, max_degree, row)
        total += row
    return total / thetas.shape[0]


