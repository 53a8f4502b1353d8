"""Molien series of SO(2) and O(2) acting on n = 2 symmetric 3-tensors.

The coefficient of lam^d counts linearly independent invariants of degree d.
It is the group average of the power-series coefficients of
1 / det(I - lam L_g), where L_g is the 4x4 action on (a0, a1, a2, a3).
For rotations, the degree-d coefficient is a trigonometric polynomial of
degree at most 3d in the angle, so the uniform trapezoid rule with more
than 3d nodes integrates it exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .tensor import OrthogonalMap, SymTensor3, act

__all__ = [
    "MolienSeries",
    "closed_form",
    "molien_series",
    "rep_matrix",
    "rep_matrix_via_act",
]

MAX_DEGREE = 40
DRIFT_TOL = 1e-6


def rep_matrix(theta, reflected=False):
    """4x4 matrix of the action on (a0, a1, a2, a3).

    Unreflected, this is the action of the rotation [[c, -s], [s, c]];
    reflected, it is the swap x1 <-> x2 applied after that rotation, which
    reverses the rows.
    """
    m = kernels.numpy_backend.rep_matrices(np.array([float(theta)]))[0]
    return m[::-1].copy() if reflected else m


def rep_matrix_via_act(theta, reflected=False):
    """The same matrix, built column by column from :func:`act`."""
    sigma = OrthogonalMap.rotation2(theta)
    if reflected:
        sigma = OrthogonalMap.swap2() @ sigma
    cols = []
    for k in range(4):
        e = [0.0] * 4
        e[k] = 1.0
        cols.append(act(sigma, SymTensor3.from_n2_params(*e, exact=False)).n2_params())
    return np.array(cols, dtype=float).T


@dataclass(frozen=True)
class MolienSeries:
    group: str
    coefficients: tuple  # rounded integers
    raw: tuple  # quadrature values before rounding
    max_degree: int
    points: int

    @property
    def max_drift(self):
        return max(abs(r - c) for r, c in zip(self.raw, self.coefficients))


def molien_series(group="so2", max_degree=12, quadrature_points=None) -> MolienSeries:
    """Coefficients c_0 .. c_D of the Molien series by trapezoid quadrature.

    Raises ValueError for D > 40, too few quadrature points, or when a raw
    coefficient is more than 1e-6 away from an integer.
    """
    group = group.lower()
    if group not in ("so2", "o2"):
        raise ValueError(f"unknown group {group!r}")
    d = int(max_degree)
    if not 0 <= d <= MAX_DEGREE:
        raise ValueError(f"max_degree must be in [0, {MAX_DEGREE}]")
    points = int(quadrature_points) if quadrature_points is not None else max(4 * d, 8)
    if points < 4 * d or points < 1:
        raise ValueError(f"need at least {4 * d} quadrature points for degree {d}")
    thetas = 2 * math.pi * np.arange(points) / points
    raw = kernels.molien_average(thetas, False, d)
    if group == "o2":
        raw = (raw + kernels.molien_average(thetas, True, d)) / 2
    coeffs = tuple(int(round(x)) for x in raw)
    series = MolienSeries(group, coeffs, tuple(float(x) for x in raw), d, points)
    if series.max_drift >= DRIFT_TOL:
        raise ValueError(f"quadrature drift {series.max_drift:.3e} exceeds {DRIFT_TOL}")
    return series


def closed_form(group, lam):
    """Rational generating functions of the two series."""
    l2, l4 = lam * lam, lam**4
    if group == "so2":
        return (1 + l4) / ((1 - l2) ** 2 * (1 - l4))
    if group == "o2":
        return 1 / ((1 - l2) ** 2 * (1 - l4))
    raise ValueError(f"unknown group {group!r}")
