"""Seeded self-check suite behind the ``verify`` subcommand.

Each check draws its own fixtures from ``numpy.random.default_rng`` with a
seed derived from the user seed, so results are reproducible and
independent of check order.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .decouple import (
    FullyDecoupleable,
    PartiallyNotFully,
    classify_fd_generic,
    classify_fd_n3,
    classify_n2,
    classify_pd_not_fd_n3,
    fd_necessary_quick,
)
from .invariants import oa_basis, qtilde_partial, so2_basis
from .molien import molien_series
from .orbitlab import make_fd, make_pd_canonical, pd_forward_q, random_pd_params, rational_orthogonal
from .recover import ode_matrices, recover_n2
from .tensor import SymTensor3, act, covariants, eval_cubic

__all__ = ["CHECKS", "run_checks"]


def _rand_tensor(rng, n):
    m = n * (n + 1) * (n + 2) // 6
    return SymTensor3(n, [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(m)])


def check_action_composition(rng, count):
    for _ in range(count):
        n = int(rng.integers(2, 5))
        g = _rand_tensor(rng, n)
        s1, s2 = rational_orthogonal(n, rng), rational_orthogonal(n, rng)
        if act(s2, act(s1, g)) != act(s2 @ s1, g):
            return False, f"composition fails for n={n}"
    return True, ""


def check_pullback(rng, count):
    for _ in range(count):
        n = int(rng.integers(2, 5))
        g = _rand_tensor(rng, n)
        s = rational_orthogonal(n, rng)
        x = np.array([Fraction(int(v)) for v in rng.integers(-5, 6, size=n)], dtype=object)
        if eval_cubic(act(s, g), list(s.matrix.dot(x))) != eval_cubic(g, list(x)):
            return False, "f(sigma x; sigma.G) != f(x; G)"
    return True, ""


def check_covariance(rng, count):
    for _ in range(count):
        n = int(rng.integers(2, 5))
        g = _rand_tensor(rng, n)
        s = rational_orthogonal(n, rng)
        a, b = covariants(g), covariants(act(s, g))
        m = s.matrix
        ok = (
            all(b.u == m.dot(a.u))
            and all(b.v == m.dot(a.v))
            and all(b.w == m.dot(a.w))
            and np.all(b.gamma_star2 == m.dot(a.gamma_star2).dot(m.T))
            and b.D == act(s, a.D)
        )
        if not ok:
            return False, f"covariance fails for n={n}"
    return True, ""


def check_oa_invariance(rng, count):
    for _ in range(count):
        g = _rand_tensor(rng, 3)
        if oa_basis(g) != oa_basis(act(rational_orthogonal(3, rng), g)):
            return False, "an O(3) invariant changed under the action"
    return True, ""


def check_n2_identities(rng, count):
    for _ in range(count):
        inv = so2_basis(_rand_tensor(rng, 2))
        if inv.syzygy() != 0:
            return False, "syzygy"
        if inv.i2 != (inv.h2 + 12 * inv.j2) / 16:
            return False, "trace identity"
        if inv.i3 != (inv.h2**2 + 8 * inv.h2 * inv.j2 + 80 * inv.j2**2 - 128 * inv.l4) / 1024:
            return False, "determinant identity"
    return True, ""


def check_n2_census(rng, count):
    for _ in range(count):
        b1, b2 = (int(v) for v in rng.choice(np.arange(1, 10), size=2, replace=False))
        g = act(rational_orthogonal(2, rng), make_fd([b1, -b2]))
        c = classify_n2(g)
        if not isinstance(c.verdict, FullyDecoupleable):
            return False, "rotated decoupled tensor rejected"
        forms = {f.values for f in recover_n2(g).reduced_forms}
        if len(forms) != 8:
            return False, f"{len(forms)} distinct decoupled forms instead of 8"
    return True, ""


def check_fd_round_trip(rng, count):
    for _ in range(count):
        betas = [int(v) * int(s) for v, s in zip(rng.choice(np.arange(1, 10), 3, replace=False), rng.choice([-1, 1], 3))]
        g = act(rational_orthogonal(3, rng), make_fd(betas))
        c = classify_fd_n3(g)
        if not isinstance(c.verdict, FullyDecoupleable) or any(r != 0 for r in c.residuals.values()):
            return False, f"betas {betas} rejected"
        if sorted(abs(b) for b in betas) != list(c.verdict.betas):
            return False, "beta multiset mismatch"
        if not fd_necessary_quick(g) or not classify_fd_generic(g).accepted:
            return False, "quick test or generic decider disagrees"
    return True, ""


def check_pd_round_trip(rng, count):
    for _ in range(count):
        p = random_pd_params(rng)
        g = act(rational_orthogonal(3, rng), make_pd_canonical(*p))
        c = classify_pd_not_fd_n3(g)
        if not isinstance(c.verdict, PartiallyNotFully):
            return False, f"params {p} rejected"
        if tuple(qtilde_partial(g)) != pd_forward_q(*p):
            return False, "partial quadruple differs from forward values"
    return True, ""


def check_generic_rejects(rng, count):
    for _ in range(count):
        g = _rand_tensor(rng, 3)
        if classify_fd_n3(g).accepted or classify_pd_not_fd_n3(g).accepted:
            return False, "random dense tensor accepted"
    return True, ""


def check_molien(rng, count):
    so2 = molien_series("so2", 12).coefficients
    o2 = molien_series("o2", 12).coefficients
    ok = so2 == (1, 0, 2, 0, 5, 0, 8, 0, 13, 0, 18, 0, 25) and o2 == (1, 0, 2, 0, 4, 0, 6, 0, 9, 0, 12, 0, 16)
    return ok, "" if ok else f"so2={so2} o2={o2}"


def check_ode(rng, count):
    lmat, emat, lam = ode_matrices()
    err = float(np.max(np.abs(emat @ lmat - lam @ emat)))
    eig = sorted(np.linalg.eigvals(lmat).imag)
    ok = err <= 1e-12 and np.allclose(eig, [-3, -1, 1, 3], atol=1e-12)
    return ok, f"|EL - Lambda E| = {err:.2e}"


CHECKS = {
    "action_composition": check_action_composition,
    "pullback": check_pullback,
    "covariance": check_covariance,
    "oa_invariance": check_oa_invariance,
    "n2_identities": check_n2_identities,
    "n2_census": check_n2_census,
    "fd_round_trip": check_fd_round_trip,
    "pd_round_trip": check_pd_round_trip,
    "generic_rejects": check_generic_rejects,
    "molien": check_molien,
    "ode": check_ode,
}


def run_checks(seed, count=10, names=None):
    """Run the named checks (all by default); returns a list of result dicts."""
    out = []
    for k, name in enumerate(names or CHECKS):
        rng = np.random.default_rng([int(seed), k])
        try:
            ok, detail = CHECKS[name](rng, int(count))
        except Exception as exc:  # a crash is a failed check, reported not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append({"check": name, "passed": bool(ok), "detail": detail})
    return out

