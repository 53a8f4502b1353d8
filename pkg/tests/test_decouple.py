from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from conftest import random_rational_tensor, rational_tensors
from tridecouple.decouple import (
    FullyDecoupleable,
    Indeterminate,
    NotDecoupleable,
    PartiallyNotFully,
    classify_fd_generic,
    classify_fd_n3,
    classify_n2,
    classify_pd_not_fd_n3,
    fd_necessary_quick,
)
from tridecouple.errors import DimensionMismatch
from tridecouple.invariants import qtilde_partial
from tridecouple.orbitlab import (
    haar_orthogonal,
    make_fd,
    make_pd_canonical,
    pd_forward_q,
    random_pd_params,
    rational_orthogonal,
)
from tridecouple.recover import fd_residual
from tridecouple.tensor import SymTensor3, act, tensor_from_cubic


def n2(*params):
    return SymTensor3.from_n2_params(*(Fraction(p) for p in params))


def test_n2_decoupled_accepted():
    c = classify_n2(n2(5, 0, 0, 3))
    assert c.verdict == FullyDecoupleable((3, 5))
    assert c.exit_code == 0


def test_n2_single_coupling_rejected():
    c = classify_n2(n2(0, 0, 1, 0))
    assert isinstance(c.verdict, NotDecoupleable)
    assert c.residuals["relation"] == 1
    assert c.exit_code == 1


def test_n2_rotated_decoupled(rng):
    for seed in range(10):
        g = act(rational_orthogonal(2, seed), n2(3, 0, 0, 5))
        c = classify_n2(g)
        assert c.verdict == FullyDecoupleable((3, 5))
        assert fd_residual(act(c.map, g)) == 0


def test_n2_float_rotation():
    g = act(haar_orthogonal(2, 4), n2(3, 0, 0, 5).to_float())
    c = classify_n2(g)
    assert isinstance(c.verdict, FullyDecoupleable)
    assert np.allclose(c.verdict.betas, (3, 5), atol=1e-9)


def test_n2_zero():
    assert classify_n2(SymTensor3.zeros(2)).verdict == FullyDecoupleable((0, 0))


@given(rational_tensors(2))
def test_n2_two_forms_agree(g):
    c = classify_n2(g)
    assert (c.residuals["relation"] == 0) == (c.residuals["I1-I2"] == 0)
    assert c.residuals["I1-I2"] == -2 * c.residuals["relation"]
    assert not isinstance(c.verdict, Indeterminate)


def test_n2_wrong_dimension(reference_tensor):
    with pytest.raises(DimensionMismatch):
        classify_n2(reference_tensor)


def test_fd3_rotated_diagonal(rng):
    for seed in range(10):
        g = act(rational_orthogonal(3, seed), make_fd([Fraction(1), Fraction(2), Fraction(3)]))
        c = classify_fd_n3(g)
        assert c.verdict == FullyDecoupleable((1, 2, 3))
        assert all(v == 0 for v in c.residuals.values())
        assert len(c.residuals) == 13


def test_fd3_irrational_betas_float():
    g = act(haar_orthogonal(3, 9), make_fd([np.sqrt(2), -1.5, np.pi]))
    c = classify_fd_n3(g)
    assert np.allclose(c.verdict.betas, sorted([np.sqrt(2), 1.5, np.pi]), rtol=1e-8)


def test_fd3_example_rejected(reference_tensor):
    c = classify_fd_n3(reference_tensor)
    assert isinstance(c.verdict, NotDecoupleable)
    assert any(v != 0 for v in c.residuals.values())


def test_fd3_zero():
    c = classify_fd_n3(SymTensor3.zeros(3))
    assert c.verdict == FullyDecoupleable((0, 0, 0))


def test_fd3_tolerance_boundary():
    # one coupling entry of size delta moves the worst residual to about 4e9 * delta thresholds
    base = make_fd([1.0, 2.0, 3.0])

    def perturbed(delta):
        e = dict(base.entries())
        e[(0, 1, 2)] = delta
        return SymTensor3.from_entries(3, e, False)

    assert isinstance(classify_fd_n3(perturbed(1e-10)).verdict, FullyDecoupleable)
    assert classify_fd_n3(perturbed(1e-9)).verdict == Indeterminate("ToleranceBoundary")
    assert classify_fd_n3(perturbed(1e-9)).exit_code == 2
    assert isinstance(classify_fd_n3(perturbed(1e-7)).verdict, NotDecoupleable)


def test_pd3_rotated_canonical():
    p = tuple(map(Fraction, (2, 0, 1, 3)))
    g = act(rational_orthogonal(3, 5), make_pd_canonical(*p))
    c = classify_pd_not_fd_n3(g)
    assert c.verdict == PartiallyNotFully(*p)
    assert len(c.residuals) == 9 and all(v == 0 for v in c.residuals.values())


def test_pd3_example_rejected(reference_tensor):
    c = classify_pd_not_fd_n3(reference_tensor)
    assert isinstance(c.verdict, NotDecoupleable)
    assert all(v != 0 for v in c.residuals.values())
    assert c.residuals["J4"] == Fraction(8000, 3)
    # solvability would fail as well: the first partial quantity is negative
    assert qtilde_partial(reference_tensor)[0] < 0


def test_pd3_diagonal_excluded():
    c = classify_pd_not_fd_n3(make_fd([Fraction(1), Fraction(2), Fraction(3)]))
    assert c.verdict == Indeterminate("DomainExcluded")
    assert c.exit_code == 2


def test_pd3_float_round_trip(rng):
    for seed in range(10):
        p = [float(x) for x in random_pd_params(rng)]
        g = act(haar_orthogonal(3, seed), make_pd_canonical(*p))
        c = classify_pd_not_fd_n3(g)
        assert isinstance(c.verdict, PartiallyNotFully)
        v = c.verdict
        assert min(v.alpha, v.gamma2, v.beta3) >= 0
        got = pd_forward_q(v.alpha, v.gamma1, v.gamma2, v.beta3)
        assert np.allclose(got, pd_forward_q(*p), rtol=1e-6, atol=1e-6)


def test_generic_rotated_diagonal():
    g = act(rational_orthogonal(3, 2), make_fd([Fraction(1), Fraction(2), Fraction(3)]))
    c = classify_fd_generic(g)
    assert c.verdict == FullyDecoupleable((1, 2, 3))
    assert fd_residual(act(c.map, g)) == 0


def test_generic_repeated_eigenvalues():
    g = tensor_from_cubic({(3, 0): 1, (0, 3): -1}, 2)
    assert classify_fd_generic(g).verdict == Indeterminate("DegenerateEigenvalues")


def test_generic_dense_four_dimensional(rng):
    for _ in range(5):
        c = classify_fd_generic(random_rational_tensor(rng, 4))
        assert isinstance(c.verdict, NotDecoupleable)


def test_generic_higher_dimensions(rng):
    for n in (4, 5):
        betas = [float(b) for b in rng.permutation(np.arange(1, n + 1)) * rng.choice([-1, 1], n)]
        g = act(haar_orthogonal(n, n), make_fd(betas))
        c = classify_fd_generic(g)
        assert np.allclose(c.verdict.betas, sorted(abs(b) for b in betas), rtol=1e-8)


def test_generic_agrees_with_fd3(rng):
    kinds = {"fd": 0, "pd": 0, "generic": 0}
    for k in range(1000):
        kind = ("fd", "pd", "generic")[k % 3]
        s = rational_orthogonal(3, rng)
        if kind == "fd":
            g = act(s, make_fd([Fraction(int(v)) for v in rng.choice(np.arange(1, 10), 3, replace=False)]))
        elif kind == "pd":
            g = act(s, make_pd_canonical(*random_pd_params(rng)))
        else:
            g = random_rational_tensor(rng, 3)
        gen = classify_fd_generic(g)
        if isinstance(gen.verdict, Indeterminate):
            continue
        kinds[kind] += 1
        assert gen.accepted == classify_fd_n3(g).accepted
    assert min(kinds.values()) > 250


def block_form(b1, gam, b2):
    return SymTensor3.from_entries(
        3, {(0, 0, 0): Fraction(b1), (0, 0, 1): Fraction(gam), (1, 1, 1): Fraction(b2 - gam), (2, 2, 2): Fraction(4)}
    )


def test_quick_test():
    assert fd_necessary_quick(make_fd([Fraction(1), Fraction(-2), Fraction(3)]))
    assert not fd_necessary_quick(block_form(3, 2, 5))
    # gamma * beta2 == 2 gamma^2 is where the two diagonals coincide
    assert fd_necessary_quick(act(rational_orthogonal(3, 8), make_fd([Fraction(2), Fraction(5), Fraction(7)])))
    assert fd_necessary_quick(act(haar_orthogonal(3, 8), make_fd([2.0, 5.0, 7.0])))


def test_quick_test_implied_by_fd3(rng):
    for _ in range(30):
        g = random_rational_tensor(rng, 3)
        if not fd_necessary_quick(g):
            assert not classify_fd_n3(g).accepted
