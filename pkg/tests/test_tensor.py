import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_rational_tensor, rational_maps, rational_tensors
from tridecouple.errors import DimensionMismatch, MalformedPolynomial, NotOrthogonal
from tridecouple.invariants import charpoly_coefficients
from tridecouple.orbitlab import haar_orthogonal, make_fd, rational_orthogonal
from tridecouple.tensor import (
    OrthogonalMap,
    SymTensor3,
    act,
    covariants,
    eval_cubic,
    gamma_star2,
    tensor_from_cubic,
    tensor_to_cubic,
    u_dot_gamma,
)


def test_entry_count_and_symmetric_access():
    for n in range(1, 7):
        assert len(SymTensor3.zeros(n).values) == n * (n + 1) * (n + 2) // 6
    g = SymTensor3.from_entries(3, {(2, 0, 1): Fraction(5)})
    for p in itertools.permutations((0, 1, 2)):
        assert g[p] == 5


def test_wrong_length_rejected():
    with pytest.raises(DimensionMismatch):
        SymTensor3(2, [1, 2, 3])


def test_dense_round_trip(rng):
    g = random_rational_tensor(rng, 4)
    assert SymTensor3.from_dense(g.dense()) == g
    arr = np.zeros((2, 2, 2))
    arr[0, 0, 1] = 1.0
    with pytest.raises(ValueError):
        SymTensor3.from_dense(arr)


def test_cubic_single_monomial():
    g = tensor_from_cubic({(3, 0): 1}, 2)
    assert g[0, 0, 0] == 1
    assert sum(abs(v) for v in g.values) == 1


def test_cubic_example_tensor(reference_tensor):
    expected = {(0, 0, 0): 2, (0, 0, 1): 1, (0, 1, 2): -2, (1, 1, 1): 3, (2, 2, 2): 6}
    for t, v in reference_tensor.entries().items():
        assert v == expected.get(t, 0), t


def test_cubic_zero_polynomial():
    assert tensor_from_cubic({}, 3).is_zero()


def test_cubic_rejects_non_cubic():
    with pytest.raises(MalformedPolynomial):
        tensor_from_cubic({(2, 0): 1}, 2)
    with pytest.raises(MalformedPolynomial):
        tensor_from_cubic({(1, 1, 1, 0): 1}, 3)


@given(rational_tensors())
def test_cubic_round_trip(g):
    back = tensor_from_cubic(tensor_to_cubic(g), g.n, exact=True)
    assert back == g


def test_eval_cubic_examples(reference_tensor):
    assert eval_cubic(tensor_from_cubic({(3, 0): 1}, 2), [2, 0]) == 8
    assert eval_cubic(reference_tensor, [1, 1, 1]) == 2
    assert eval_cubic(reference_tensor, [0, 0, 0]) == 0


@given(rational_tensors(), st.fractions(-5, 5, max_denominator=7), st.data())
def test_eval_cubic_homogeneous(g, t, data):
    x = data.draw(st.lists(st.integers(-5, 5), min_size=g.n, max_size=g.n))
    assert eval_cubic(g, [t * v for v in x]) == t**3 * eval_cubic(g, x)


def test_eval_matches_cubic_coefficients(rng):
    g = random_rational_tensor(rng, 3)
    x = [Fraction(2), Fraction(-1, 3), Fraction(5, 2)]
    direct = sum(c * math.prod(xi**e for xi, e in zip(x, exps)) for exps, c in tensor_to_cubic(g).items())
    assert eval_cubic(g, x) == direct


def test_act_identity(rng):
    g = random_rational_tensor(rng, 3)
    assert act(OrthogonalMap.identity(3), g) == g


def test_act_swap_reverses_parameters():
    g = SymTensor3.from_n2_params(*(Fraction(v) for v in (1, 2, 3, 4)))
    assert act(OrthogonalMap.swap2(), g).n2_params() == (4, 3, 2, 1)


def test_act_quarter_turn():
    g = SymTensor3.from_n2_params(0, 0, 0, 1)
    quarter = OrthogonalMap.from_matrix(np.array([[0, -1], [1, 0]], dtype=object))
    assert act(quarter, g).n2_params() == (1, 0, 0, 0)
    img = act(OrthogonalMap.rotation2(math.pi / 2), g.to_float())
    assert np.allclose(img.n2_params(), (1, 0, 0, 0), atol=1e-15)


def test_act_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        act(OrthogonalMap.identity(2), SymTensor3.zeros(3))


@settings(max_examples=60)
@given(st.data())
def test_action_composes_exactly(data):
    n = data.draw(st.integers(2, 4))
    g = data.draw(rational_tensors(n))
    s1, s2 = data.draw(rational_maps(n)), data.draw(rational_maps(n))
    assert act(s2, act(s1, g)) == act(s2 @ s1, g)


@settings(max_examples=60)
@given(st.data())
def test_pullback_identity(data):
    n = data.draw(st.integers(2, 4))
    g = data.draw(rational_tensors(n))
    s = data.draw(rational_maps(n))
    x = np.array([Fraction(v) for v in data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n))], dtype=object)
    assert eval_cubic(act(s, g), list(s.matrix.dot(x))) == eval_cubic(g, list(x))
    # equivalently f(x; s.G) = f(s^T x; G)
    assert eval_cubic(act(s, g), list(x)) == eval_cubic(g, list(s.matrix.T.dot(x)))


def test_float_action_matches_exact(rng):
    g = random_rational_tensor(rng, 4)
    s = rational_orthogonal(4, 7)
    exact = act(s, g)
    approx = act(OrthogonalMap.from_matrix(s.float_matrix()), g.to_float())
    assert exact.max_abs_diff(approx) < 1e-12


def test_orthogonal_certificate():
    with pytest.raises(NotOrthogonal):
        OrthogonalMap.from_matrix(np.array([[1.0, 1e-9], [0.0, 1.0]]))
    with pytest.raises(NotOrthogonal):
        OrthogonalMap.from_matrix(np.array([[Fraction(1), Fraction(1, 10**12)], [Fraction(0), Fraction(1)]], dtype=object))
    ok = OrthogonalMap.from_matrix(np.eye(3) + 1e-12)
    assert ok.det_sign == 1
    assert OrthogonalMap.swap2().det_sign == -1
    for seed in range(20):
        s = rational_orthogonal(3, seed)
        assert s.det_sign == (1 if np.linalg.det(s.float_matrix()) > 0 else -1)


def test_covariants_example(reference_tensor):
    c = covariants(reference_tensor)
    assert list(c.u) == [2, 4, 6]
    d = c.D
    assert (d[0, 0, 0], d[0, 1, 2], d[2, 2, 2], d[0, 0, 2], d[1, 2, 2]) == (4, -10, 12, -6, -4)
    assert c.d_star2.tolist() == [[298, 242, 48], [242, 306, 56], [48, 56, 456]]


def test_covariants_decoupled():
    c = covariants(make_fd([1, 2, 3]))
    assert list(c.u) == [1, 2, 3]
    assert c.gamma_star2.tolist() == [[1, 0, 0], [0, 4, 0], [0, 0, 9]]


def test_covariants_trace_free_input():
    # x1^3 - 3 x1 x2^2 is harmonic, so u = 0
    g = tensor_from_cubic({(3, 0): 1, (1, 2): -3}, 2)
    c = covariants(g)
    assert all(x == 0 for x in c.u)
    assert c.B.is_zero()
    assert c.D == g.scale(4)
    assert all(x == 0 for x in c.w)


@given(rational_tensors())
def test_harmonic_decomposition(g):
    c = covariants(g)
    d = c.D.dense()
    assert all(sum(d[i, l, l] for l in range(g.n)) == 0 for i in range(g.n))
    assert c.B + c.D.scale(Fraction(1, g.n + 2)) == g
    for m in (c.gamma_star2, c.d_star2):
        assert np.all(m == m.T)
        assert np.all(np.linalg.eigvalsh(np.asarray(m, float)) >= -1e-9 * (1 + np.abs(np.asarray(m, float)).max()))


@settings(max_examples=40)
@given(st.data())
def test_covariants_are_equivariant(data):
    n = data.draw(st.integers(2, 4))
    g = data.draw(rational_tensors(n))
    s = data.draw(rational_maps(n))
    a, b = covariants(g), covariants(act(s, g))
    m = s.matrix
    assert list(b.u) == list(m.dot(a.u))
    assert list(b.v) == list(m.dot(a.v))
    assert list(b.w) == list(m.dot(a.w))
    assert np.all(b.gamma_star2 == m.dot(a.gamma_star2).dot(m.T))
    assert np.all(b.d_star2 == m.dot(a.d_star2).dot(m.T))
    assert b.D == act(s, a.D)
    assert charpoly_coefficients(b.gamma_star2, True) == charpoly_coefficients(a.gamma_star2, True)


def test_u_dot_gamma_decoupled():
    g = make_fd([Fraction(2), Fraction(-1), Fraction(5)])
    assert np.all(u_dot_gamma(g) == gamma_star2(g))
    assert u_dot_gamma(g).tolist() == [[4, 0, 0], [0, 1, 0], [0, 0, 25]]


def block_pd_tensor(b1, gam, b2, b3):
    """n = 3 tensor whose 2x2x2 block has slices [[b1, g], [g, 0]] and [[g, 0], [0, b2 - g]]."""
    return SymTensor3.from_entries(3, {(0, 0, 0): b1, (0, 0, 1): gam, (1, 1, 1): b2 - gam, (2, 2, 2): b3})


def test_u_dot_gamma_block_form():
    b1, gam, b2 = Fraction(3), Fraction(2), Fraction(5)
    g = block_pd_tensor(b1, gam, b2, Fraction(7))
    ug, g2 = u_dot_gamma(g), gamma_star2(g)
    assert ug[0, 0] == gam * b2 + b1**2
    assert g2[0, 0] == 2 * gam**2 + b1**2
    assert not np.all(ug == g2)


def test_u_dot_gamma_zero():
    assert np.all(u_dot_gamma(SymTensor3.zeros(3)) == 0)


def test_haar_orthogonal_in_float_action():
    s = haar_orthogonal(5, 3)
    g = random_rational_tensor(np.random.default_rng(1), 5).to_float()
    back = act(s.T, act(s, g))
    assert back.max_abs_diff(g) < 1e-12
