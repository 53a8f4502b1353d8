import math

import numpy as np
import pytest

from tridecouple.molien import closed_form, molien_series, rep_matrix, rep_matrix_via_act

SO2 = (1, 0, 2, 0, 5, 0, 8, 0, 13, 0, 18, 0, 25)
O2 = (1, 0, 2, 0, 4, 0, 6, 0, 9, 0, 12, 0, 16)


def series_of(fn, degree):
    """Taylor coefficients of fn at 0 via the FFT of samples on a small circle."""
    m, r = 256, 0.5
    z = r * np.exp(2j * np.pi * np.arange(m) / m)
    c = np.fft.fft(fn(z)) / m
    return [float((c[k] / r**k).real) for k in range(degree + 1)]


def test_tables():
    so2, o2 = molien_series("so2", 12), molien_series("o2", 12)
    assert so2.coefficients == SO2
    assert o2.coefficients == O2
    assert so2.max_drift < 1e-6 and o2.max_drift < 1e-6


def test_lower_degree_prefix():
    assert molien_series("o2", 8).coefficients == O2[:9]


def test_odd_degrees_vanish():
    for group in ("so2", "o2"):
        assert all(c == 0 for c in molien_series(group, 30).coefficients[1::2])


def test_doubling_points_is_stable():
    for group in ("so2", "o2"):
        a = molien_series(group, 20)
        b = molien_series(group, 20, quadrature_points=2 * a.points)
        assert a.coefficients == b.coefficients


def test_o2_is_average_of_branches():
    so2 = molien_series("so2", 24).coefficients
    o2 = molien_series("o2", 24).coefficients
    # 1/(1-l^2)^2 = sum (k+1) l^(2k)
    refl = [(d // 2 + 1) if d % 2 == 0 else 0 for d in range(25)]
    assert [2 * c for c in o2] == [a + b for a, b in zip(so2, refl)]


@pytest.mark.parametrize("group", ["so2", "o2"])
def test_closed_forms_match_series(group):
    expected = series_of(lambda z: closed_form(group, z), 30)
    assert molien_series(group, 30).coefficients == tuple(round(c) for c in expected)


def test_closed_form_spot_check():
    lam = 0.1
    partial = sum(c * lam**d for d, c in enumerate(molien_series("o2", 40).coefficients))
    assert partial == pytest.approx(1 / ((1 - 0.01) ** 2 * (1 - 0.0001)), abs=1e-8)
    assert closed_form("o2", lam) == pytest.approx(partial, abs=1e-8)


def test_reflected_determinant_has_no_angle(rng):
    for theta in rng.uniform(0, 2 * math.pi, 100):
        m = rep_matrix(theta, True)
        # det(I - l M) = (1 - l^2)^2 at a few l values
        for lam in (0.3, -0.7, 1.9):
            assert np.linalg.det(np.eye(4) - lam * m) == pytest.approx((1 - lam * lam) ** 2, abs=1e-10)


def test_rep_matrix_special_angles():
    assert np.allclose(rep_matrix(0.0), np.eye(4))
    assert np.allclose(rep_matrix(math.pi), -np.eye(4), atol=1e-15)
    assert np.allclose(rep_matrix(0.0, True), np.fliplr(np.eye(4)))


def test_rep_matrix_matches_action(rng):
    for theta in rng.uniform(0, 2 * math.pi, 10):
        for refl in (False, True):
            assert np.allclose(rep_matrix(theta, refl), rep_matrix_via_act(theta, refl), atol=1e-14)


def test_rep_is_homomorphism(rng):
    for a, b in rng.uniform(0, 2 * math.pi, (10, 2)):
        assert np.allclose(rep_matrix(a) @ rep_matrix(b), rep_matrix(a + b), atol=1e-13)


def test_argument_errors():
    with pytest.raises(ValueError):
        molien_series("so3", 4)
    with pytest.raises(ValueError):
        molien_series("so2", 41)
    with pytest.raises(ValueError):
        molien_series("so2", 12, quadrature_points=47)
    assert molien_series("so2", 12, quadrature_points=48).coefficients == SO2
