import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qchar.groups import FiniteAbelianGroup
from qchar.polynomials import (
    GroupFunction,
    IntegerWindow,
    WindowFunction,
    constancy_check,
    delta,
    fit_polynomial_window,
    is_polynomial,
    iterated_delta,
    min_degree,
    monomials_up_to,
    poly_eval,
    quadratic_check,
    tabulate,
)


def test_window_geometry():
    w = IntegerWindow(radius=3, dim=2)
    assert w.side == 7
    pts = w.points()
    assert pts.shape == (49, 2)
    assert pts.min() == -3 and pts.max() == 3


def test_tabulate_and_value():
    f = tabulate(4, 1, lambda x: x ** 2)
    assert f.value((3,)) == 9
    assert f.value((-4,)) == 16


def test_delta_shrinks_window():
    f = tabulate(5, 1, lambda x: x ** 3)
    d = delta(f, (2,))
    assert d.window.radius == 3
    # difference of cubes: (x+2)^3 - x^3 = 6x^2 + 12x + 8
    assert d.value((1,)) == 6 + 12 + 8


def test_iterated_delta_kills_degree():
    f = tabulate(8, 1, lambda x: 2 * x ** 3 - x + 4)
    out = iterated_delta(f, (1,), 4)
    assert np.max(np.abs(out.values)) == 0.0


def test_cubic_passes_exactly_at_its_degree():
    f = tabulate(10, 1, lambda x: x ** 3)
    assert not is_polynomial(f, 2)
    assert is_polynomial(f, 3)
    cert = min_degree(f)
    assert cert.degree == 3
    assert cert.residual == 0.0
    assert cert.coefficients.get((3,)) == pytest.approx(1.0)


def test_two_dim_mixed_monomial():
    f = tabulate(6, 2, lambda x, y: x ** 2 * y)
    cert = min_degree(f)
    assert cert.degree == 3
    assert cert.coefficients.get((2, 1)) == pytest.approx(1.0)


def test_non_polynomial_has_no_certificate():
    f = tabulate(6, 1, lambda x: 2.0 ** x)
    assert min_degree(f, n_max=4) is None


def test_group_polynomial_iff_constant():
    g = FiniteAbelianGroup((5,))
    const = GroupFunction(g, np.full(5, 2.5))
    rep = constancy_check(const)
    assert rep == {"constant": True, "polynomial": True, "degree": 0}
    varying = GroupFunction(g, np.arange(5, dtype=float))
    rep = constancy_check(varying)
    assert rep == {"constant": False, "polynomial": False, "degree": None}


def test_group_delta_wraps():
    g = FiniteAbelianGroup((4,))
    f = GroupFunction(g, np.array([1.0, 2.0, 4.0, 8.0]))
    d = delta(f, (1,))
    assert d.values[3] == pytest.approx(1.0 - 8.0)


def test_quadratic_check_zero_for_true_quadratic():
    f = tabulate(10, 1, lambda x: 1.5 * x ** 2)
    assert quadratic_check(f) == 0.0


def test_quadratic_check_positive_for_quartic():
    f = tabulate(10, 1, lambda x: float(x ** 4))
    r = quadratic_check(f)
    # combination at u = v = 1 gives 2^4 + 0 - 2 - 2 = 12
    assert r >= 12.0


def test_quadratic_check_requires_even():
    f = tabulate(5, 1, lambda x: float(x ** 3))
    with pytest.raises(ValueError):
        quadratic_check(f)


def test_monomials_and_eval():
    mons = monomials_up_to(2, 2)
    assert (0, 0) in mons and (1, 1) in mons and (2, 0) in mons
    pts = np.array([[1, 2], [3, -1]])
    vals = poly_eval({(1, 1): 2.0, (0, 0): 1.0}, pts)
    assert vals[0] == pytest.approx(5.0)
    assert vals[1] == pytest.approx(-5.0)


def test_fit_recovers_integer_coefficients():
    f = tabulate(6, 2, lambda x, y: 3 * x ** 2 - x * y + 7)
    cert = fit_polynomial_window(f, d_max=2)
    assert cert.degree == 2
    assert cert.coefficients[(2, 0)] == pytest.approx(3.0)
    assert cert.coefficients[(1, 1)] == pytest.approx(-1.0)
    assert cert.coefficients[(0, 0)] == pytest.approx(7.0)


@settings(max_examples=25, deadline=None)
@given(
    coeffs=st.lists(st.integers(min_value=-4, max_value=4), min_size=1, max_size=5),
)
def test_degree_detection_matches_leading_term(coeffs):
    arr = np.array(coeffs, dtype=float)
    true_deg = max([i for i, c in enumerate(arr) if c != 0], default=0)
    f = tabulate(9, 1, lambda x: float(np.polyval(arr[::-1], x)))
    cert = min_degree(f)
    assert cert is not None
    assert cert.degree == true_deg
    assert cert.residual <= 1e-8
