import numpy as np
import pytest

from qchar.groups import FiniteAbelianGroup, Subgroup, annihilator
from qchar.kernels import HAS_NUMBA, active_backend, convolve, dft, dft_many, set_backend

GROUPS = [
    FiniteAbelianGroup((5,)),
    FiniteAbelianGroup((2, 4)),
    FiniteAbelianGroup((3, 3, 2)),
    FiniteAbelianGroup((60,)),
]


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(20240))


def random_prob(rng, n):
    p = rng.random(n)
    return p / p.sum()


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: str(g.orders))
def test_forward_inverse_round_trip(g, rng):
    p = random_prob(rng, g.order)
    hat = dft(g, p)
    back = dft(g, hat, sign=-1) / g.order
    assert np.max(np.abs(back - p)) < 1e-12


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: str(g.orders))
def test_transform_at_zero_is_total_mass(g, rng):
    p = random_prob(rng, g.order)
    assert abs(dft(g, p)[0] - 1.0) < 1e-12


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: str(g.orders))
def test_convolution_theorem(g, rng):
    p = random_prob(rng, g.order)
    q = random_prob(rng, g.order)
    c = convolve(g, p, q)
    assert abs(c.sum() - 1.0) < 1e-12
    lhs = dft(g, c)
    rhs = dft(g, p) * dft(g, q)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_dft_many_matches_single(rng):
    g = FiniteAbelianGroup((3, 4))
    mat = rng.random((5, g.order))
    out = dft_many(g, mat)
    for i in range(5):
        assert np.max(np.abs(out[i] - dft(g, mat[i]))) < 1e-13


def test_dft_rows_are_exact_characters():
    g = FiniteAbelianGroup((6,))
    eye = np.eye(g.order)
    rows = dft_many(g, eye)
    w = np.exp(2j * np.pi / 6)
    for x in range(6):
        for u in range(6):
            assert abs(rows[x][u] - w ** (x * u)) < 1e-12


def test_haar_indicator_via_transform():
    g = FiniteAbelianGroup((2, 4))
    s = Subgroup.from_generators(g, [(0, 2)])
    p = np.zeros(g.order)
    for i in s.elements:
        p[i] = 1.0 / s.order
    hat = dft(g, p)
    ann = annihilator(g, s)
    ind = np.zeros(g.order)
    for i in ann.elements:
        ind[i] = 1.0
    assert np.max(np.abs(hat - ind)) < 1e-12


@pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")
def test_backend_equivalence(rng):
    g = FiniteAbelianGroup((4, 9))
    p = random_prob(rng, g.order)
    q = random_prob(rng, g.order)
    prev = set_backend("numpy")
    try:
        hat_np = dft(g, p)
        conv_np = convolve(g, p, q)
        set_backend("numba")
        hat_nb = dft(g, p)
        conv_nb = convolve(g, p, q)
    finally:
        set_backend(prev)
    assert np.max(np.abs(hat_np - hat_nb)) < 1e-12
    assert np.max(np.abs(conv_np - conv_nb)) < 1e-12


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        set_backend("gpu")
    assert active_backend() in {"numba", "numpy"}
