import numpy as np
import pytest

from qchar.errors import (
    InvalidElementError,
    InvalidSubgroupError,
    NotAnAutomorphismError,
    SizeLimitError,
)
from qchar.groups import (
    Automorphism,
    FiniteAbelianGroup,
    GroupHom,
    Subgroup,
    adjoint,
    all_subgroups,
    annihilator,
    element_order,
    generating_set,
    groups_up_to_order,
    is_corwin,
    multiplication_map,
    pairing,
    primary_component,
    quotient,
    structural_predicates,
)


def test_coords_index_round_trip():
    g = FiniteAbelianGroup((2, 3, 4))
    for i in range(g.order):
        assert g.index(g.coords(i)) == i


def test_arithmetic_reduces_mod_orders():
    g = FiniteAbelianGroup((4, 6))
    assert g.add((3, 5), (2, 2)) == (1, 1)
    assert g.neg((1, 0)) == (3, 0)
    assert g.reduce_coords((-1, 7)) == (3, 1)


def test_order_rank_exponent():
    g = FiniteAbelianGroup((2, 4, 3))
    assert g.order == 24
    assert g.rank == 3
    assert g.exponent == 12


def test_invalid_orders_rejected():
    with pytest.raises(Exception):
        FiniteAbelianGroup((0, 3))
    with pytest.raises(SizeLimitError):
        FiniteAbelianGroup((5000,))


def test_element_validation():
    g = FiniteAbelianGroup((5,))
    with pytest.raises(InvalidElementError):
        g.element((1, 2))


def test_pairing_is_bilinear_character():
    g = FiniteAbelianGroup((3, 4))
    for x in [(1, 0), (2, 3), (0, 1)]:
        for y in [(1, 1), (2, 2)]:
            for z in [(0, 3), (1, 2)]:
                lhs = pairing(g, x, g.add(y, z))
                rhs = pairing(g, x, y) * pairing(g, x, z)
                assert abs(lhs - rhs) < 1e-12


def test_subgroup_generation_and_membership():
    g = FiniteAbelianGroup((12,))
    s = Subgroup.from_generators(g, [(4,)])
    assert s.order == 3
    assert s.contains((8,))
    assert not s.contains((2,))


def test_subgroup_must_be_closed():
    g = FiniteAbelianGroup((4,))
    with pytest.raises(InvalidSubgroupError):
        Subgroup(g, (0, 1))


def test_annihilator_involution_and_size():
    g = FiniteAbelianGroup((2, 4))
    for s in all_subgroups(g):
        a = annihilator(g, s)
        assert s.order * a.order == g.order
        back = annihilator(g, a)
        assert set(back.coords_list()) == set(s.coords_list())


def test_hom_from_matrix_and_kernel():
    g = FiniteAbelianGroup((4, 4))
    h = GroupHom.from_matrix(g, g, [[2, 0], [0, 1]])
    assert h((1, 1)) == (2, 1)
    assert h.kernel().order == 2
    assert not h.is_bijective


def test_matrix_must_respect_orders():
    a = FiniteAbelianGroup((2,))
    b = FiniteAbelianGroup((3,))
    # the only hom Z2 -> Z3 is zero; sending 1 to 1 is not additive
    with pytest.raises(Exception):
        GroupHom.from_matrix(a, b, [[1]])


def test_automorphism_inverse():
    g = FiniteAbelianGroup((5,))
    a = Automorphism.multiplication(g, 2)
    inv = a.inverse()
    for x in g.elements():
        assert inv(a(x)) == x


def test_non_bijective_rejected_as_automorphism():
    g = FiniteAbelianGroup((4,))
    with pytest.raises(NotAnAutomorphismError):
        Automorphism.multiplication(g, 2)


def test_adjoint_satisfies_pairing_identity():
    g = FiniteAbelianGroup((3, 9))
    h = GroupHom.from_matrix(g, g, [[2, 0], [3, 4]])
    hs = adjoint(h)
    for x in [(1, 2), (2, 7), (0, 4)]:
        for y in [(1, 1), (2, 8)]:
            assert abs(pairing(g, h(x), y) - pairing(g, x, hs(y))) < 1e-12


def test_adjoint_of_multiplication_is_multiplication():
    g = FiniteAbelianGroup((7,))
    h = multiplication_map(g, 3)
    hs = adjoint(h)
    for x in g.elements():
        assert hs(x) == h(x)


def test_corwin_detection():
    assert is_corwin(FiniteAbelianGroup((3, 5)))
    assert not is_corwin(FiniteAbelianGroup((2, 3)))
    g = FiniteAbelianGroup((12,))
    assert is_corwin(Subgroup.from_generators(g, [(4,)]))  # order 3
    assert not is_corwin(Subgroup.from_generators(g, [(6,)]))  # order 2


def test_structural_predicates():
    p = structural_predicates(FiniteAbelianGroup((2, 3)))
    assert p["has_order_two_elements"]
    assert not p["unique_division_by_2"]
    q = structural_predicates(FiniteAbelianGroup((9,)))
    assert not q["has_order_two_elements"]
    assert q["unique_division_by_2"]


def test_element_order():
    g = FiniteAbelianGroup((4, 6))
    assert element_order(g, (2, 3)) == 2
    assert element_order(g, (1, 1)) == 12
    assert element_order(g, (0, 0)) == 1


def test_primary_component():
    g = FiniteAbelianGroup((12,))
    p2 = primary_component(g, 2)
    p3 = primary_component(g, 3)
    assert p2.order == 4
    assert p3.order == 3


def test_quotient_sizes_and_projection():
    g = FiniteAbelianGroup((4, 2))
    s = Subgroup.from_generators(g, [(2, 0)])
    q, proj = quotient(g, s)
    assert q.order == 4
    # the projection kills exactly the subgroup
    assert proj.kernel().order == s.order
    for x in s.coords_list():
        assert proj(x) == tuple([0] * q.rank)


def test_generating_set_regenerates():
    g = FiniteAbelianGroup((2, 4))
    for s in all_subgroups(g):
        gens = [g.coords(i) for i in generating_set(s)]
        regen = Subgroup.from_generators(g, gens) if gens else Subgroup.trivial(g)
        assert set(regen.coords_list()) == set(s.coords_list())


def test_all_subgroups_counts():
    # cyclic: one subgroup per divisor
    assert len(all_subgroups(FiniteAbelianGroup((12,)))) == 6
    # Klein four group: trivial, three order-2, full
    assert len(all_subgroups(FiniteAbelianGroup((2, 2)))) == 5


def test_groups_up_to_order_catalogue():
    gs = groups_up_to_order(8)
    sigs = sorted(g.orders for g in gs)
    # one entry per isomorphism class, orders 2..8
    assert (2, 2, 2) in sigs
    assert (2, 4) in sigs
    assert (8,) in sigs
    assert len([s for s in sigs if int(np.prod(s)) == 4]) == 2
