from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from goba import cocycles, groups

SMALL_GROUPS = [
    groups.cyclic(1 + 1),
    groups.cyclic(6),
    groups.abelian((2, 3)),
    groups.abelian((2, 2, 2)),
    groups.dihedral(3),
    groups.dihedral(4),
    groups.dihedral(6),
    groups.dicyclic(1),
    groups.dicyclic(3),
]


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=lambda G: G.name)
def test_axioms(G):
    G.check_axioms()
    T = G.cayley()
    for g in G.elements():
        assert T[g, G.inv(g)] == 0


def test_dicyclic_relations():
    for t in (1, 2, 3):
        Q = groups.dicyclic(t)
        x, y = 1, 4 * t
        assert Q.power(x, 2 * t) == Q.power(y, 2)
        assert Q.power(y, 4) == 0
        assert Q.mul(Q.mul(Q.inv(y), x), y) == Q.inv(x)
        assert Q.center() == [0, 2 * t]
        assert not Q.is_abelian


def test_dihedral_relations():
    for n in (3, 4, 6):
        D = groups.dihedral(n)
        a, b = 1, n
        assert D.element_order(a) == n and D.element_order(b) == 2
        assert D.mul(D.mul(b, a), b) == D.inv(a)
        # (a^i b)(a^j) = a^(i-j) b
        assert D.mul(n + 2, 1) == n + 1


def test_parse_group_grammar():
    assert groups.parse_group("a:2x3").order == 6
    assert groups.parse_group("c:10") is groups.cyclic(10)
    assert groups.parse_group("d:5").name == "D10"
    assert groups.parse_group("q:3").name == "Q24"
    assert groups.parse_group("ext:2x3/10").order == 12
    for bad in ("x:3", "a:", "d:1", "q:zero", "a:1x3"):
        with pytest.raises(ValueError):
            groups.parse_group(bad)


def test_build_expansion_keeps_cached_specs():
    before = groups.cyclic(12).spec
    groups.build_expansion((6,), (1,))
    assert groups.cyclic(12).spec == before == "a:12"


def test_expansion_subgroups():
    for s, z in [((2, 3), (1, 0)), ((2, 3), (0, 1)), ((2, 3), (1, 1)), ((6, 3), (1, 0)), ((10,), (1,))]:
        ex = groups.build_expansion(s, z)
        assert len(ex.H) == 2 ** sum(z)
        assert len(ex.K) == len(ex.H) // 2
        assert ex.E.is_subgroup(ex.H) and ex.E.is_subgroup(ex.K)
        Q = ex.quotient()
        assert Q.group.order == 2 * int(np.prod(s))
        HK = sorted({Q.project(h) for h in ex.H})
        assert len(HK) == 2 and set(HK) <= set(Q.group.center())


def test_zero_type_vector_has_no_quotient():
    with pytest.raises(ValueError):
        groups.build_expansion((2, 3), (0, 0)).quotient()


def test_central_extension_of_gamma_is_cyclic():
    E = groups.central_extension(cocycles.gamma(6))
    E.check_axioms()
    assert E.order == 12
    assert max(E.element_order(g) for g in E.elements()) == 12


def test_central_extension_rejects_non_cocycle():
    M = np.ones((6, 6), dtype=np.int8)
    M[1, 2] = -1
    with pytest.raises(ValueError):
        groups.central_extension(cocycles.Cocycle(groups.cyclic(6), M))


def test_quotient_requires_normal_subgroup():
    D = groups.dihedral(3)
    with pytest.raises(ValueError):
        groups.quotient(D, [0, 3])
    Q = groups.quotient(D, [0, 1, 2])
    assert Q.group.order == 2


def test_range_checks():
    G = groups.cyclic(6)
    with pytest.raises(ValueError):
        G.mul(6, 0)
    with pytest.raises(ValueError):
        G.inv(-1)


@given(st.sampled_from(SMALL_GROUPS), st.data())
def test_associativity_sampled(G, data):
    g, h, k = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert G.mul(G.mul(g, h), k) == G.mul(g, G.mul(h, k))


def test_cyclic_product_isomorphism_by_order_profile():
    A = groups.abelian((2, 5))
    C = groups.cyclic(10)
    orders = lambda G: sorted(G.element_order(g) for g in G.elements())
    assert orders(A) == orders(C)
    assert list(itertools.islice(A.elements(), 3)) == [0, 1, 2]


def test_every_constructed_group_round_trips_through_its_spec():
    built = [
        groups.cyclic(10),
        groups.abelian((2, 3, 3)),
        groups.dihedral(5),
        groups.dicyclic(2),
        groups.build_expansion((2, 3), (1, 1)).E,
        groups.build_expansion((6, 3), (1, 0)).quotient().group,
        groups.direct_product(groups.cyclic(2), groups.cyclic(5)),
        groups.central_extension(cocycles.f_z((2, 3), (1, 0)) * cocycles.elementary_coboundary(groups.abelian((2, 3)), 2)),
    ]
    for G in built:
        H = groups.parse_group(G.spec)
        assert H.order == G.order
        assert np.array_equal(H.cayley(), G.cayley()), G.spec
