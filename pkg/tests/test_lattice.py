import math

import pytest
from hypothesis import given, settings, strategies as st

from hnnlinear import intmat
from hnnlinear.lattice import (
    FgAbelianGroup,
    Lattice,
    LatticeError,
    SubgroupHom,
    complement_of_saturated,
    complement_within,
    coordinates,
    element_order_mod,
    hnf,
    hom_preimage,
    index,
    invariant_factors,
    inverse_unimodular,
    is_saturated,
    member,
    reduce_mod,
    saturate,
    snf,
)
from hnnlinear.oracles import SpanOracle, box, index_oracle, preimage_pred


def vectors(m, n_max=3, bound=5):
    return st.lists(st.tuples(*[st.integers(-bound, bound)] * m), max_size=n_max)


@st.composite
def gens_pair(draw):
    m = draw(st.integers(1, 3))
    return m, draw(vectors(m)), draw(vectors(m))


def test_hnf_examples():
    assert Lattice.span([(2, 4), (6, 8)], 2).basis == ((2, 0), (0, 4))
    assert Lattice.span([(1, 0), (0, 1)], 2).basis == ((1, 0), (0, 1))
    z = Lattice.span([(0, 0)], 2)
    assert z.rank == 0 and z.basis == ()


def test_hnf_transform_is_unimodular():
    rows = [(2, 4, 1), (6, 8, 3), (4, 4, 2), (1, 1, 1)]
    lat, u = hnf(rows, 3)
    assert abs(intmat.det(u)) == 1
    prod = intmat.matmul(u, rows)
    assert prod[:lat.rank] == lat.basis
    assert all(not any(r) for r in prod[lat.rank:])


def test_canonical_form_shape():
    lat = Lattice.span([(3, 5, 7), (0, 4, 6), (0, 0, 9)], 3)
    for i, p in enumerate(lat.pivots):
        assert lat.basis[i][p] > 0
        for k in range(i):
            assert 0 <= lat.basis[k][p] < lat.basis[i][p]


def test_snf_examples():
    diag, left, right = snf([[2, 0], [0, 3]])
    assert diag == ((1, 0), (0, 6))
    assert intmat.matmul(intmat.matmul(left, [[2, 0], [0, 3]]), right) == diag
    assert snf([[1, 0], [0, 1]])[0] == ((1, 0), (0, 1))
    assert snf([[4]])[0] == ((4,),)


def test_snf_rectangular():
    m = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    diag, left, right = snf(m)
    assert intmat.matmul(intmat.matmul(left, m), right) == diag
    assert abs(intmat.det(left)) == 1 and abs(intmat.det(right)) == 1
    d = [diag[i][i] for i in range(3)]
    assert d == [2, 6, 12]


def test_member_examples():
    lat = Lattice.span([(2, 0), (0, 4)], 2)
    assert member(lat, (2, 4))
    assert not member(lat, (1, 0))
    assert member(Lattice.zero(2), (0, 0))


def test_sum_intersect_examples():
    a = Lattice.span([(2, 0), (0, 1)], 2)
    b = Lattice.span([(1, 1)], 2)
    assert (a & b).basis == ((2, 2),)
    assert (a + b).is_full
    with pytest.raises(LatticeError):
        _ = a + Lattice.zero(3)


def test_saturate_examples():
    assert saturate(Lattice.span([(2, 0), (0, 3)], 2)).is_full
    assert saturate(Lattice.span([(2, 4)], 2)).basis == ((1, 2),)
    assert saturate(Lattice.zero(2)).rank == 0


def test_index_examples():
    full = Lattice.full(2)
    assert index(full, Lattice.span([(2, 0), (0, 4)], 2)) == 8
    assert index(full, Lattice.span([(1, 0)], 2)) == math.inf
    with pytest.raises(LatticeError):
        index(Lattice.span([(2, 0)], 2), full)


def test_complement_examples():
    c = complement_of_saturated(Lattice.span([(1, 2)], 2))
    assert c.basis == ((0, 1),)
    with pytest.raises(LatticeError):
        complement_of_saturated(Lattice.span([(2, 0)], 2))
    outer = Lattice.span([(2, 0, 0), (0, 2, 0)], 3)
    inner = Lattice.span([(2, 2, 0)], 3)
    comp = complement_within(outer, inner)
    assert index(outer, inner + comp) == 1


def test_element_order():
    lat = Lattice.span([(2, 0), (0, 3)], 2)
    assert element_order_mod(lat, (1, 1)) == 6
    assert element_order_mod(Lattice.span([(1, 0)], 2), (0, 1)) is None


def test_torsion_invariants():
    assert FgAbelianGroup(2, Lattice.span([(2, 0), (0, 3)], 2)).torsion_invariants() == (6,)
    assert invariant_factors([[4, 0], [0, 6]]) == (2, 12)


def test_hom_image_preimage_inverse():
    A = Lattice.span([(2, 0)], 2)
    B = Lattice.span([(0, 3)], 2)
    h = SubgroupHom(A, B, ((0, 3),))
    assert h.problems() == []
    assert h.image(A) == B
    assert h.preimage(Lattice.span([(0, 6)], 2)) == Lattice.span([(4, 0)], 2)
    assert h.inverse().apply((0, 3)) == (2, 0)
    bad = SubgroupHom(A, Lattice.span([(0, 1)], 2), ((0, 3),))
    assert any("surjective" in p for p in bad.problems())


def test_hom_with_relations():
    L = Lattice.span([(0, 2)], 2)
    A = Lattice.span([(1, 0), (0, 2)], 2)
    B = Lattice.span([(1, 1), (0, 2)], 2)
    h = SubgroupHom(A, B, ((1, 1), (0, 0)), L)
    assert h.problems() == []
    assert h.apply((2, 0)) == (2, 0)  # 2(1,1) = (2,2) = (2,0) mod L
    assert h.kernel() == L


def test_inverse_unimodular():
    m = ((2, 1), (1, 1))
    assert intmat.matmul(m, inverse_unimodular(m)) == intmat.identity(2)


@settings(max_examples=150, deadline=None)
@given(gens_pair())
def test_operations_match_box_enumeration(data):
    m, g1, g2 = data
    l1, l2 = Lattice.span(g1, m), Lattice.span(g2, m)
    o1, o2, o12 = SpanOracle(g1, m), SpanOracle(g2, m), SpanOracle(g1 + g2, m)
    s, i, sat = l1 + l2, l1 & l2, saturate(l1)
    for v in box(m, 4):
        assert (v in l1) == (v in o1)
        assert (v in s) == (v in o12)
        assert (v in i) == (v in o1 and v in o2)
        assert (v in sat) == o1.in_rational_span(v)
    assert index(s, l1) == index_oracle(g1 + g2, g1, m)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.just(m), vectors(m), vectors(m), vectors(m))))
def test_preimage_matches_box_enumeration(data):
    m, a, b, t = data
    A = Lattice.span(a, m)
    # an injective map: images of A's basis under a fixed unimodular shear
    shear = [[1 if i == j else (1 if j == i + 1 else 0) for j in range(m)] for i in range(m)]
    images = tuple(intmat.vecmat(r, shear) for r in A.basis)
    h = SubgroupHom(A, Lattice.span(images, m), images)
    T = Lattice.span(t, m)
    pre = hom_preimage(h, T)
    pred = preimage_pred(A.basis, images, SpanOracle(t, m), m)
    for v in box(m, 4):
        assert (v in pre) == pred(v)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.just(m), vectors(m, 3, 6))))
def test_hnf_is_canonical(data):
    m, g = data
    lat = Lattice.span(g, m)
    shuffled = Lattice.span(list(reversed(g)) + [intmat.add(x, y) for x, y in zip(g, g[1:])], m)
    assert lat == shuffled
    for v in g:
        assert reduce_mod(lat, v) == (0,) * m
        assert intmat.vecmat(coordinates(lat, v), lat.basis, m) == tuple(v)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.just(m), vectors(m))))
def test_complement_property(data):
    m, g = data
    sat = saturate(Lattice.span(g, m))
    assert is_saturated(sat)
    comp = complement_of_saturated(sat)
    stacked = sat.basis + comp.basis
    assert len(stacked) == m and abs(intmat.det(stacked)) == 1
