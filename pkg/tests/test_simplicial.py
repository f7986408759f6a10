from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ihsig import spaces
from ihsig.algebra import QQ, FieldSpec
from ihsig.simplicial import (Chain, NonOrientableError, ProductComplex, SimplicialComplex, Subdivision,
                              boundary, cone, disjoint_union, faces_of, monotone_paths, orient_top,
                              simplex_chain, suspension)

COMPLEXES = {
    "S2": spaces.boundary_of_simplex(3),
    "T2": spaces.torus(),
    "RP2": spaces.rp2(),
    "CP2": spaces.cp2(),
    "C3": spaces.circle(3),
}


def test_faces_follow_omission_order():
    assert faces_of((0, 1, 2)) == [(1, 2), (0, 2), (0, 1)]


@pytest.mark.parametrize("name", sorted(COMPLEXES))
def test_f_vectors_and_euler(name):
    k = COMPLEXES[name]
    fs = oracles.faces(k.facets)
    assert k.f_vector() == [len(fs[i]) for i in range(len(fs))]
    b = oracles.betti(k.facets)
    assert k.euler_characteristic() == sum((-1) ** i * x for i, x in enumerate(b))


def test_known_triangulations():
    assert spaces.torus().f_vector() == [7, 21, 14]
    assert spaces.rp2().f_vector() == [6, 15, 10]
    assert spaces.cp2().f_vector() == [9, 36, 84, 90, 36]


@pytest.mark.parametrize("name", sorted(COMPLEXES))
def test_boundary_squares_to_zero(name):
    k = COMPLEXES[name]
    for d in range(2, k.dim + 1):
        for s in k.simplices(d):
            assert boundary(boundary(simplex_chain(s))).is_zero()


def test_cone_and_suspension_shapes():
    c = spaces.circle(3)
    assert cone(c).f_vector() == [4, 6, 3]
    assert suspension(c).f_vector() == [5, 9, 6]
    assert disjoint_union(c, c).vertex_count == 6
    assert len(disjoint_union(c, c).connected_components()) == 2


def test_monotone_paths_count_and_signs():
    from math import comb
    for p in range(3):
        for q in range(3):
            paths = monotone_paths(p, q)
            assert len(paths) == comb(p + q, p)
            assert all(sign in (1, -1) for _, sign in paths)


def test_product_complex_vertices():
    a, b = spaces.circle(3), spaces.interval()
    pc = ProductComplex(a, b)
    assert pc.vertex_count == 6
    assert pc.euler_characteristic() == 0
    for s in pc.top_simplices():
        x, y = pc.project(s)
        assert x in a and y in b


@pytest.mark.parametrize("name", ["S2", "T2", "C3"])
def test_subdivision_preserves_homology(name):
    k = COMPLEXES[name]
    sd = Subdivision(k)
    assert oracles.betti(sd.complex.facets) == oracles.betti(k.facets)
    assert sd.complex.f_vector()[-1] == k.f_vector()[-1] * factorial(k.dim + 1)


def test_subdivision_carrier_is_chain_map():
    k = spaces.torus()
    sd = Subdivision(k)
    for s in k.simplices(2) + k.simplices(1):
        c = simplex_chain(s)
        assert sd.carrier(boundary(c)) == boundary(sd.carrier(c))


def test_orientation_orientable_and_not():
    o = orient_top(spaces.torus())
    gamma = o.chain()
    assert boundary(gamma).is_zero()
    assert o.flipped().chain() == -gamma
    with pytest.raises(NonOrientableError) as err:
        orient_top(spaces.rp2())
    assert len(err.value.cycle) > 0


def test_orientation_respects_prescription():
    k = spaces.boundary_of_simplex(3)
    first = k.top_simplices()[0]
    assert orient_top(k, prescribed={first: -1}).signs[first] == -1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=6),
       st.sampled_from([0, 2, 3]))
def test_random_complex_boundary_and_rank(facets, p):
    k = SimplicialComplex(facets)
    fld = FieldSpec.prime(p) if p else QQ
    for d in range(1, k.dim):
        prod = _compose(k.boundary_matrix(d, fld), k.boundary_matrix(d + 1, fld))
        assert all(not v for v in prod)
    b = oracles.betti(k.facets, p)
    assert sum((-1) ** i * x for i, x in enumerate(b)) == k.euler_characteristic()


def _compose(a, b):
    return [a.apply(col) for col in b.columns]


def test_chain_arithmetic():
    a = Chain(1, {(0, 1): Fraction(2)})
    b = Chain(1, {(0, 1): Fraction(-2), (1, 2): Fraction(1)})
    assert (a + b).coefficients == {(1, 2): Fraction(1)}
    assert (a - a).is_zero()
    assert a.scaled(Fraction(1, 2)).coefficients == {(0, 1): Fraction(1)}
