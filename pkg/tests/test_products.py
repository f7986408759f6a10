import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ihsig import spaces
from ihsig.algebra import QQ
from ihsig.chains import IntersectionChainComplex, build_complex
from ihsig.products import (KunnethError, cochain_cross, cross, cup_evaluate, diagonal_chain, kunneth_basis,
                            kunneth_decompose)
from ihsig.simplicial import Chain, ProductComplex, SimplicialComplex, boundary, simplex_chain
from ihsig.stratification import ProductStratified, classical, product_perversity


def leibniz_holds(xi, eta, pc):
    lhs = boundary(cross(xi, eta, pc))
    sign = -1 if xi.degree % 2 else 1
    rhs = cross(boundary(xi), eta, pc) + cross(xi, boundary(eta), pc).scaled(sign)
    return lhs == rhs


def test_vertex_and_edge_crosses():
    pc = ProductComplex(spaces.simplex(1), spaces.simplex(1))
    v = simplex_chain((0,))
    e = simplex_chain((0, 1))
    assert cross(v, v, pc).coefficients == {(pc.vertex(0, 0),): 1}
    assert cross(e, v, pc).coefficients == {(pc.vertex(0, 0), pc.vertex(1, 0)): 1}
    ee = cross(e, e, pc)
    assert len(ee.coefficients) == 2
    assert sorted(ee.coefficients.values()) == [-1, 1]
    assert leibniz_holds(e, e, pc)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 10_000))
def test_shuffle_product_leibniz(p, q, seed):
    rng = random.Random(seed)
    a, b = spaces.simplex(3), spaces.simplex(3)
    pc = ProductComplex(a, b)
    xi = Chain(p, {s: Fraction(rng.randint(-2, 2)) for s in a.simplices(p)})
    eta = Chain(q, {s: Fraction(rng.randint(-2, 2)) for s in b.simplices(q)})
    assert leibniz_holds(xi, eta, pc)


def test_diagonal_is_chain_map():
    k = spaces.torus()
    pc = ProductComplex(k, k)
    for s in k.simplices(2) + k.simplices(1):
        c = simplex_chain(s)
        assert diagonal_chain(boundary(c), pc) == boundary(diagonal_chain(c, pc))
        assert all(w in pc for w in diagonal_chain(c, pc).coefficients)


def test_cross_of_fundamental_cycles_is_cycle():
    x = spaces.torus_space()
    y = spaces.sphere_space(2)
    ps = ProductStratified(x, y)
    w = cross(x.fundamental_chain(), y.fundamental_chain(), ps.complex)
    assert boundary(w).is_zero()
    assert set(w.coefficients) == set(ps.complex.top_simplices())
    assert w == ps.orientation.chain()


def test_alexander_whitney_pairing_is_product_of_evaluations():
    k = spaces.boundary_of_simplex(2)
    pc = ProductComplex(k, k)
    alpha = {(0, 1): 1, (1, 2): 2}
    beta = {(0,): 3, (2,): 5}
    f = cochain_cross(alpha, 1, beta, 0, pc)
    for s in k.simplices(1):
        for t in k.simplices(0):
            got = sum(c * f(w) for w, c in cross(simplex_chain(s), simplex_chain(t), pc).coefficients.items())
            assert got == alpha.get(s, 0) * beta.get(t, 0)


def test_diagonal_pairs_with_cup_product():
    # < 1 x b , d(Gamma) > = (1 cup b)(Gamma) = b(Gamma), compared with an independent cup oracle
    facets = spaces.boundary_of_simplex(3).facets
    s = spaces.sphere_space(2)
    pc = ProductComplex(s.complex, s.complex)
    gamma = s.fundamental_chain()
    one = {v: 1 for v in s.complex.simplices(0)}
    top = s.complex.top_simplices()[0]
    beta = {top: 1}
    f = cochain_cross(one, 0, beta, 2, pc)
    diag = diagonal_chain(gamma, pc)
    lhs = sum(c * f(w) for w, c in diag.coefficients.items())
    assert lhs == cup_evaluate(one, 0, beta, 2, gamma) == gamma.coefficients[top]
    ocycle = oracles.fundamental_cycle(facets, gamma.coefficients[min(gamma.coefficients)])
    assert sum(c * one.get(t[:1], 0) * beta.get(t, 0) for t, c in ocycle.items()) == lhs


KUNNETH_CASES = [
    ("S2xS2", spaces.sphere_space(2), spaces.sphere_space(2)),
    ("cone(C3)xS2", spaces.coned(spaces.named("S1")), spaces.sphere_space(2)),
    ("sus(T2)xS2", spaces.suspended(spaces.torus_space()), spaces.sphere_space(2)),
]


@pytest.mark.parametrize("label,x,y", KUNNETH_CASES, ids=[c[0] for c in KUNNETH_CASES])
@pytest.mark.parametrize("pq", [("0", "0"), ("m", "n"), ("n", "n")])
def test_kunneth_rank_identity(label, x, y, pq):
    p, q = classical(pq[0], x), classical(pq[1], y)
    ps = ProductStratified(x, y)
    Q = product_perversity(p, q, x, y, ps)
    kb = kunneth_basis(build_complex(x, p, QQ), build_complex(y, q, QQ), IntersectionChainComplex(ps, Q, QQ))
    assert kb.rank_identity and all(kb.independent.values())


def test_s2_x_s2_ranks():
    x = spaces.sphere_space(2)
    ps = ProductStratified(x, x)
    z = classical("0", x)
    kb = kunneth_basis(build_complex(x, z, QQ), build_complex(x, z, QQ),
                       IntersectionChainComplex(ps, product_perversity(z, z, x, x, ps), QQ))
    assert [kb.actual[k] for k in range(5)] == [1, 0, 2, 0, 1]
    assert oracles.betti(ps.complex.facets) == [1, 0, 2, 0, 1]


def test_kunneth_decomposition_of_diagonal():
    s = spaces.sphere_space(2)
    ps = ProductStratified(s, s)
    z = classical("0", s)
    cx = build_complex(s, z, QQ)
    cxy = IntersectionChainComplex(ps, product_perversity(z, z, s, s, ps), QQ)
    kb = kunneth_basis(cx, cx, cxy)
    d = diagonal_chain(s.fundamental_chain(), ps.complex)
    dec = kunneth_decompose(cxy.vector_of(d), 2, kb, cxy)
    assert set(k[0] for k in dec.coefficients) == {0, 2}
    rebuilt = {}
    for c in kb.classes[2]:
        coef = dec.coefficients.get((c.degree_x, c.index_x, c.index_y), 0)
        for key, v in c.vector.items():
            rebuilt[key] = rebuilt.get(key, 0) + coef * v
    diff = {k: v for k, v in cxy.vector_of(d).items()}
    for key, v in rebuilt.items():
        diff[key] = diff.get(key, 0) - v
    diff = {k: v for k, v in diff.items() if v}
    assert cxy.boundary_space(2).contains(diff)


def test_kunneth_rejects_non_product_target():
    s = spaces.sphere_space(2)
    c = build_complex(s, classical("0", s), QQ)
    with pytest.raises(TypeError):
        kunneth_basis(c, c, c)
