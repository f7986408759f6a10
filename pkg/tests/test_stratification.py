import random

import pytest
from hypothesis import given, settings, strategies as st

from ihsig import spaces
from ihsig.simplicial import SimplicialComplex
from ihsig.stratification import (Perversity, ProductStratified, StratifiedComplex, classical, complementary,
                                  cone_space, ensure_full, perversity, product_perversity, random_perversity,
                                  subdivide, suspension_space, trivial, validate_pseudomanifold)

SINGULAR = {
    "sus-T2": lambda: spaces.suspended(spaces.torus_space()),
    "cone-T2": lambda: spaces.coned(spaces.torus_space()),
    "pinched-T2": spaces.pinched_torus,
    "S2vS2": spaces.two_spheres_at_a_point,
    "sus-S3": lambda: spaces.suspended(spaces.sphere_space(3)),
}


def test_sphere_validates():
    rep = validate_pseudomanifold(spaces.sphere_space(2))
    assert rep.passed and not rep.failures()


def test_single_triangle_fails_codim_one():
    rep = validate_pseudomanifold(trivial(SimplicialComplex([(0, 1, 2)])))
    assert not rep.checks["codim_one_faces"]
    assert "codim_one_faces" in rep.certificates


def test_two_triangles_at_a_vertex():
    k = SimplicialComplex([(0, 1, 2), (0, 3, 4)])
    open_edges = [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]
    # closed version: two 2-spheres sharing a vertex declared X^0
    assert validate_pseudomanifold(spaces.two_spheres_at_a_point()).passed
    literal = validate_pseudomanifold(StratifiedComplex(k, {0: [(0,)]}))
    assert not literal.checks["codim_one_faces"]
    with_boundary = validate_pseudomanifold(StratifiedComplex(k, {0: [(0,)]}, boundary=open_edges))
    assert with_boundary.checks["codim_one_faces"]
    assert not with_boundary.checks["boundary_pseudomanifold"]  # pinched boundary circle pair


def test_impure_complex_fails():
    rep = validate_pseudomanifold(trivial(SimplicialComplex([(0, 1, 2), (2, 3)])))
    assert not rep.checks["purity"]


def test_skeleton_dimension_mismatch_fails():
    k = spaces.boundary_of_simplex(3)
    rep = validate_pseudomanifold(StratifiedComplex(k, {1: [(0,)]}))
    assert not rep.checks["skeleta_nested_closed"]


@pytest.mark.parametrize("name", sorted(SINGULAR))
def test_singular_examples_validate(name):
    s = SINGULAR[name]()
    assert validate_pseudomanifold(s).passed
    assert all(st.is_singular == (st.codim > 0) for st in s.strata)


def test_suspension_strata():
    s = spaces.suspended(spaces.torus_space())
    sing = s.singular_strata()
    assert [st.codim for st in sing] == [3, 3]
    assert len(s.strata) == 3


def test_classical_values():
    s = spaces.suspended(spaces.torus_space())  # two codim-3 points
    n, m = classical("n", s), classical("m", s)
    for st in s.singular_strata():
        assert n(st.id) == 1 and m(st.id) == 0
        assert classical("t", s)(st.id) == 1
        assert classical("0", s)(st.id) == 0
    assert complementary(m, s) == Perversity(n.values, complementary(m, s).name)


def test_even_codim_middle_perversities_agree():
    s = spaces.suspended(spaces.sphere_space(3))  # codim 4 points
    assert classical("n", s).as_dict() == classical("m", s).as_dict()
    assert all(v == 1 for k, v in classical("n", s).as_dict().items() if s.stratum(k).is_singular)
    assert all(complementary(classical("0", s), s)(st.id) == 2 for st in s.singular_strata())


def test_regular_strata_must_be_zero():
    s = spaces.pinched_torus()
    reg = next(st for st in s.strata if not st.is_singular)
    with pytest.raises(ValueError):
        perversity({reg.id: 1}, s)


def test_unknown_classical_name():
    with pytest.raises(ValueError):
        classical("middle", spaces.sphere_space(2))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(SINGULAR)), st.integers(0, 10_000))
def test_complement_is_involution(name, seed):
    s = SINGULAR[name]()
    p = random_perversity(s, random.Random(seed))
    assert complementary(complementary(p, s), s).as_dict() == p.as_dict()


@pytest.mark.parametrize("name", sorted(SINGULAR))
def test_lower_middle_below_upper_middle(name):
    s = SINGULAR[name]()
    assert classical("m", s) <= classical("n", s)
    assert classical("0", s) <= classical("m", s)
    assert classical("n", s) <= classical("t", s)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_product_perversity_dominates_sum(seed):
    rng = random.Random(seed)
    x = spaces.suspended(spaces.torus_space())
    y = spaces.pinched_torus()
    p, q = random_perversity(x, rng), random_perversity(y, rng)
    prod = ProductStratified(x, y)
    Q = product_perversity(p, q, x, y, prod)
    for a in x.strata:
        for b in y.strata:
            v = Q((a.id, b.id))
            assert v >= p(a.id) + q(b.id)
            if not a.is_singular and not b.is_singular:
                assert v == 0


def test_product_perversity_case_table():
    x = spaces.suspended(spaces.torus_space())
    y = spaces.sphere_space(2)
    m = classical("m", x)
    Q = product_perversity(m, classical("n", y), x, y)
    sing = x.singular_strata()[0]
    reg = y.strata[0]
    assert Q((sing.id, reg.id)) == 0


def test_product_strata_codims_add():
    x = spaces.suspended(spaces.torus_space())
    y = spaces.pinched_torus()
    prod = ProductStratified(x, y)
    codim = {st.id: st.codim for st in prod.strata}
    for a in x.strata:
        for b in y.strata:
            assert codim[(a.id, b.id)] == a.codim + b.codim


def test_cone_orientation_and_boundary():
    c = cone_space(spaces.sphere_space(2))
    assert c.has_boundary() and c.is_orientable()
    b = c.boundary_space()
    assert b.complex.f_vector() == [4, 6, 4]
    assert validate_pseudomanifold(c).passed


def test_subdivision_keeps_strata_and_orientation():
    s = spaces.suspended(spaces.torus_space())
    sd = subdivide(s)
    assert sorted(st.codim for st in sd.strata) == sorted(st.codim for st in s.strata)
    assert validate_pseudomanifold(sd).passed
    assert sd.is_orientable()


def test_ensure_full_noop_on_full_space():
    s = spaces.sphere_space(2)
    out, count = ensure_full(s)
    assert count == 0 and out is s


def test_ensure_full_subdivides_when_needed():
    # X^0 = two adjacent vertices: the edge between them makes X^0 non-full
    s = StratifiedComplex(spaces.boundary_of_simplex(3), {0: [(0,), (1,)]})
    assert not s.is_full()
    out, count = ensure_full(s)
    assert count >= 1 and out.is_full()
