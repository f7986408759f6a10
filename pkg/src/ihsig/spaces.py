"""Named triangulations used throughout the tests, demos and CLI."""
from __future__ import annotations

from itertools import combinations
from typing import Dict, List

from .simplicial import ProductComplex, SimplicialComplex
from .stratification import (ProductStratified, StratifiedComplex, cone_space, disjoint_union_space,
                             suspension_space, trivial)

# 9-vertex minimal triangulation of CP^2 (Kuehnel-Banchoff), vertices shifted to start at 0.
_CP2_9 = [
    (1, 2, 4, 5, 6), (2, 3, 5, 6, 4), (3, 1, 6, 4, 5), (1, 2, 4, 5, 9), (2, 3, 5, 6, 7), (3, 1, 6, 4, 8),
    (2, 3, 6, 4, 9), (3, 1, 4, 5, 7), (1, 2, 5, 6, 8), (3, 1, 5, 6, 9), (1, 2, 6, 4, 7), (2, 3, 4, 5, 8),
    (4, 5, 7, 8, 9), (5, 6, 8, 9, 7), (6, 4, 9, 7, 8), (4, 5, 7, 8, 3), (5, 6, 8, 9, 1), (6, 4, 9, 7, 2),
    (5, 6, 9, 7, 3), (6, 4, 7, 8, 1), (4, 5, 8, 9, 2), (6, 4, 8, 9, 3), (4, 5, 9, 7, 1), (5, 6, 7, 8, 2),
    (7, 8, 1, 2, 3), (8, 9, 2, 3, 1), (9, 7, 3, 1, 2), (7, 8, 1, 2, 6), (8, 9, 2, 3, 4), (9, 7, 3, 1, 5),
    (8, 9, 3, 1, 6), (9, 7, 1, 2, 4), (7, 8, 2, 3, 5), (9, 7, 2, 3, 6), (7, 8, 3, 1, 4), (8, 9, 1, 2, 5),
]

_TORUS_7 = [(0, 1, 2), (1, 2, 4), (1, 3, 4), (1, 3, 6), (0, 1, 5), (1, 5, 6), (2, 3, 5), (2, 4, 5),
            (2, 3, 6), (0, 2, 6), (0, 3, 4), (0, 3, 5), (4, 5, 6), (0, 4, 6)]

_RP2_6 = [(0, 1, 2), (0, 2, 3), (0, 1, 5), (0, 4, 5), (0, 3, 4), (1, 2, 4), (1, 3, 4), (1, 3, 5),
          (2, 3, 5), (2, 4, 5)]


def simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex([tuple(range(n + 1))], name=f"D{n}")


def boundary_of_simplex(n: int) -> SimplicialComplex:
    """``\\partial\\Delta^n``, a sphere of dimension ``n-1``."""
    return SimplicialComplex(combinations(range(n + 1), n), name=f"S{n - 1}")


def circle(m: int = 3) -> SimplicialComplex:
    return SimplicialComplex([(i, (i + 1) % m) for i in range(m)], name=f"C{m}")


def torus() -> SimplicialComplex:
    return SimplicialComplex(_TORUS_7, name="T2")


def rp2() -> SimplicialComplex:
    return SimplicialComplex(_RP2_6, name="RP2")


def cp2() -> SimplicialComplex:
    return SimplicialComplex([tuple(v - 1 for v in s) for s in _CP2_9], name="CP2")


def interval() -> SimplicialComplex:
    return SimplicialComplex([(0, 1)], name="I")


# -- stratified spaces --------------------------------------------------------------

def sphere_space(d: int) -> StratifiedComplex:
    return trivial(boundary_of_simplex(d + 1))


def torus_space() -> StratifiedComplex:
    return trivial(torus())


def rp2_space() -> StratifiedComplex:
    return trivial(rp2())


def cp2_space() -> StratifiedComplex:
    """CP^2 oriented so that its signature is +1 (the least top simplex is negative)."""
    s = trivial(cp2())
    return s.with_orientation(s.orientation.flipped())


def suspended(space: StratifiedComplex) -> StratifiedComplex:
    """Suspension with both suspension points as the 0-skeleton."""
    return suspension_space(space)


def coned(space: StratifiedComplex) -> StratifiedComplex:
    return cone_space(space)


def pinched_torus() -> StratifiedComplex:
    """Torus with a meridian circle collapsed to a point: a 2-dimensional Witt space."""
    # cylinder S^1 x I coned off at both ends, identified cone points
    c = circle(3)
    cyl = ProductComplex(c, interval())
    facets = list(cyl.facets)
    apex = cyl.vertex_count
    for end in (0, 1):
        for i in range(3):
            a, b = sorted(((i * 2) + end, (((i + 1) % 3) * 2) + end))
            facets.append((a, b, apex))
    k = SimplicialComplex(facets, name="pinched T2")
    return StratifiedComplex(k, {0: [(apex,)]}, name="pinched T2")


def two_spheres_at_a_point() -> StratifiedComplex:
    """Wedge of two tetrahedral spheres with the wedge point as ``X^0``."""
    a = list(combinations(range(4), 3))
    b = [tuple(v if v == 0 else v + 3 for v in s) for s in a]
    k = SimplicialComplex(a + b, name="S2 v S2")
    return StratifiedComplex(k, {0: [(0,)]}, name="S2 v S2")


def sphere_with_cone_points(d: int = 2) -> StratifiedComplex:
    """Suspension of ``\\partial\\Delta^d``: a ``d``-sphere with the two poles declared ``X^0``."""
    return suspension_space(sphere_space(d - 1))


def product(x: StratifiedComplex, y: StratifiedComplex) -> ProductStratified:
    return ProductStratified(x, y)


def cylinder(x: StratifiedComplex) -> StratifiedComplex:
    """``X x [0,1]`` as a boundary pseudomanifold with product orientation."""
    ps = ProductStratified(x, trivial(interval(), boundary=[(0,), (1,)]))
    return materialize(ps)


def materialize(ps: ProductStratified) -> StratifiedComplex:
    """Generic stratified complex equal to a product (levels precomputed)."""
    gens: Dict[int, List] = {}
    for s in ps.singular_simplices():
        gens.setdefault(ps.level(s), []).append(s)
    k = SimplicialComplex(ps.complex.facets, ps.complex.vertex_count, name=ps.name)
    return StratifiedComplex(k, gens, ps.boundary_faces, ps.orientation, name=ps.name)


CATALOG = {
    "S1": lambda: trivial(circle(3)),
    "S2": lambda: sphere_space(2),
    "S3": lambda: sphere_space(3),
    "S4": lambda: sphere_space(4),
    "T2": torus_space,
    "RP2": rp2_space,
    "CP2": cp2_space,
    "sus-T2": lambda: suspended(torus_space()),
    "sus-S3": lambda: suspended(sphere_space(3)),
    "cone-T2": lambda: coned(torus_space()),
    "cone-CP2": lambda: coned(cp2_space()),
    "pinched-T2": pinched_torus,
    "S2vS2": two_spheres_at_a_point,
}


def named(name: str) -> StratifiedComplex:
    try:
        return CATALOG[name]()
    except KeyError:
        raise KeyError(f"unknown space {name!r}; known: {', '.join(sorted(CATALOG))}") from None


__all__ = ["simplex", "boundary_of_simplex", "circle", "torus", "rp2", "cp2", "interval", "sphere_space",
           "torus_space", "rp2_space", "cp2_space", "suspended", "coned", "pinched_torus",
           "two_spheres_at_a_point", "sphere_with_cone_points", "product", "cylinder", "materialize",
           "disjoint_union_space", "CATALOG", "named"]
