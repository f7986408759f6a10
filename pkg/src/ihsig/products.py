"""Shuffle cross product, the geometric diagonal, and Kunneth decompositions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import QQ, EchelonBasis, FieldSpec, Vector
from .chains import IntersectionChainComplex
from .simplicial import Chain, ProductComplex, Simplex, monotone_paths

_PATHS: Dict[Tuple[int, int], list] = {}


def _paths(p: int, q: int):
    got = _PATHS.get((p, q))
    if got is None:
        got = _PATHS[(p, q)] = monotone_paths(p, q)
    return got


def cross_simplices(s: Simplex, t: Simplex, stride: int) -> Dict[Simplex, int]:
    """Signed staircase simplices of ``s x t``."""
    return {tuple(s[i] * stride + t[j] for i, j in pts): sign
            for pts, sign in _paths(len(s) - 1, len(t) - 1)}


def cross(xi: Chain, eta: Chain, product: ProductComplex) -> Chain:
    """Eilenberg-Zilber shuffle product; satisfies the Koszul Leibniz rule."""
    fld = xi.field
    m = product.stride
    out: Dict[Simplex, object] = {}
    for s, a in xi.coefficients.items():
        for t, b in eta.coefficients.items():
            ab = fld.mul(a, b)
            for w, e in cross_simplices(s, t, m).items():
                out[w] = fld.add(out.get(w, 0), ab if e > 0 else fld.neg(ab))
    return Chain(xi.degree + eta.degree, out, fld)


def diagonal_chain(xi: Chain, product: ProductComplex) -> Chain:
    """Each simplex ``[v0..vk]`` goes to ``[(v0,v0)..(vk,vk)]``."""
    a, b = product.factors
    if a.vertex_count != b.vertex_count:
        raise ValueError("diagonal needs a product of a complex with itself")
    m = product.stride
    return Chain(xi.degree, {tuple(v * m + v for v in s): c for s, c in xi.coefficients.items()}, xi.field)


def cochain_cross(alpha: Dict[Simplex, object], p: int, beta: Dict[Simplex, object], q: int,
                  product: ProductComplex, fld: FieldSpec = QQ):
    """Alexander-Whitney cross product ``(a x b)(w) = a(p1 front_p w) * b(p2 back_q w)`` as a function."""
    m = product.stride

    def value(w: Simplex):
        front = tuple(v // m for v in w[:p + 1])
        back = tuple(v % m for v in w[p:])
        if len(set(front)) < p + 1 or len(set(back)) < q + 1:
            return 0
        x = alpha.get(front, 0)
        if not x:
            return 0
        y = beta.get(back, 0)
        return fld.mul(x, y) if y else 0

    return value


def cup_evaluate(alpha: Dict[Simplex, object], p: int, beta: Dict[Simplex, object], q: int,
                 chain: Chain):
    """``(alpha cup beta)(chain)`` with front ``p``-face and back ``q``-face."""
    fld = chain.field
    total = fld(0)
    for s, c in chain.coefficients.items():
        x = alpha.get(s[:p + 1], 0)
        if not x:
            continue
        y = beta.get(s[p:], 0)
        if y:
            total = fld.add(total, fld.mul(c, fld.mul(x, y)))
    return total


@dataclass
class KunnethClass:
    degree_x: int
    index_x: int
    degree_y: int
    index_y: int
    vector: Vector

    @property
    def label(self) -> str:
        return f"y{self.degree_x}.{self.index_x} x z{self.degree_y}.{self.index_y}"


@dataclass
class KunnethBasis:
    classes: Dict[int, List[KunnethClass]]
    expected: Dict[int, int]
    actual: Dict[int, int]
    independent: Dict[int, bool]

    @property
    def rank_identity(self) -> bool:
        return all(self.expected[k] == self.actual[k] for k in self.expected)

    def as_dict(self) -> dict:
        return {"expected": self.expected, "actual": self.actual, "independent": self.independent,
                "rank_identity": self.rank_identity}


class KunnethError(ArithmeticError):
    pass


def kunneth_basis(cx: IntersectionChainComplex, cy: IntersectionChainComplex,
                  cxy: IntersectionChainComplex, degrees: Optional[Sequence[int]] = None,
                  strict: bool = True) -> KunnethBasis:
    """Cross products of homology basis cycles, with the Kunneth rank identity."""
    prod = cxy.space.complex
    if not isinstance(prod, ProductComplex):
        raise TypeError("target complex must live on a staircase product")
    degrees = range(cxy.n + 1) if degrees is None else degrees
    classes: Dict[int, List[KunnethClass]] = {}
    expected, actual, indep = {}, {}, {}
    for k in degrees:
        cls = []
        for i in range(max(0, k - cy.n), min(k, cx.n) + 1):
            j = k - i
            ys = cx.homology_basis(i)
            zs = cy.homology_basis(j)
            for a, y in enumerate(ys):
                yc = cx.chain_of(i, y)
                for b, z in enumerate(zs):
                    w = cross(yc, cy.chain_of(j, z), prod)
                    vec = cxy.vector_of(w)
                    if len(vec) != len(w.coefficients) or not cxy.contains(k, vec):
                        raise KunnethError(f"cross product {i},{a} x {j},{b} is not an allowable chain")
                    if not cxy.is_cycle(k, vec):
                        raise KunnethError(f"cross product {i},{a} x {j},{b} is not a cycle")
                    cls.append(KunnethClass(i, a, j, b, vec))
        classes[k] = cls
        expected[k] = len(cls)
        actual[k] = cxy.betti(k)
        eb = cxy.boundary_space(k)
        base = eb.rank
        for c in cls:
            eb.add(c.vector)
        indep[k] = eb.rank - base == len(cls)
    kb = KunnethBasis(classes, expected, actual, indep)
    if strict and (not kb.rank_identity or not all(indep.values())):
        raise KunnethError(f"Kunneth rank identity fails: {kb.as_dict()}")
    return kb


@dataclass
class KunnethDecomposition:
    degree: int
    coefficients: Dict[Tuple[int, int, int], object]  # (degree_x, index_x, index_y) -> coefficient

    def block(self, degree_x: int, rows: int, cols: int) -> List[List]:
        return [[self.coefficients.get((degree_x, a, b), 0) for b in range(cols)] for a in range(rows)]

    def is_zero(self) -> bool:
        return not any(self.coefficients.values())


def kunneth_decompose(cycle: Vector, degree: int, basis: KunnethBasis,
                      cxy: IntersectionChainComplex) -> KunnethDecomposition:
    """Exact coordinates of a cycle's class over the cross-product basis."""
    eb = EchelonBasis(cxy.field, track=True)
    for j, c in enumerate(cxy.columns(degree + 1)):
        if c:
            eb.add(c, tag=("b", j))
    cls = basis.classes[degree]
    for t, c in enumerate(cls):
        eb.add(c.vector, tag=("k", t))
    if not cycle:
        return KunnethDecomposition(degree, {})
    combo = eb.express(cycle)
    if combo is None:
        raise KunnethError("class is not in the span of the cross-product basis")
    coeffs = {}
    for t, c in enumerate(cls):
        x = combo.get(("k", t), 0)
        if x:
            coeffs[(c.degree_x, c.index_x, c.index_y)] = x
    return KunnethDecomposition(degree, coeffs)
