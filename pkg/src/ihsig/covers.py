"""Finite regular covers from group-valued edge cocycles.

A cover vertex ``(v, h)`` is encoded as ``v * |G| + h``; since distinct
vertices of a lifted simplex lie over distinct base vertices, lifting and
deck transformations preserve vertex order and hence orientation signs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import QQ, EchelonBasis, FieldSpec, Vector, axpy, column_rank, kernel_of_columns
from .chains import IntersectionChainComplex, homology_ranks
from .simplicial import Orientation, Simplex, SimplicialComplex, faces_of
from .stratification import Perversity, StratifiedComplex, complementary


class GroupAxiomError(ValueError):
    pass


class CocycleError(ValueError):
    def __init__(self, message: str, triangle: Tuple[int, int, int] = ()):
        super().__init__(message)
        self.triangle = triangle


class OrientationRequired(ValueError):
    pass


class FiniteGroup:
    """Group on ``0..order-1`` given by a multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = ""):
        self.table = [list(map(int, row)) for row in table]
        self.order = len(self.table)
        self.name = name or f"G{self.order}"
        m = self.order
        if m == 0:
            raise GroupAxiomError("empty group")
        for i, row in enumerate(self.table):
            if len(row) != m:
                raise GroupAxiomError(f"row {i} has {len(row)} entries, expected {m}")
            for x in row:
                if not 0 <= x < m:
                    raise GroupAxiomError(f"row {i}: entry {x} out of range")
        t = self.table
        ids = [e for e in range(m) if all(t[e][g] == g and t[g][e] == g for g in range(m))]
        if not ids:
            raise GroupAxiomError("no identity element")
        self.identity = ids[0]
        for a, b, c in iproduct(range(m), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupAxiomError(f"associativity fails for ({a}, {b}, {c})")
        inv = []
        for g in range(m):
            hit = [h for h in range(m) if t[g][h] == self.identity]
            if not hit or t[hit[0]][g] != self.identity:
                raise GroupAxiomError(f"element {g} has no inverse")
            inv.append(hit[0])
        self.inverse = inv

    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroup":
        return cls([[(a + b) % m for b in range(m)] for a in range(m)], name=f"Z/{m}")

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls([[0]], name="1")

    @classmethod
    def symmetric3(cls) -> "FiniteGroup":
        from itertools import permutations
        perms = list(permutations(range(3)))
        idx = {p: i for i, p in enumerate(perms)}
        table = [[idx[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
        return cls(table, name="S3")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def involution(self, x: Mapping[int, object]) -> Dict[int, object]:
        """The standard involution of ``F[G]``: ``sum a_g g -> sum a_g g^-1``."""
        return {self.inverse[g]: a for g, a in x.items()}


class DeckLabeling:
    """Group element on each edge ``u < v``; unlisted edges carry the identity."""

    def __init__(self, group: FiniteGroup, labels: Optional[Mapping[Tuple[int, int], int]] = None):
        self.group = group
        self.labels: Dict[Tuple[int, int], int] = {}
        for (u, v), g in (labels or {}).items():
            if u == v:
                raise ValueError("loop edge in labeling")
            if not 0 <= int(g) < group.order:
                raise ValueError(f"label {g} on edge {(u, v)} is not a group element")
            if u < v:
                self.labels[(u, v)] = int(g)
            else:
                self.labels[(v, u)] = group.inv(int(g))

    def __call__(self, u: int, v: int) -> int:
        if u == v:
            return self.group.identity
        if u < v:
            return self.labels.get((u, v), self.group.identity)
        return self.group.inv(self.labels.get((v, u), self.group.identity))

    def check_cocycle(self, k: SimplicialComplex) -> None:
        g = self.group
        for t in k.simplices(2):
            u, v, w = t
            if g.mul(self(u, v), self(v, w)) != self(u, w):
                raise CocycleError(f"cocycle condition fails on triangle {t}", t)
        for (u, v) in self.labels:
            if (u, v) not in k:
                raise CocycleError(f"labelled edge {(u, v)} is not an edge of the complex", (u, v))

    def is_trivial(self) -> bool:
        return all(g == self.group.identity for g in self.labels.values())


def cyclic_labelings(k: SimplicialComplex, p: int) -> List[Dict[Tuple[int, int], int]]:
    """Representatives of a basis of ``H^1(K; Z/p)`` as edge labelings (``p`` prime)."""
    fld = FieldSpec.prime(p)
    edges = k.simplices(1)
    eidx = k.index(1)
    tri = k.simplices(2)
    # cocycles: kernel of delta^1 ; coboundaries: image of delta^0
    cols: List[Vector] = [{} for _ in edges]
    for r, (u, v, w) in enumerate(tri):
        for e, s in (((v, w), 1), ((u, w), -1), ((u, v), 1)):
            cols[eidx[e]][r] = fld(s)
    cocycles = kernel_of_columns(cols, fld)
    cob = EchelonBasis(fld)
    for (v,) in k.simplices(0):
        vec = {}
        for e in edges:
            if e[0] == v:
                vec[eidx[e]] = fld(-1)
            elif e[1] == v:
                vec[eidx[e]] = fld(1)
        if vec:
            cob.add(vec)
    out = []
    for z in cocycles:
        if cob.add(z):
            out.append({edges[j]: int(x) for j, x in z.items()})
    return out


class CoverComplex:
    """Regular cover of a stratified complex with deck group ``G``."""

    def __init__(self, base: StratifiedComplex, group: FiniteGroup, labeling: DeckLabeling):
        labeling.check_cocycle(base.complex)
        self.base = base
        self.group = group
        self.labeling = labeling
        m = group.order
        self.order = m
        facets = []
        for s in base.complex.facets:
            facets.extend(self._lifts(s))
        nv = base.complex.vertex_count * m
        k = SimplicialComplex(facets, vertex_count=nv, name=f"{base.name}~{group.name}")
        gens = {lvl: [t for g in gs for t in self._lifts(g)] for lvl, gs in base.generators.items()}
        boundary = [t for b in base.boundary_faces for t in self._lifts(b)]
        orient = None
        if base.is_orientable():
            signs = {}
            for s, e in base.orientation.signs.items():
                for t in self._lifts(s):
                    signs[t] = e
            orient = Orientation(signs)
        self.cover = StratifiedComplex(k, gens, boundary, orient, base.collar_asserted, name=k.name)

    def _lifts(self, s: Simplex) -> List[Simplex]:
        g = self.group
        u = s[0]
        m = self.order
        return [tuple(w * m + g.mul(h, self.labeling(u, w)) for w in s) for h in range(m)]

    def project(self, t: Simplex) -> Simplex:
        m = self.order
        return tuple(v // m for v in t)

    def deck(self, g: int, t: Simplex) -> Simplex:
        m = self.order
        return tuple((v // m) * m + self.group.mul(g, v % m) for v in t)

    def is_connected(self) -> bool:
        return len(self.cover.complex.connected_components()) == 1

    def verify(self) -> Dict[str, bool]:
        """Free simplicial deck action commuting with projection; |G|-to-1 fibres."""
        k = self.cover.complex
        base = self.base.complex
        ok_free = ok_simplicial = ok_commute = ok_fibres = True
        for d in range(k.dim + 1):
            counts: Dict[Simplex, int] = {}
            for t in k.simplices(d):
                counts[self.project(t)] = counts.get(self.project(t), 0) + 1
                for g in range(self.order):
                    gt = self.deck(g, t)
                    if gt not in k:
                        ok_simplicial = False
                    if g != self.group.identity and gt == t:
                        ok_free = False
                    if self.project(gt) != self.project(t):
                        ok_commute = False
            if set(counts) != set(base.simplices(d)) or any(c != self.order for c in counts.values()):
                ok_fibres = False
        return {"deck_free": ok_free, "deck_simplicial": ok_simplicial,
                "deck_commutes_with_projection": ok_commute, "fibres_have_group_order": ok_fibres}

    def lift_perversity(self, p: Perversity) -> Perversity:
        vals = p.as_dict()
        out = {}
        for st in self.cover.strata:
            base_sid = self.base.stratum_of(self.project(st.representative))
            out[st.id] = vals.get(base_sid, 0) if st.is_singular else 0
        return Perversity.from_dict(out, p.name)


def build_cover(s: StratifiedComplex, group: FiniteGroup, labeling: DeckLabeling,
                require_connected_base: bool = True) -> CoverComplex:
    if require_connected_base and len(s.complex.connected_components()) != 1:
        raise ValueError("base must be connected")
    return CoverComplex(s, group, labeling)


def trivial_cover(s: StratifiedComplex, group: FiniteGroup) -> CoverComplex:
    return CoverComplex(s, group, DeckLabeling(group))


class EquivariantComplex:
    """``I^p C_*`` of the cover with the deck action on live simplices."""

    def __init__(self, cover: CoverComplex, p: Perversity, fld: FieldSpec = QQ, relative: bool = False):
        self.cover = cover
        self.perversity = p
        self.field = fld
        self.relative = relative
        self.complex = IntersectionChainComplex(cover.cover, cover.lift_perversity(p), fld,
                                                cover.cover.boundary_complex if relative else None)
        self.base_complex = IntersectionChainComplex(cover.base, p, fld,
                                                     cover.base.boundary_complex if relative else None)

    @property
    def n(self) -> int:
        return self.complex.n

    def action(self, g: int, i: int) -> List[int]:
        """Deck element ``g`` as a permutation of live ``i``-simplices."""
        c = self.complex
        idx = c.live_index[i]
        return [idx[self.cover.deck(g, t)] for t in c.live[i]]

    def act(self, g: int, i: int, vec: Vector) -> Vector:
        perm = self.action(g, i)
        return {perm[j]: a for j, a in vec.items()}

    def check_invariants(self) -> Dict[str, bool]:
        c = self.complex
        G = self.cover.group
        commutes = True
        rep = True
        for i in range(c.n + 1):
            perms = [self.action(g, i) for g in range(G.order)]
            for g in range(G.order):
                for h in range(G.order):
                    gh = perms[G.mul(g, h)]
                    if any(perms[g][perms[h][j]] != gh[j] for j in range(len(gh))):
                        rep = False
            if i:
                for v in c.basis(i):
                    bd = c.apply_boundary(i, v)
                    for g in range(G.order):
                        if c.apply_boundary(i, self.act(g, i, v)) != self.act(g, i - 1, bd):
                            commutes = False
                for g in range(G.order):
                    for j, ok in enumerate(c.allowable[i]):
                        if c.allowable[i][perms[g][j]] != ok:
                            commutes = False
        return {"boundary_commutes_with_action": commutes, "action_is_representation": rep}

    def project(self, i: int, vec: Vector) -> Vector:
        c, b = self.complex, self.base_complex
        bidx = b.live_index[i]
        out: Vector = {}
        for j, a in vec.items():
            axpy(out, a, {bidx[self.cover.project(c.live[i][j])]: 1}, self.field)
        return out


@dataclass
class CoinvariantReport:
    dimensions: List[int]
    base_dimensions: List[int]
    cover_dimensions: List[int]
    ranks: List[int]
    base_ranks: List[int]
    projection_ranks: List[int]

    @property
    def homology_agrees(self) -> bool:
        return self.ranks == self.base_ranks

    @property
    def projection_isomorphism(self) -> List[bool]:
        return [a == b == r for a, b, r in zip(self.dimensions, self.base_dimensions, self.projection_ranks)]

    def as_dict(self) -> dict:
        return {"coinvariant_dims": self.dimensions, "base_dims": self.base_dimensions,
                "cover_dims": self.cover_dimensions, "coinvariant_ranks": self.ranks,
                "base_ranks": self.base_ranks, "projection_ranks": self.projection_ranks,
                "homology_agrees": self.homology_agrees,
                "projection_isomorphism": self.projection_isomorphism}


def coinvariants_complex(e: EquivariantComplex) -> CoinvariantReport:
    """``F (x)_{F[G]} I^p C_*(X~)`` compared with ``I^p C_*(X)``."""
    c = e.complex
    fld = e.field
    G = e.cover.group
    n = c.n
    relations: List[EchelonBasis] = []
    dims = []
    for i in range(n + 1):
        eb = EchelonBasis(fld)
        for v in c.basis(i):
            for g in range(G.order):
                if g == G.identity:
                    continue
                w = e.act(g, i, v)
                axpy(w, -1, v, fld)
                if w:
                    eb.add(w)
        relations.append(eb)
        dims.append(len(c.basis(i)) - eb.rank)
    bd_ranks = [0] * (n + 2)
    for i in range(1, n + 1):
        eb = EchelonBasis(fld)
        eb.pivots = dict(relations[i - 1].pivots)
        base = eb.rank
        for v in c.basis(i):
            w = c.apply_boundary(i, v)
            if w:
                eb.add(w)
        bd_ranks[i] = eb.rank - base
    ranks = [dims[i] - bd_ranks[i] - bd_ranks[i + 1] for i in range(n + 1)]
    b = e.base_complex
    proj = [column_rank([e.project(i, v) for v in c.basis(i)], fld) for i in range(n + 1)]
    return CoinvariantReport(dims, b.dimensions(), c.dimensions(), ranks, list(homology_ranks(b).ranks), proj)


@dataclass
class DualComplexReport:
    dimensions: List[int]
    cohomology_ranks: List[int]
    square_zero: bool
    transfer_equivariant: bool
    transfer_chain_map: bool

    def as_dict(self) -> dict:
        return {"dimensions": self.dimensions, "cohomology_ranks": self.cohomology_ranks,
                "square_zero": self.square_zero, "transfer_equivariant": self.transfer_equivariant,
                "transfer_chain_map": self.transfer_chain_map}


def _boundary_in_basis(c: IntersectionChainComplex, i: int) -> List[Vector]:
    """Matrix of ``d: V_i -> V_{i-1}`` in the chosen bases, by columns."""
    if i == 0:
        return [{} for _ in c.basis(0)]
    eb = EchelonBasis(c.field, track=True)
    for a, v in enumerate(c.basis(i - 1)):
        eb.add(v, tag=a)
    out = []
    for v in c.basis(i):
        w = c.apply_boundary(i, v)
        coords = eb.express(w) if w else {}
        if coords is None:
            raise ArithmeticError("boundary left the allowable subspace")
        out.append(coords)
    return out


def equivariant_dual_complex(e: EquivariantComplex, check_transfer: bool = True) -> DualComplexReport:
    """``Hom_{F[G]}(I^p C_*(X~), F[G])`` with the coboundary ``-(-1)^i a o d``.

    As F-spaces ``Hom_{F[G]}(V, F[G])`` and ``Hom_F(V, F)`` are identified by
    composing with the identity coefficient; the inverse is the transfer
    ``f -> (v -> sum_g f(g^-1 v) g)``.  The identification commutes with the
    coboundary, so dimensions and cohomology are computed on ``Hom_F``; the
    transfer's equivariance and chain-map property are checked explicitly.
    """
    c = e.complex
    fld = e.field
    n = c.n
    dims = [len(c.basis(i)) for i in range(n + 1)]
    dmat = {i: _boundary_in_basis(c, i) for i in range(1, n + 1)}
    # delta^i : Hom(V_i) -> Hom(V_{i+1}) is -(-1)^i times the transpose of d_{i+1}
    cob_rank = [0] * (n + 2)
    square_zero = True
    for i in range(n):
        cols = dmat[i + 1]
        cob_rank[i + 1] = column_rank(cols, fld)
        if i + 2 <= n:
            # (delta delta) = +-(d d)^T ; check d_{i+1} d_{i+2} = 0
            for col in dmat[i + 2]:
                acc: Vector = {}
                for b, x in col.items():
                    axpy(acc, x, cols[b], fld)
                if acc:
                    square_zero = False
    coh = [dims[i] - cob_rank[i + 1] - cob_rank[i] for i in range(n + 1)]
    eq_ok = chain_ok = True
    if check_transfer:
        eq_ok, chain_ok = _check_transfer(e, dmat)
    return DualComplexReport(dims, coh, square_zero, eq_ok, chain_ok)


def _check_transfer(e: EquivariantComplex, dmat) -> Tuple[bool, bool]:
    """Spot-check the transfer on coordinate functionals of each degree."""
    c = e.complex
    fld = e.field
    G = e.cover.group
    eq_ok = chain_ok = True
    for i in range(c.n + 1):
        basis = c.basis(i)
        if not basis:
            continue
        # functional f = first coordinate on live simplices in the support of basis[0]
        j0 = min(basis[0])

        def f(vec):
            return vec.get(j0, 0)

        def phi(vec):
            return {g: fld(f(e.act(G.inv(g), i, vec))) for g in range(G.order)}

        for v in basis[:3]:
            for h in range(G.order):
                lhs = phi(e.act(h, i, v))
                rhs0 = phi(v)
                rhs = {G.mul(h, g): a for g, a in rhs0.items()}
                if any(fld(lhs.get(g, 0)) != fld(rhs.get(g, 0)) for g in range(G.order)):
                    eq_ok = False
        if i + 1 <= c.n:
            # (delta phi)(w) = -(-1)^i phi(d w) should equal transfer of (delta f)
            sgn = -1 if i % 2 == 0 else 1
            for w in c.basis(i + 1)[:3]:
                dw = c.apply_boundary(i + 1, w)
                lhs = {g: fld.mul(sgn, x) for g, x in {g: fld(f(e.act(G.inv(g), i, dw)))
                                                       for g in range(G.order)}.items()}
                rhs = {}
                for g in range(G.order):
                    gw = e.act(G.inv(g), i + 1, w)
                    rhs[g] = fld.mul(sgn, fld(f(c.apply_boundary(i + 1, gw))))
                if any(fld(lhs[g]) != fld(rhs[g]) for g in range(G.order)):
                    chain_ok = False
    return eq_ok, chain_ok


@dataclass
class UniversalDualityReport:
    perversity: str
    rows: List[dict]
    holds: bool
    lefschetz: bool = False

    def as_dict(self) -> dict:
        return {"perversity": self.perversity, "rows": self.rows, "holds": self.holds,
                "lefschetz": self.lefschetz}


def universal_duality_check(cover: CoverComplex, p: Perversity, fld: FieldSpec = QQ) -> UniversalDualityReport:
    """``dim I_p H^i(X~) = dim I^{Dp} H_{n-i}(X~)`` (and both Lefschetz forms with boundary)."""
    base = cover.base
    if not base.is_orientable():
        raise OrientationRequired(f"{base.name} is not orientable")
    dp = complementary(p, base)
    n = base.n
    rows = []
    holds = True
    if not base.boundary_faces:
        coh = equivariant_dual_complex(EquivariantComplex(cover, p, fld)).cohomology_ranks
        hom = homology_ranks(EquivariantComplex(cover, dp, fld).complex).ranks
        for i in range(n + 1):
            ok = coh[i] == hom[n - i]
            holds &= ok
            rows.append({"i": i, "cohomology": coh[i], "dual_homology": hom[n - i], "ok": ok})
        return UniversalDualityReport(p.name, rows, holds)
    for rel_coh, rel_hom in ((False, True), (True, False)):
        coh = equivariant_dual_complex(EquivariantComplex(cover, p, fld, relative=rel_coh)).cohomology_ranks
        hom = homology_ranks(EquivariantComplex(cover, dp, fld, relative=rel_hom).complex).ranks
        for i in range(n + 1):
            ok = coh[i] == hom[n - i]
            holds &= ok
            rows.append({"i": i, "cohomology_relative": rel_coh, "cohomology": coh[i],
                         "homology_relative": rel_hom, "dual_homology": hom[n - i], "ok": ok})
    return UniversalDualityReport(p.name, rows, holds, lefschetz=True)


def euler_characteristics(e: EquivariantComplex) -> Tuple[int, int]:
    return e.complex.euler_characteristic(), e.base_complex.euler_characteristic()


def subdivided_labeling(labeling: DeckLabeling, sd) -> DeckLabeling:
    """Labeling on a barycentric subdivision.

    The barycentre of ``tau`` sits over the least vertex of ``tau``; an edge
    between nested simplices gets the label between their least vertices.
    """
    lab = {}
    names = sd.vertex_label
    for (a, b) in sd.complex.simplices(1):
        g = labeling(names[a][0], names[b][0])
        if g != labeling.group.identity:
            lab[(a, b)] = g
    return DeckLabeling(labeling.group, lab)
