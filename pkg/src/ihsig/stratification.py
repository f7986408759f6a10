"""Filtered simplicial complexes, their strata, and perversities."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .simplicial import (Chain, NonOrientableError, Orientation, ProductComplex, Simplex,
                         SimplicialComplex, Subdivision, all_faces, faces_of, monotone_paths,
                         orient_top)
from .algebra import QQ, FieldSpec


class StratificationError(ValueError):
    pass


@dataclass(frozen=True)
class Stratum:
    id: object
    level: int
    codim: int
    representative: Simplex

    @property
    def is_singular(self) -> bool:
        return self.codim > 0


class _UnionFind:
    def __init__(self):
        self.parent: Dict[object, object] = {}

    def find(self, x):
        p = self.parent
        p.setdefault(x, x)
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class StratifiedComplex:
    """Simplicial complex with a filtration by closed subcomplexes.

    ``skeleta`` maps a level ``K < n`` to simplices generating part of the
    skeleton ``X^K``; skeleta are closed under faces and nested by taking
    unions downward.  ``boundary`` lists the top simplices of a declared
    boundary subcomplex.
    """

    def __init__(self, complex: SimplicialComplex, skeleta: Optional[Mapping[int, Iterable[Sequence[int]]]] = None,
                 boundary: Iterable[Sequence[int]] = (), orientation: Optional[Orientation] = None,
                 collar_asserted: bool = False, name: str = ""):
        self.complex = complex
        self.n = complex.dim
        self.name = name or complex.name
        self.collar_asserted = collar_asserted
        self.generators: Dict[int, List[Simplex]] = {}
        for lvl, gens in (skeleta or {}).items():
            self.generators[int(lvl)] = sorted({tuple(sorted(g)) for g in gens})
        self._level: Dict[Simplex, int] = {}
        for lvl in sorted(self.generators):
            for g in self.generators[lvl]:
                for f in all_faces(g):
                    if self._level.get(f, self.n) > lvl:
                        self._level[f] = lvl
        self.boundary_faces: List[Simplex] = sorted({tuple(sorted(b)) for b in boundary})
        self.boundary_complex = (SimplicialComplex(self.boundary_faces, complex.vertex_count)
                                 if self.boundary_faces else None)
        self._orientation = orientation
        self._strata: Optional[List[Stratum]] = None
        self._stratum_of: Dict[Simplex, object] = {}
        self._vertex_component: Optional[Dict[int, int]] = None

    # -- filtration ----------------------------------------------------------
    def level(self, s: Simplex) -> int:
        """Least ``K`` with ``s`` in ``X^K``."""
        return self._level.get(s, self.n)

    def codim(self, s: Simplex) -> int:
        return self.n - self.level(s)

    def is_singular(self, s: Simplex) -> bool:
        return self.level(s) < self.n

    def singular_simplices(self) -> List[Simplex]:
        return sorted(self._level, key=lambda s: (len(s), s))

    @property
    def is_trivially_stratified(self) -> bool:
        return not self._level

    def in_boundary(self, s: Simplex) -> bool:
        return self.boundary_complex is not None and s in self.boundary_complex

    def has_boundary(self) -> bool:
        return bool(self.boundary_faces)

    # -- strata --------------------------------------------------------------
    def _compute_strata(self):
        uf = _UnionFind()
        lev = self._level
        n = self.n
        if self._level:
            for s, lv in lev.items():
                uf.find(s)
                if len(s) > 1:
                    for f in faces_of(s):
                        if lev.get(f, n) == lv:
                            uf.union(s, f)
            for k in range(self.n + 1):
                for s in self.complex.simplices(k):
                    if s in lev:
                        continue
                    uf.find(s)
                    if k:
                        for f in faces_of(s):
                            if f not in lev:
                                uf.union(s, f)
            groups: Dict[Simplex, List[Simplex]] = {}
            for s in list(uf.parent):
                groups.setdefault(uf.find(s), []).append(s)
            reps = sorted((min(g), g) for g in groups.values())
            strata = []
            for i, (rep, members) in enumerate(reps):
                lv = lev.get(rep, n)
                strata.append(Stratum(i, lv, n - lv, rep))
                for s in members:
                    self._stratum_of[s] = i
            self._strata = strata
        else:
            comps = self.complex.connected_components()
            self._vertex_component = {}
            strata = []
            for i, c in enumerate(comps):
                for v in c:
                    self._vertex_component[v] = i
                strata.append(Stratum(i, n, 0, (c[0],)))
            self._strata = strata

    @property
    def strata(self) -> List[Stratum]:
        if self._strata is None:
            self._compute_strata()
        return self._strata

    def stratum(self, sid) -> Stratum:
        return self._strata_by_id()[sid]

    def _strata_by_id(self):
        if not hasattr(self, "_by_id"):
            self._by_id = {st.id: st for st in self.strata}
        return self._by_id

    def stratum_of(self, s: Simplex):
        if self._strata is None:
            self._compute_strata()
        if self._vertex_component is not None:
            return self._vertex_component[s[0]]
        return self._stratum_of[s]

    def singular_strata(self) -> List[Stratum]:
        return [st for st in self.strata if st.is_singular]

    def has_codim_one_strata(self) -> bool:
        return any(st.codim == 1 for st in self.strata)

    def members(self, sid) -> List[Simplex]:
        """Open simplices making up a stratum."""
        return sorted((s for k in range(self.n + 1) for s in self.complex.simplices(k)
                       if self.stratum_of(s) == sid), key=lambda s: (len(s), s))

    # -- orientation ---------------------------------------------------------
    def exempt_faces(self) -> List[Simplex]:
        return [s for s in self._level if len(s) == self.n]

    @property
    def orientation(self) -> Orientation:
        if self._orientation is None:
            self._orientation = orient_top(self.complex, self.exempt_faces())
        return self._orientation

    def is_orientable(self) -> bool:
        try:
            self.orientation
        except NonOrientableError:
            return False
        return True

    def with_orientation(self, orientation: Orientation) -> "StratifiedComplex":
        out = self.copy()
        out._orientation = orientation
        return out

    def reversed(self) -> "StratifiedComplex":
        out = self.with_orientation(self.orientation.flipped())
        out.name = f"-{self.name}"
        return out

    def copy(self) -> "StratifiedComplex":
        out = StratifiedComplex(self.complex, self.generators, self.boundary_faces, self._orientation,
                                self.collar_asserted, self.name)
        return out

    def fundamental_chain(self, fld: FieldSpec = QQ) -> Chain:
        return self.orientation.chain(fld)

    def boundary_space(self) -> "StratifiedComplex":
        """The declared boundary with its induced filtration and orientation."""
        if not self.boundary_faces:
            raise StratificationError("no boundary declared")
        bc = SimplicialComplex(self.boundary_faces, self.complex.vertex_count, name=f"bd({self.name})")
        gens: Dict[int, List[Simplex]] = {}
        for k in range(bc.dim + 1):
            for s in bc.simplices(k):
                lv = self.level(s)
                if lv < self.n:
                    gens.setdefault(lv - 1, []).append(s)
        # induced orientation: boundary of the fundamental chain
        signs: Dict[Simplex, int] = {}
        bset = set(self.boundary_faces)
        for s, e in self.orientation.signs.items():
            for i, f in enumerate(faces_of(s)):
                if f in bset:
                    signs[f] = signs.get(f, 0) + (-e if i % 2 else e)
        return StratifiedComplex(bc, gens, (), Orientation({f: c for f, c in signs.items() if c}),
                                 name=f"bd({self.name})")

    def __repr__(self):
        return (f"StratifiedComplex({self.name!r}, n={self.n}, strata={len(self.strata)}, "
                f"boundary={len(self.boundary_faces)})")

    def is_full(self) -> bool:
        """Whether every skeleton is a full subcomplex."""
        for lvl in sorted(self.generators):
            sk = [s for s, lv in self._level.items() if lv <= lvl]
            sub = SimplicialComplex(sk, self.complex.vertex_count)
            if not self.complex.is_full_subcomplex(sub):
                return False
        return True


class ProductStratified(StratifiedComplex):
    """Product filtration on the staircase triangulation of ``X x Y``.

    Strata are pairs of factor strata with additive codimension.
    """

    def __init__(self, x: StratifiedComplex, y: StratifiedComplex):
        self.factors = (x, y)
        pc = ProductComplex(x.complex, y.complex)
        self.complex = pc
        self.n = pc.dim
        self.name = f"{x.name} x {y.name}"
        self.collar_asserted = False
        self.generators = {}
        self._level = _ProductLevels(self)
        bfaces = []
        if x.boundary_faces or y.boundary_faces:
            bfaces = _product_boundary_faces(x, y, pc)
        self.boundary_faces = sorted(bfaces)
        self.boundary_complex = SimplicialComplex(self.boundary_faces, pc.vertex_count) if bfaces else None
        self._orientation = None
        self._strata = None
        self._stratum_of = {}
        self._vertex_component = None

    def level(self, s):
        return self._level.get(s, self.n)

    def project(self, s: Simplex):
        return self.complex.project(s)

    def stratum_of(self, s):
        a, b = self.complex.project(s)
        x, y = self.factors
        return (x.stratum_of(a), y.stratum_of(b))

    @property
    def strata(self):
        if self._strata is None:
            x, y = self.factors
            out = []
            for sa in x.strata:
                for sb in y.strata:
                    rep = self.complex.vertex(sa.representative[0], sb.representative[0])
                    out.append(Stratum((sa.id, sb.id), sa.level + sb.level, sa.codim + sb.codim, (rep,)))
            self._strata = out
        return self._strata

    @property
    def is_trivially_stratified(self):
        return all(f.is_trivially_stratified for f in self.factors)

    def exempt_faces(self):
        if self.is_trivially_stratified:
            return []
        out = []
        for s in self.complex.simplices(self.n - 1):
            if self.is_singular(s):
                out.append(s)
        return out

    @property
    def orientation(self) -> Orientation:
        if self._orientation is None:
            from .products import cross
            x, y = self.factors
            g = cross(x.fundamental_chain(), y.fundamental_chain(), self.complex)
            self._orientation = Orientation({s: int(c) for s, c in g.coefficients.items()})
        return self._orientation

    def singular_simplices(self):
        return sorted((s for k in range(self.n + 1) for s in self.complex.simplices(k)
                       if self.is_singular(s)), key=lambda s: (len(s), s))

    def copy(self):
        out = ProductStratified(*self.factors)
        out._orientation = self._orientation
        return out


class _ProductLevels:
    """Lazy ``level`` lookup for product simplices; mimics ``dict.get``."""

    def __init__(self, ps: ProductStratified):
        self.ps = ps

    def get(self, s, default=None):
        a, b = self.ps.complex.project(s)
        x, y = self.ps.factors
        return x.level(a) + y.level(b)

    def __bool__(self):
        return not all(f.is_trivially_stratified for f in self.ps.factors)

    def __contains__(self, s):
        return self.get(s) < self.ps.n

    def items(self):
        for s in self.ps.singular_simplices():
            yield s, self.get(s)

    def __iter__(self):
        return iter(self.ps.singular_simplices())


def _product_boundary_faces(x, y, pc) -> List[Simplex]:
    out = set()
    m = pc.stride
    for bx, ty in ((x.boundary_faces, y.complex.top_simplices()), (x.complex.top_simplices(), y.boundary_faces)):
        for s in bx:
            for t in ty:
                for pts, _ in monotone_paths(len(s) - 1, len(t) - 1):
                    out.add(tuple(s[i] * m + t[j] for i, j in pts))
    return sorted(out)


# -- perversities ---------------------------------------------------------------

@dataclass(frozen=True)
class Perversity:
    """Integer value per stratum id; regular strata carry 0."""

    values: Tuple[Tuple[object, int], ...]
    name: str = ""

    @classmethod
    def from_dict(cls, values: Mapping, name: str = "") -> "Perversity":
        return cls(tuple(sorted(values.items(), key=lambda kv: repr(kv[0]))), name)

    def as_dict(self) -> Dict:
        return dict(self.values)

    def __call__(self, sid) -> int:
        return self.as_dict().get(sid, 0)

    def __le__(self, other: "Perversity") -> bool:
        a, b = self.as_dict(), other.as_dict()
        return all(a.get(k, 0) <= b.get(k, 0) for k in set(a) | set(b))


def perversity(values: Mapping, s: StratifiedComplex, name: str = "") -> Perversity:
    vals = {}
    for st in s.strata:
        v = int(values.get(st.id, 0))
        if not st.is_singular and v != 0:
            raise StratificationError(f"perversity must vanish on regular stratum {st.id}")
        vals[st.id] = v if st.is_singular else 0
    return Perversity.from_dict(vals, name)


def from_codim(func: Callable[[int], int], s: StratifiedComplex, name: str) -> Perversity:
    return Perversity.from_dict({st.id: (func(st.codim) if st.is_singular else 0) for st in s.strata}, name)


def _upper_middle(c: int) -> int:
    return 0 if c <= 1 else -((2 - c) // 2)  # ceil((c-2)/2)


def complementary(p: Perversity, s: StratifiedComplex) -> Perversity:
    vals = p.as_dict()
    out = {st.id: (st.codim - 2 - vals.get(st.id, 0)) if st.is_singular else 0 for st in s.strata}
    nm = p.name[2:] if p.name.startswith("D ") else f"D {p.name}" if p.name else ""
    return Perversity.from_dict(out, nm)


def classical(name: str, s: StratifiedComplex) -> Perversity:
    """``zero``, ``top``, ``upper-middle`` (n) or ``lower-middle`` (m)."""
    key = {"0": "zero", "zero": "zero", "t": "top", "top": "top", "n": "upper-middle",
           "upper-middle": "upper-middle", "m": "lower-middle", "lower-middle": "lower-middle"}.get(name)
    if key is None:
        raise ValueError(f"unknown classical perversity {name!r}")
    if key == "zero":
        return from_codim(lambda c: 0, s, "0")
    if key == "top":
        return from_codim(lambda c: c - 2, s, "t")
    if key == "upper-middle":
        return from_codim(_upper_middle, s, "n")
    return from_codim(lambda c: c - 2 - _upper_middle(c), s, "m")


def product_perversity(p: Perversity, q: Perversity, sx: StratifiedComplex, sy: StratifiedComplex,
                       prod: Optional[ProductStratified] = None) -> Perversity:
    """The perversity on ``X x Y`` making the cross product a quasi-isomorphism."""
    pv, qv = p.as_dict(), q.as_dict()
    out = {}
    for a in sx.strata:
        for b in sy.strata:
            if a.is_singular and b.is_singular:
                v = pv.get(a.id, 0) + qv.get(b.id, 0) + 2
            elif a.is_singular:
                v = pv.get(a.id, 0)
            elif b.is_singular:
                v = qv.get(b.id, 0)
            else:
                v = 0
            out[(a.id, b.id)] = v
    return Perversity.from_dict(out, f"Q({p.name},{q.name})")


def random_perversity(s: StratifiedComplex, rng: random.Random, low: int = -2,
                      high_extra: int = 1) -> Perversity:
    """Random general perversity with values in ``[low, codim - 2 + high_extra]``."""
    vals = {}
    for st in s.strata:
        if st.is_singular:
            vals[st.id] = rng.randint(low, st.codim - 2 + high_extra)
        else:
            vals[st.id] = 0
    return Perversity.from_dict(vals, "random")


# -- validation -------------------------------------------------------------------

@dataclass
class ValidationReport:
    checks: Dict[str, bool] = field(default_factory=dict)
    certificates: Dict[str, object] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> List[str]:
        return [k for k, v in self.checks.items() if not v]

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checks": dict(self.checks),
                "certificates": {k: repr(v) for k, v in self.certificates.items()},
                "notes": list(self.notes)}


def validate_pseudomanifold(s: StratifiedComplex) -> ValidationReport:
    """Combinatorial surrogate checks for a (boundary) stratified pseudomanifold."""
    rep = ValidationReport()
    k = s.complex
    n = s.n
    bad = [f for f in k.facets if len(f) - 1 != n]
    rep.checks["purity"] = not bad
    if bad:
        rep.certificates["purity"] = bad[:5]
    bset = set(s.boundary_faces)
    cof = {}
    for t in k.top_simplices():
        for f in faces_of(t):
            cof[f] = cof.get(f, 0) + 1
    wrong = []
    for f in k.simplices(n - 1):
        want = 1 if f in bset else 2
        if cof.get(f, 0) != want:
            wrong.append((f, cof.get(f, 0)))
    rep.checks["codim_one_faces"] = not wrong
    if wrong:
        rep.certificates["codim_one_faces"] = wrong[:5]
    # density: every singular simplex lies in the closure of the top stratum
    lonely = []
    top_faces = set()
    for t in k.top_simplices():
        top_faces.add(t)
    for sx in s._level:
        if not any(set(sx) <= set(t) for t in top_faces):
            lonely.append(sx)
            if len(lonely) > 4:
                break
    rep.checks["top_stratum_dense"] = not lonely and not bad
    if lonely:
        rep.certificates["top_stratum_dense"] = lonely
    # skeleta: generators are simplices of the complex of dimension <= level,
    # and every stratum of X^K - X^{K-1} has dimension K
    problems = []
    for lvl, gens in s.generators.items():
        if not 0 <= lvl < n:
            problems.append(("level out of range", lvl))
        for g in gens:
            if g not in k:
                problems.append(("not a simplex", g))
            elif len(g) - 1 > lvl:
                problems.append(("too big for skeleton", lvl, g))
    if not problems and not isinstance(s, ProductStratified):
        dims: Dict[object, int] = {}
        for sx, lv in s._level.items():
            sid = s.stratum_of(sx)
            dims[sid] = max(dims.get(sid, -1), len(sx) - 1)
        for st in s.strata:
            if st.is_singular and dims.get(st.id) != st.level:
                problems.append(("stratum dimension", st.id, st.level, dims.get(st.id)))
    rep.checks["skeleta_nested_closed"] = not problems
    if problems:
        rep.certificates["skeleta_nested_closed"] = problems[:5]
    if s.boundary_faces:
        missing = [b for b in s.boundary_faces if len(b) != n or b not in k]
        bc = s.boundary_complex
        wrong_b = []
        if not missing and n >= 2:
            bcof = {}
            for t in bc.simplices(n - 1):
                for f in faces_of(t):
                    bcof[f] = bcof.get(f, 0) + 1
            wrong_b = [(f, c) for f, c in bcof.items() if c != 2]
        rep.checks["boundary_pseudomanifold"] = not missing and not wrong_b
        if missing or wrong_b:
            rep.certificates["boundary_pseudomanifold"] = (missing or wrong_b)[:5]
        rep.notes.append("collar: declared, unchecked" if s.collar_asserted else "collar: not declared, unchecked")
    if s.has_codim_one_strata():
        rep.notes.append("codimension-one strata present")
    return rep


# -- stratified constructions ----------------------------------------------------------

def trivial(k: SimplicialComplex, boundary: Iterable[Sequence[int]] = (), name: str = "") -> StratifiedComplex:
    return StratifiedComplex(k, {}, boundary, name=name or k.name)


def cone_space(link: StratifiedComplex, with_boundary: bool = True) -> StratifiedComplex:
    """Closed cone with the apex as a point stratum and coned link strata."""
    from .simplicial import cone
    c = cone(link.complex)
    apex = c.vertex_count - 1
    gens: Dict[int, List[Simplex]] = {0: [(apex,)]}
    for lvl, gs in link.generators.items():
        gens.setdefault(lvl + 1, []).extend(g + (apex,) for g in gs)
    boundary = link.complex.top_simplices() if with_boundary else ()
    orient = None
    if link.is_orientable():
        # cone orientation whose boundary restricts to the link orientation
        sgn = (-1) ** (link.n + 1)
        orient = Orientation({s + (apex,): sgn * e for s, e in link.orientation.signs.items()})
    return StratifiedComplex(c, gens, boundary, orient, name=f"c({link.name})")


def suspension_space(link: StratifiedComplex) -> StratifiedComplex:
    from .simplicial import suspension
    c = suspension(link.complex)
    a, b = c.vertex_count - 2, c.vertex_count - 1
    gens: Dict[int, List[Simplex]] = {0: [(a,), (b,)]}
    for lvl, gs in link.generators.items():
        gens.setdefault(lvl + 1, []).extend([g + (a,) for g in gs] + [g + (b,) for g in gs])
    return StratifiedComplex(c, gens, name=f"S({link.name})")


def disjoint_union_space(*spaces: StratifiedComplex) -> StratifiedComplex:
    from .simplicial import disjoint_union
    c = disjoint_union(*(s.complex for s in spaces))
    gens: Dict[int, List[Simplex]] = {}
    boundary: List[Simplex] = []
    signs: Dict[Simplex, int] = {}
    off = 0
    oriented = all(sp.is_orientable() for sp in spaces)
    for sp in spaces:
        sh = lambda t: tuple(v + off for v in t)
        for lvl, gs in sp.generators.items():
            gens.setdefault(lvl, []).extend(sh(g) for g in gs)
        boundary.extend(sh(b) for b in sp.boundary_faces)
        if oriented:
            signs.update({sh(t): e for t, e in sp.orientation.signs.items()})
        off += sp.complex.vertex_count
    return StratifiedComplex(c, gens, boundary, Orientation(signs) if oriented else None,
                             name=" + ".join(sp.name for sp in spaces))


def subdivide(s: StratifiedComplex, times: int = 1) -> StratifiedComplex:
    """Barycentric subdivision carrying filtration, boundary and orientation."""
    out = s
    for _ in range(times):
        out = _subdivide_once(out)[0]
    return out


def subdivide_with_carrier(s: StratifiedComplex) -> Tuple[StratifiedComplex, Subdivision]:
    return _subdivide_once(s)


def _subdivide_once(s: StratifiedComplex) -> Tuple[StratifiedComplex, Subdivision]:
    sd = Subdivision(s.complex)
    label = sd.vertex_label
    gens: Dict[int, List[Simplex]] = {}
    n = s.n
    for k in range(sd.complex.dim + 1):
        for t in sd.complex.simplices(k):
            lv = s.level(label[t[-1]])
            if lv < n:
                gens.setdefault(lv, []).append(t)
    bset = set(s.boundary_faces)
    boundary = []
    if bset:
        for t in sd.complex.simplices(n - 1):
            if label[t[-1]] in bset:
                boundary.append(t)
    orient = None
    if s._orientation is not None or s.is_orientable():
        g = sd.carrier(s.fundamental_chain())
        orient = Orientation({t: int(c) for t, c in g.coefficients.items()})
    out = StratifiedComplex(sd.complex, gens, boundary, orient, s.collar_asserted, name=f"sd({s.name})")
    return out, sd


def ensure_full(s: StratifiedComplex, max_subdivisions: int = 2) -> Tuple[StratifiedComplex, int]:
    """Subdivide until every skeleton is a full subcomplex."""
    count = 0
    while not s.is_full():
        if count >= max_subdivisions:
            raise StratificationError("filtration still not full after subdivision")
        s = subdivide(s)
        count += 1
    return s, count
