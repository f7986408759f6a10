"""Finite ordered simplicial complexes, chains and geometric constructions.

Vertices are the integers ``0..vertex_count-1`` and their numeric order is
the global vertex order from which every sign convention is derived.  A
simplex is a strictly increasing tuple of vertices.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .algebra import QQ, ExactMatrix, FieldSpec, axpy

Simplex = Tuple[int, ...]


class NonOrientableError(ValueError):
    """Raised when a top stratum admits no coherent orientation."""

    def __init__(self, message: str, cycle: Sequence[Simplex] = ()):
        super().__init__(message)
        self.cycle = list(cycle)


def faces_of(s: Simplex) -> List[Simplex]:
    """Codimension-one faces; ``faces_of(s)[i]`` omits vertex ``i``."""
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def all_faces(s: Simplex) -> Iterable[Simplex]:
    for k in range(1, len(s) + 1):
        yield from combinations(s, k)


class SimplicialComplex:
    """Simplicial complex given by its maximal simplices.

    Faces of each dimension are generated on first request and memoised.
    """

    def __init__(self, simplices: Iterable[Sequence[int]] = (), vertex_count: Optional[int] = None,
                 name: str = ""):
        tops = {tuple(sorted(set(int(v) for v in s))) for s in simplices}
        tops.discard(())
        for s in tops:
            if any(v < 0 for v in s):
                raise ValueError(f"negative vertex in {s}")
        # keep only maximal simplices
        by_dim = sorted(tops, key=len, reverse=True)
        maximal: List[Simplex] = []
        covered: Set[Simplex] = set()
        for s in by_dim:
            if s in covered:
                continue
            maximal.append(s)
            if len(s) > 1:
                for f in all_faces(s):
                    if len(f) < len(s):
                        covered.add(f)
        self.facets: List[Simplex] = sorted(maximal)
        used = max((s[-1] for s in self.facets), default=-1) + 1
        self.vertex_count = max(used, vertex_count or 0)
        self.name = name
        self._faces: Dict[int, List[Simplex]] = {}
        self._index: Dict[int, Dict[Simplex, int]] = {}
        self._facet_set = set(self.facets)

    # -- basic queries -------------------------------------------------------
    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.facets), default=-1)

    def __repr__(self):
        return f"SimplicialComplex({self.name or 'unnamed'}, dim={self.dim}, facets={len(self.facets)})"

    def simplices(self, k: int) -> List[Simplex]:
        """Sorted list of ``k``-simplices."""
        if k < 0 or k > self.dim:
            return []
        got = self._faces.get(k)
        if got is None:
            acc: Set[Simplex] = set()
            if k == 0:
                acc = {(v,) for s in self.facets for v in s}
            else:
                for s in self.facets:
                    if len(s) == k + 1:
                        acc.add(s)
                    elif len(s) > k + 1:
                        acc.update(combinations(s, k + 1))
            got = sorted(acc)
            self._faces[k] = got
        return got

    def index(self, k: int) -> Dict[Simplex, int]:
        got = self._index.get(k)
        if got is None:
            got = {s: i for i, s in enumerate(self.simplices(k))}
            self._index[k] = got
        return got

    def __contains__(self, s) -> bool:
        s = tuple(s)
        if not s:
            return True
        if s in self._facet_set:
            return True
        return s in self.index(len(s) - 1)

    def all_simplices(self) -> List[Simplex]:
        out = []
        for k in range(self.dim + 1):
            out.extend(self.simplices(k))
        return out

    def vertices(self) -> List[int]:
        return [s[0] for s in self.simplices(0)]

    def f_vector(self) -> List[int]:
        return [len(self.simplices(k)) for k in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def is_pure(self) -> bool:
        d = self.dim
        return all(len(s) - 1 == d for s in self.facets)

    def top_simplices(self) -> List[Simplex]:
        d = self.dim
        return [s for s in self.facets if len(s) - 1 == d]

    def cofaces(self, k: int) -> Dict[Simplex, List[Simplex]]:
        """Map each ``k``-simplex to the ``(k+1)``-simplices containing it."""
        out: Dict[Simplex, List[Simplex]] = {s: [] for s in self.simplices(k)}
        for t in self.simplices(k + 1):
            for f in faces_of(t):
                out[f].append(t)
        return out

    def boundary_matrix(self, k: int, fld: FieldSpec = QQ) -> ExactMatrix:
        """Matrix of the simplicial boundary ``C_k -> C_{k-1}``."""
        rows = self.simplices(k - 1)
        cols = self.simplices(k)
        idx = self.index(k - 1)
        columns = []
        for s in cols:
            col = {}
            if k > 0:
                for i, f in enumerate(faces_of(s)):
                    col[idx[f]] = fld(-1 if i % 2 else 1)
            columns.append(col)
        return ExactMatrix(len(rows), len(cols), columns, fld)

    def subcomplex(self, simplices: Iterable[Sequence[int]]) -> "SimplicialComplex":
        sub = SimplicialComplex(simplices, vertex_count=self.vertex_count)
        for s in sub.facets:
            if s not in self:
                raise ValueError(f"{s} is not a simplex of the complex")
        return sub

    def is_full_subcomplex(self, sub: "SimplicialComplex") -> bool:
        """Every simplex of ``self`` spanned by vertices of ``sub`` lies in ``sub``."""
        vs = set(sub.vertices())
        for s in self.facets:
            inside = tuple(v for v in s if v in vs)
            if len(inside) > 1 and inside not in sub:
                return False
        return True

    def connected_components(self) -> List[List[int]]:
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s in self.facets:
            r = find(s[0])
            for v in s[1:]:
                q = find(v)
                if q != r:
                    parent[q] = r
        comps: Dict[int, List[int]] = {}
        for v in self.vertices():
            comps.setdefault(find(v), []).append(v)
        return sorted(comps.values())


@dataclass
class Chain:
    """Finite linear combination of oriented ``degree``-simplices."""

    degree: int
    coefficients: Dict[Simplex, object] = field(default_factory=dict)
    field: FieldSpec = QQ

    def __post_init__(self):
        clean = {}
        for s, c in self.coefficients.items():
            s = tuple(s)
            if len(s) != self.degree + 1:
                raise ValueError(f"simplex {s} has wrong dimension for degree {self.degree}")
            c = self.field(c)
            if c:
                clean[s] = c
        self.coefficients = clean

    def __add__(self, other: "Chain") -> "Chain":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.coefficients)
        axpy(out, 1, other.coefficients, self.field)
        return Chain(self.degree, out, self.field)

    def __neg__(self) -> "Chain":
        return self.scaled(-1)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scaled(self, a) -> "Chain":
        a = self.field(a)
        return Chain(self.degree, {s: self.field.mul(c, a) for s, c in self.coefficients.items()},
                     self.field)

    def is_zero(self) -> bool:
        return not self.coefficients

    def support(self) -> List[Simplex]:
        return sorted(self.coefficients)

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.coefficients == other.coefficients


def boundary(c: Chain) -> Chain:
    """Alternating face sum; degree-0 chains have empty boundary."""
    if c.degree <= 0:
        return Chain(-1, {}, c.field)
    out: Dict[Simplex, object] = {}
    fld = c.field
    for s, a in c.coefficients.items():
        for i, f in enumerate(faces_of(s)):
            out[f] = out.get(f, 0) + (-a if i % 2 else a)
    return Chain(c.degree - 1, out, fld)


def simplex_chain(s: Sequence[int], fld: FieldSpec = QQ) -> Chain:
    s = tuple(s)
    return Chain(len(s) - 1, {s: 1}, fld)


# -- constructions -------------------------------------------------------------

def cone(k: SimplicialComplex) -> SimplicialComplex:
    """Join with a new apex vertex, ordered after every existing vertex."""
    apex = k.vertex_count
    if not k.facets:
        return SimplicialComplex([(apex,)], vertex_count=apex + 1, name=f"cone({k.name})")
    return SimplicialComplex([s + (apex,) for s in k.facets], vertex_count=apex + 1,
                             name=f"cone({k.name})")


def suspension(k: SimplicialComplex) -> SimplicialComplex:
    """Union of two cones with apexes ``n`` and ``n+1``."""
    a, b = k.vertex_count, k.vertex_count + 1
    if not k.facets:
        return SimplicialComplex([(a,), (b,)], vertex_count=b + 1, name=f"susp({k.name})")
    facets = [s + (a,) for s in k.facets] + [s + (b,) for s in k.facets]
    return SimplicialComplex(facets, vertex_count=b + 1, name=f"susp({k.name})")


def disjoint_union(*ks: SimplicialComplex) -> SimplicialComplex:
    facets = []
    offset = 0
    for k in ks:
        facets.extend(tuple(v + offset for v in s) for s in k.facets)
        offset += k.vertex_count
    return SimplicialComplex(facets, vertex_count=offset,
                             name=" + ".join(k.name or "?" for k in ks))


def monotone_paths(p: int, q: int) -> List[Tuple[Tuple[Tuple[int, int], ...], int]]:
    """Lattice paths from (0,0) to (p,q) with their shuffle signs.

    The sign is the parity of the shuffle permutation: the number of pairs
    (second-factor step, later first-factor step).
    """
    out = []
    for ups in combinations(range(p + q), q):
        upset = set(ups)
        i = j = 0
        pts = [(0, 0)]
        inversions = 0
        for t in range(p + q):
            if t in upset:
                j += 1
            else:
                i += 1
                inversions += j
            pts.append((i, j))
        out.append((tuple(pts), -1 if inversions % 2 else 1))
    return out


class ProductComplex(SimplicialComplex):
    """Staircase (order-complex) triangulation of ``a x b``.

    Vertex ``(u, v)`` is encoded as ``u * b.vertex_count + v`` so that the
    numeric order is lexicographic on pairs.
    """

    def __init__(self, a: SimplicialComplex, b: SimplicialComplex):
        if not a.facets or not b.facets:
            raise ValueError("staircase product needs nonempty factors")
        self.factors = (a, b)
        self.stride = b.vertex_count
        m = self.stride
        facets = []
        path_cache: Dict[Tuple[int, int], list] = {}
        for s in a.facets:
            for t in b.facets:
                key = (len(s) - 1, len(t) - 1)
                paths = path_cache.get(key)
                if paths is None:
                    paths = path_cache[key] = monotone_paths(*key)
                for pts, _ in paths:
                    facets.append(tuple(s[i] * m + t[j] for i, j in pts))
        super().__init__(facets, vertex_count=a.vertex_count * m,
                         name=f"{a.name or '?'} x {b.name or '?'}")

    def pair(self, v: int) -> Tuple[int, int]:
        return divmod(v, self.stride)

    def vertex(self, u: int, v: int) -> int:
        return u * self.stride + v

    def project(self, s: Simplex) -> Tuple[Simplex, Simplex]:
        """Images of ``s`` under the two coordinate projections (as vertex sets)."""
        m = self.stride
        return (tuple(sorted({v // m for v in s})), tuple(sorted({v % m for v in s})))


def staircase_product(a: SimplicialComplex, b: SimplicialComplex) -> ProductComplex:
    return ProductComplex(a, b)


class Subdivision:
    """Barycentric subdivision with the simplexwise subdivision chain map.

    Vertices of the subdivision are the simplices of the original complex,
    ordered by (dimension, lexicographic), so every simplex of the
    subdivision lists faces in increasing dimension.
    """

    def __init__(self, k: SimplicialComplex):
        self.original = k
        order = k.all_simplices()
        self.barycenter = {s: i for i, s in enumerate(order)}
        self.vertex_label = order
        facets = []
        for s in k.facets:
            for perm in _permutations(s):
                flag = tuple(self.barycenter[tuple(sorted(perm[:r]))] for r in range(1, len(s) + 1))
                facets.append(flag)
        self.complex = SimplicialComplex(facets, vertex_count=len(order), name=f"sd({k.name})")
        self._carrier: Dict[Simplex, Dict[Simplex, int]] = {}

    def carrier_of_simplex(self, s: Simplex) -> Dict[Simplex, int]:
        """Signed sum of the pieces of ``s``; built as the cone from its barycenter."""
        got = self._carrier.get(s)
        if got is not None:
            return got
        b = self.barycenter[s]
        if len(s) == 1:
            got = {(b,): 1}
        else:
            got = {}
            k = len(s) - 1
            for i, f in enumerate(faces_of(s)):
                sign = (-1) ** (i + k)
                for piece, c in self.carrier_of_simplex(f).items():
                    key = piece + (b,)
                    got[key] = got.get(key, 0) + sign * c
            got = {t: c for t, c in got.items() if c}
        self._carrier[s] = got
        return got

    def carrier(self, c: Chain) -> Chain:
        out: Dict[Simplex, object] = {}
        for s, a in c.coefficients.items():
            for t, e in self.carrier_of_simplex(s).items():
                out[t] = out.get(t, 0) + a * e
        return Chain(c.degree, out, c.field)


def _permutations(s: Simplex):
    from itertools import permutations
    return permutations(s)


def barycentric_subdivision(k: SimplicialComplex) -> Subdivision:
    return Subdivision(k)


def induced_sign(top: Simplex, face: Simplex) -> int:
    """Sign of ``face`` in the boundary of ``top``."""
    i = next(t for t in range(len(top)) if t >= len(face) or top[t] != face[t])
    return -1 if i % 2 else 1


@dataclass
class Orientation:
    """Sign of each top simplex relative to its increasing vertex order."""

    signs: Dict[Simplex, int]

    def flipped(self) -> "Orientation":
        return Orientation({s: -e for s, e in self.signs.items()})

    def chain(self, fld: FieldSpec = QQ) -> Chain:
        d = len(next(iter(self.signs))) - 1 if self.signs else 0
        return Chain(d, dict(self.signs), fld)


def orient_top(k: SimplicialComplex, singular_faces: Iterable[Simplex] = (),
               prescribed: Optional[Dict[Simplex, int]] = None) -> Orientation:
    """Coherent orientation of every component of the top stratum.

    Codimension-one faces listed in ``singular_faces`` impose no coherence
    condition.  ``prescribed`` fixes signs of some top simplices; otherwise the
    least top simplex of each component is positive.
    """
    n = k.dim
    tops = k.top_simplices()
    exempt = set(singular_faces)
    incident: Dict[Simplex, List[Tuple[Simplex, int]]] = {}
    for s in tops:
        for i, f in enumerate(faces_of(s)):
            if f in exempt:
                continue
            incident.setdefault(f, []).append((s, -1 if i % 2 else 1))
    neighbours: Dict[Simplex, List[Tuple[Simplex, int, Simplex]]] = {s: [] for s in tops}
    for f, inc in incident.items():
        if len(inc) > 2:
            raise NonOrientableError(f"face {f} lies on {len(inc)} top simplices", [s for s, _ in inc])
        if len(inc) == 2:
            (s1, e1), (s2, e2) = inc
            # coherence: sign(s1)*e1 + sign(s2)*e2 == 0
            rel = -e1 * e2
            neighbours[s1].append((s2, rel, f))
            neighbours[s2].append((s1, rel, f))
    prescribed = dict(prescribed or {})
    signs: Dict[Simplex, int] = {}
    parent: Dict[Simplex, Optional[Simplex]] = {}
    for root in tops:
        if root in signs:
            continue
        # collect the component first so a prescribed sign anywhere in it wins
        comp = [root]
        seen = {root}
        q = deque([root])
        while q:
            s = q.popleft()
            for t, _, _ in neighbours[s]:
                if t not in seen:
                    seen.add(t)
                    comp.append(t)
                    q.append(t)
        start = next((s for s in sorted(comp) if s in prescribed), root)
        signs[start] = prescribed.get(start, 1)
        parent[start] = None
        q = deque([start])
        while q:
            s = q.popleft()
            for t, rel, f in neighbours[s]:
                want = signs[s] * rel
                if t not in signs:
                    signs[t] = want
                    parent[t] = s
                    q.append(t)
                elif signs[t] != want:
                    cycle = _tree_cycle(parent, s, t)
                    raise NonOrientableError(
                        f"incoherent orientation across face {f}; obstructing cycle of "
                        f"{len(cycle)} top simplices", cycle)
        for s in comp:
            if s in prescribed and prescribed[s] != signs[s]:
                raise NonOrientableError(f"prescribed orientation of {s} is incoherent", [s])
    return Orientation(signs)


def _tree_cycle(parent, a, b) -> List[Simplex]:
    def path(x):
        out = []
        while x is not None:
            out.append(x)
            x = parent[x]
        return out

    pa, pb = path(a), path(b)
    sb = set(pb)
    meet = next(x for x in pa if x in sb)
    cyc = pa[:pa.index(meet) + 1] + list(reversed(pb[:pb.index(meet)]))
    return cyc
