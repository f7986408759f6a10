"""Intersection chain complexes with stratified coefficients.

Simplices inside the singular set (and, for relative complexes, inside the
relative subcomplex) are *dead*: they carry coefficient zero, and the
boundary ``d^`` drops them.  Writing ``A_i`` for the allowable live
``i``-simplices and ``N_i`` for the remaining live ones, the degree ``i``
space is ``V_i = {x in span(A_i) : d^x has no N_{i-1} component}``.
Every dimension below is obtained from ranks of the matrix of ``d^`` on
the ``A_i`` columns, taken with all live rows (``full``) or only the
``N_{i-1}`` rows (``forbidden``):

    dim V_i   = |A_i| - rank_forbidden(i)
    dim Z_i   = |A_i| - rank_full(i)
    dim B_i   = rank_full(i+1) - rank_forbidden(i+1)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import QQ, EchelonBasis, ExactMatrix, FieldSpec, Vector, column_rank, kernel_of_columns
from .simplicial import Chain, Simplex, SimplicialComplex, faces_of
from .stratification import (Perversity, StratificationError, StratifiedComplex, complementary,
                             validate_pseudomanifold)


class AllowabilityError(ValueError):
    pass


def _perv_dict(p: Union[Perversity, Dict]) -> Dict:
    return p.as_dict() if isinstance(p, Perversity) else dict(p)


def stratum_intersections(sigma: Simplex, s: StratifiedComplex) -> Dict[object, int]:
    """Largest dimension of an open face of ``sigma`` in each singular stratum."""
    n = s.n
    sing = [v for v in sigma if s.level((v,)) < n]
    out: Dict[object, int] = {}
    for r in range(1, len(sing) + 1):
        for f in combinations(sing, r):
            if s.level(f) < n:
                sid = s.stratum_of(f)
                if out.get(sid, -1) < r - 1:
                    out[sid] = r - 1
    return out


def simplex_allowable(sigma: Sequence[int], p: Union[Perversity, Dict], s: StratifiedComplex) -> bool:
    """``dim(sigma & Z) <= dim sigma - codim Z + p(Z)`` for every singular stratum ``Z``."""
    sigma = tuple(sorted(sigma))
    pv = _perv_dict(p)
    d = len(sigma) - 1
    for sid, k in stratum_intersections(sigma, s).items():
        st = s.stratum(sid)
        if k > d - st.codim + pv.get(sid, 0):
            return False
    return True


def is_coefficient_zero(sigma: Simplex, s: StratifiedComplex) -> bool:
    """Simplices inside the singular set never carry coefficients."""
    return s.is_singular(tuple(sigma))


@dataclass(frozen=True)
class IHRanks:
    ranks: Tuple[int, ...]
    field: str = "Q"
    perversity: str = ""
    space: str = ""

    def __getitem__(self, i: int) -> int:
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    def __len__(self):
        return len(self.ranks)

    def as_dict(self) -> dict:
        return {"ranks": list(self.ranks), "field": self.field, "perversity": self.perversity,
                "space": self.space}


class IntersectionChainComplex:
    """``I^p C_*(X, A; F)`` on a stratified simplicial complex."""

    def __init__(self, space: StratifiedComplex, perversity: Perversity, fld: FieldSpec = QQ,
                 relative_to: Optional[SimplicialComplex] = None):
        self.space = space
        self.perversity = perversity
        self.field = fld
        self.relative_to = relative_to
        self.n = space.n
        pv = _perv_dict(perversity)
        self._pv = pv
        k = space.complex
        self.live: List[List[Simplex]] = []
        self.live_index: List[Dict[Simplex, int]] = []
        self.allowable: List[List[bool]] = []
        strata = {st.id: st for st in space.strata} if not space.is_trivially_stratified else {}
        for i in range(self.n + 1):
            lv = [t for t in k.simplices(i) if not self._dead(t)]
            self.live.append(lv)
            self.live_index.append({t: j for j, t in enumerate(lv)})
            if strata:
                flags = []
                for t in lv:
                    ok = True
                    for sid, dim in stratum_intersections(t, space).items():
                        if dim > i - strata[sid].codim + pv.get(sid, 0):
                            ok = False
                            break
                    flags.append(ok)
            else:
                flags = [True] * len(lv)
            self.allowable.append(flags)
        self._columns: Dict[int, List[Vector]] = {}
        self._ranks: Dict[Tuple[int, str], int] = {}
        self._basis: Dict[int, List[Vector]] = {}
        self._hbasis: Dict[int, List[Vector]] = {}

    def _dead(self, t: Simplex) -> bool:
        if self.space.is_singular(t):
            return True
        return self.relative_to is not None and t in self.relative_to

    # -- the matrix of d^ on allowable columns ------------------------------------
    def allowable_simplices(self, i: int) -> List[Simplex]:
        if not 0 <= i <= self.n:
            return []
        return [t for t, ok in zip(self.live[i], self.allowable[i]) if ok]

    def forbidden_simplices(self, i: int) -> List[Simplex]:
        if not 0 <= i <= self.n:
            return []
        return [t for t, ok in zip(self.live[i], self.allowable[i]) if not ok]

    def boundary_vector(self, i: int, t: Simplex) -> Vector:
        """``d^ t`` in live coordinates of degree ``i-1``."""
        if i == 0:
            return {}
        idx = self.live_index[i - 1]
        out: Vector = {}
        fld = self.field
        for j, f in enumerate(faces_of(t)):
            r = idx.get(f)
            if r is not None:
                out[r] = fld(-1 if j % 2 else 1)
        return out

    def columns(self, i: int) -> List[Vector]:
        """``d^`` applied to each allowable ``i``-simplex, in live coordinates."""
        if not 0 <= i <= self.n:
            return []
        got = self._columns.get(i)
        if got is None:
            got = [self.boundary_vector(i, t) for t in self.allowable_simplices(i)]
            self._columns[i] = got
        return got

    def _forbidden_rows(self, i: int) -> set:
        return {j for j, ok in enumerate(self.allowable[i]) if not ok} if 0 <= i <= self.n else set()

    def rank_full(self, i: int) -> int:
        key = (i, "full")
        if key not in self._ranks:
            self._ranks[key] = column_rank(self.columns(i), self.field) if 1 <= i <= self.n else 0
        return self._ranks[key]

    def rank_forbidden(self, i: int) -> int:
        key = (i, "forbidden")
        if key not in self._ranks:
            if 1 <= i <= self.n:
                bad = self._forbidden_rows(i - 1)
                cols = [{r: x for r, x in c.items() if r in bad} for c in self.columns(i)] if bad else []
                self._ranks[key] = column_rank(cols, self.field) if bad else 0
            else:
                self._ranks[key] = 0
        return self._ranks[key]

    def dimension(self, i: int) -> int:
        if not 0 <= i <= self.n:
            return 0
        return sum(self.allowable[i]) - self.rank_forbidden(i)

    def dimensions(self) -> List[int]:
        return [self.dimension(i) for i in range(self.n + 1)]

    def betti(self, i: int) -> int:
        if not 0 <= i <= self.n:
            return 0
        a = sum(self.allowable[i])
        return a - self.rank_full(i) - self.rank_full(i + 1) + self.rank_forbidden(i + 1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.dimension(i) for i in range(self.n + 1))

    # -- explicit bases --------------------------------------------------------------
    def basis(self, i: int) -> List[Vector]:
        """Basis of ``V_i`` as vectors in live ``i``-coordinates."""
        if not 0 <= i <= self.n:
            return []
        got = self._basis.get(i)
        if got is None:
            allow_idx = [j for j, ok in enumerate(self.allowable[i]) if ok]
            bad = self._forbidden_rows(i - 1) if i else set()
            cols = [{r: x for r, x in c.items() if r in bad} for c in self.columns(i)]
            ker = kernel_of_columns(cols, self.field)
            got = [{allow_idx[j]: x for j, x in v.items()} for v in ker]
            got.sort(key=lambda v: sorted(v))
            self._basis[i] = got
        return got

    def apply_boundary(self, i: int, vec: Vector) -> Vector:
        out: Vector = {}
        fld = self.field
        lv = self.live[i]
        idx = self.live_index[i - 1] if i else {}
        for j, a in vec.items():
            for e, f in enumerate(faces_of(lv[j])):
                r = idx.get(f)
                if r is not None:
                    x = fld.add(out.get(r, 0), a if e % 2 == 0 else fld.neg(a))
                    if x:
                        out[r] = x
                    else:
                        out.pop(r, None)
        return out

    def boundary_space(self, i: int) -> EchelonBasis:
        """Echelon basis of ``B_i`` (image of ``d^`` from ``A_{i+1}``)."""
        eb = EchelonBasis(self.field)
        for c in self.columns(i + 1):
            if c:
                eb.add(c)
        return eb

    def homology_basis(self, i: int) -> List[Vector]:
        """Cycles whose classes form a basis of ``I^p H_i``."""
        if not 0 <= i <= self.n:
            return []
        got = self._hbasis.get(i)
        if got is None:
            eb = self.boundary_space(i)
            allow_idx = [j for j, ok in enumerate(self.allowable[i]) if ok]
            ker = kernel_of_columns(self.columns(i), self.field)
            cycles = [{allow_idx[j]: x for j, x in v.items()} for v in ker]
            cycles.sort(key=lambda v: (len(v), sorted(v)))
            got = []
            for z in cycles:
                if eb.add(z):
                    got.append(z)
            self._hbasis[i] = got
        return got

    def homology_coordinates(self, i: int, cycle: Vector) -> Optional[List]:
        """Coordinates of a cycle's class in :meth:`homology_basis`, or ``None``."""
        eb = EchelonBasis(self.field, track=True)
        for j, c in enumerate(self.columns(i + 1)):
            if c:
                eb.add(c, tag=("b", j))
        basis = self.homology_basis(i)
        for a, z in enumerate(basis):
            eb.add(z, tag=("h", a))
        combo = eb.express(cycle)
        if combo is None:
            return None
        return [combo.get(("h", a), 0) for a in range(len(basis))]

    def is_cycle(self, i: int, vec: Vector) -> bool:
        return not self.apply_boundary(i, vec)

    def contains(self, i: int, vec: Vector) -> bool:
        """Whether a live-coordinate vector lies in ``V_i``."""
        if any(not self.allowable[i][j] for j in vec):
            return False
        bd = self.apply_boundary(i, vec) if i else {}
        return all(self.allowable[i - 1][r] for r in bd)

    def vector_of(self, c: Chain) -> Vector:
        """Live coordinates of a chain; dead simplices are dropped."""
        idx = self.live_index[c.degree]
        return {idx[s]: a for s, a in c.coefficients.items() if s in idx}

    def chain_of(self, i: int, vec: Vector) -> Chain:
        lv = self.live[i]
        return Chain(i, {lv[j]: a for j, a in vec.items()}, self.field)

    def ranks(self) -> IHRanks:
        return homology_ranks(self)

    def __repr__(self):
        return (f"IntersectionChainComplex({self.space.name!r}, p={self.perversity.name or '?'}, "
                f"F={self.field}, rel={'yes' if self.relative_to is not None else 'no'})")


def build_complex(s: StratifiedComplex, p: Perversity, fld: FieldSpec = QQ,
                  relative_to: Union[None, str, SimplicialComplex] = None,
                  validate: bool = True) -> IntersectionChainComplex:
    """``I^p C_*(X; F)``, or the relative complex when ``relative_to`` is given.

    ``relative_to="boundary"`` uses the declared boundary.
    """
    if validate:
        rep = validate_pseudomanifold(s)
        if not rep.passed:
            raise StratificationError(f"space fails validation: {', '.join(rep.failures())}")
    if relative_to == "boundary":
        if not s.boundary_faces:
            raise StratificationError("no boundary declared")
        relative_to = s.boundary_complex
    return IntersectionChainComplex(s, p, fld, relative_to)


def homology_ranks(c: IntersectionChainComplex) -> IHRanks:
    return IHRanks(tuple(c.betti(i) for i in range(c.n + 1)), str(c.field), c.perversity.name, c.space.name)


def intersection_homology(s: StratifiedComplex, p: Perversity, fld: FieldSpec = QQ,
                          relative_to=None) -> IHRanks:
    return homology_ranks(build_complex(s, p, fld, relative_to))


def cone_formula_oracle(link_ranks: Union[IHRanks, Sequence[int]], cone_vertex_perversity_value: int,
                        link_dim: int) -> IHRanks:
    """``I^p H_i(cL) = I^p H_i(L)`` for ``i < link_dim - p(v)``, else 0."""
    r = list(link_ranks.ranks if isinstance(link_ranks, IHRanks) else link_ranks)
    cut = link_dim - cone_vertex_perversity_value
    out = [(r[i] if i < len(r) else 0) if i < cut else 0 for i in range(link_dim + 2)]
    return IHRanks(tuple(out), perversity=f"p(v)={cone_vertex_perversity_value}", space="cone")


@dataclass
class ComparisonReport:
    ranks: List[int]
    low: List[int]
    high: List[int]

    @property
    def isomorphism(self) -> bool:
        return all(r == a == b for r, a, b in zip(self.ranks, self.low, self.high))

    def as_dict(self) -> dict:
        return {"map_ranks": self.ranks, "low_ranks": self.low, "high_ranks": self.high,
                "isomorphism": self.isomorphism}


def comparison_map_ranks(c_low: IntersectionChainComplex, c_high: IntersectionChainComplex) -> ComparisonReport:
    """Ranks of ``I^p H_* -> I^q H_*`` induced by inclusion, for ``p <= q``."""
    if c_low.space is not c_high.space and c_low.space.complex is not c_high.space.complex:
        raise ValueError("complexes live on different spaces")
    if c_low.field != c_high.field:
        raise ValueError("field mismatch")
    if not c_low.perversity <= c_high.perversity:
        raise ValueError("perversities are not comparable (need low <= high on every stratum)")
    ranks, lows, highs = [], [], []
    for i in range(c_low.n + 1):
        reps = c_low.homology_basis(i)
        eb = c_high.boundary_space(i)
        base = eb.rank
        for z in reps:
            eb.add(z)
        ranks.append(eb.rank - base)
        lows.append(len(reps))
        highs.append(c_high.betti(i))
    return ComparisonReport(ranks, lows, highs)


def dual_ranks(s: StratifiedComplex, p: Perversity, fld: FieldSpec = QQ) -> Tuple[IHRanks, IHRanks]:
    """Ranks for ``p`` and for ``D p``; the pair compared by Poincare duality."""
    return intersection_homology(s, p, fld), intersection_homology(s, complementary(p, s), fld)
