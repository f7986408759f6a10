"""Fundamental classes, duality checks, the Witt condition and intersection forms.

Two routes produce the middle-dimensional form from the diagonal of the
fundamental cycle:

``diagonal``
    Push ``Gamma`` along the geometric diagonal into ``X x X``, check it is
    ``Q_{n,n}``-allowable, and decompose its class over cross products of
    middle-perversity basis cycles.  The middle block is the raw matrix.
    Needs the chain complex of ``X x X`` in degrees ``n`` and ``n + 1``.

``cochain``
    Choose relative cocycles ``alpha_a`` on ``(X, Sigma)`` dual to the basis
    cycles and evaluate ``(alpha_a cup alpha_b)(Gamma)``.  The diagonal of a
    simplex is the Alexander-Whitney cross of its front and back faces and
    the only nondegenerate term of the Alexander-Whitney map on a cross
    product is the trivial shuffle, so this reproduces the diagonal route's
    middle block exactly.  It only needs chains on ``X`` and applies when the
    middle-perversity classes stay independent in ``H(X, Sigma)``.

The reported form is ``(-1)^(n/2)`` times the raw block; both are kept.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import QQ, EchelonBasis, FieldSpec, SymmetricFormInvariants, Vector, symmetric_invariants
from .chains import (ComparisonReport, IHRanks, IntersectionChainComplex, build_complex,
                     comparison_map_ranks, homology_ranks)
from .products import (KunnethError, cochain_cross, cross, cup_evaluate, diagonal_chain,
                       kunneth_basis, kunneth_decompose)
from .simplicial import Chain, NonOrientableError, ProductComplex, Simplex, boundary, faces_of, orient_top
from .stratification import (Perversity, ProductStratified, StratificationError, StratifiedComplex,
                             classical, complementary, disjoint_union_space, product_perversity,
                             subdivide)


class WittError(ValueError):
    pass


class RouteUnavailable(ArithmeticError):
    pass


# -- fundamental class -----------------------------------------------------------

@dataclass
class FundamentalClass:
    cycle: Chain
    coordinates: List
    relative: bool
    boundary_image: Optional[Chain] = None

    def as_dict(self) -> dict:
        return {"simplices": len(self.cycle.coefficients), "coordinates": [str(x) for x in self.coordinates],
                "relative": self.relative}


def fundamental_class(s: StratifiedComplex, fld: FieldSpec = QQ) -> FundamentalClass:
    """Signed sum of the oriented top simplices, checked to be a ``0``-allowable cycle."""
    gamma = s.fundamental_chain(fld)
    rel = bool(s.boundary_faces)
    c = build_complex(s, classical("zero", s), fld, "boundary" if rel else None, validate=False)
    vec = c.vector_of(gamma)
    if len(vec) != len(gamma.coefficients) or not c.contains(s.n, vec):
        raise WittError("fundamental chain is not 0-allowable")
    if not c.is_cycle(s.n, vec):
        raise WittError("fundamental chain is not a cycle" + (" rel boundary" if rel else ""))
    coords = c.homology_coordinates(s.n, vec)
    bimg = None
    if rel:
        full = boundary(gamma)
        bimg = Chain(full.degree, {f: a for f, a in full.coefficients.items() if not s.is_singular(f)}, fld)
    return FundamentalClass(gamma, coords or [], rel, bimg)


# -- duality -----------------------------------------------------------------------

@dataclass
class DualityReport:
    perversity: str
    dual_perversity: str
    ranks: List[int]
    dual_ranks: List[int]
    holds: bool
    relative_ranks: Optional[List[int]] = None
    dual_relative_ranks: Optional[List[int]] = None

    def as_dict(self) -> dict:
        d = {"perversity": self.perversity, "dual_perversity": self.dual_perversity,
             "ranks": self.ranks, "dual_ranks": self.dual_ranks, "holds": self.holds}
        if self.relative_ranks is not None:
            d["relative_ranks"] = self.relative_ranks
            d["dual_relative_ranks"] = self.dual_relative_ranks
        return d


def duality_check(s: StratifiedComplex, p: Perversity, fld: FieldSpec = QQ,
                  q: Optional[Perversity] = None) -> DualityReport:
    """``dim I^p H_i = dim I^q H_{n-i}`` with ``q = D p`` unless given.

    With a boundary both Lefschetz identities (absolute against relative)
    are checked.
    """
    if not s.is_orientable():
        raise NonOrientableError(f"{s.name} is not orientable")
    q = q if q is not None else complementary(p, s)
    n = s.n
    a = list(homology_ranks(build_complex(s, p, fld, validate=False)).ranks)
    b = list(homology_ranks(build_complex(s, q, fld, validate=False)).ranks)
    if not s.boundary_faces:
        holds = all(a[i] == b[n - i] for i in range(n + 1))
        return DualityReport(p.name, q.name, a, b, holds)
    ar = list(homology_ranks(build_complex(s, p, fld, "boundary", validate=False)).ranks)
    br = list(homology_ranks(build_complex(s, q, fld, "boundary", validate=False)).ranks)
    holds = all(a[i] == br[n - i] and ar[i] == b[n - i] for i in range(n + 1))
    return DualityReport(p.name, q.name, a, b, holds, ar, br)


# -- intersection form -----------------------------------------------------------------

@dataclass
class IntersectionForm:
    n: int
    middle: int
    basis: List[Dict[Simplex, str]]
    raw: List[List]
    matrix: List[List]
    invariants: SymmetricFormInvariants
    route: str
    notes: List[str] = field(default_factory=list)

    @property
    def skew_case(self) -> bool:
        return self.n % 4 == 2

    @property
    def signature(self) -> int:
        if self.skew_case or not self.invariants.field.is_rational:
            return 0
        return self.invariants.signature or 0

    def as_dict(self) -> dict:
        return {"n": self.n, "middle_degree": self.middle, "route": self.route,
                "raw": [[str(x) for x in r] for r in self.raw],
                "matrix": [[str(x) for x in r] for r in self.matrix],
                "invariants": self.invariants.as_dict(), "signature": self.signature,
                "skew_case": self.skew_case, "notes": list(self.notes),
                "basis": [{" ".join(map(str, k)): v for k, v in sorted(b.items())} for b in self.basis]}


def _normalise(raw: List[List], m: int, fld: FieldSpec) -> List[List]:
    sgn = -1 if m % 2 else 1
    return [[fld.mul(sgn, x) for x in row] for row in raw]


def _finish(s, fld, m, basis_chains, raw, route, notes) -> IntersectionForm:
    g = _normalise(raw, m, fld)
    inv = symmetric_invariants(g, fld) if g else symmetric_invariants([], fld)
    if s.n % 4 == 2:
        notes = notes + ["skew case: n = 2 mod 4, signature set to 0"]
    basis = [{t: str(a) for t, a in ch.coefficients.items()} for ch in basis_chains]
    return IntersectionForm(s.n, m, basis, raw, g, inv, route, notes)


def dual_cocycles(c: IntersectionChainComplex, m: int, cycles: Sequence[Vector]) -> List[Dict[Simplex, object]]:
    """Cocycles of ``C^m(X, Sigma)`` with ``alpha_a(y_b) = delta_ab``.

    Raises :class:`RouteUnavailable` when the cycles are dependent in
    ``H_m(X, Sigma)``.
    """
    fld = c.field
    live_m = c.live[m]
    idx = c.live_index[m]
    up = c.live[m + 1] if m + 1 <= c.n else []
    cols: List[Vector] = [{} for _ in live_m]
    for r, t in enumerate(up):
        for e, f in enumerate(faces_of(t)):
            j = idx.get(f)
            if j is not None:
                cols[j][r] = fld(-1 if e % 2 else 1)
    T = len(up)
    for b, y in enumerate(cycles):
        for j, a in y.items():
            cols[j][T + b] = fld(a)
    eb = EchelonBasis(fld, track=True)
    for j, col in enumerate(cols):
        if col:
            eb.add(col, tag=j)
    out = []
    for a in range(len(cycles)):
        sol = eb.express({T + a: 1})
        if sol is None:
            raise RouteUnavailable("middle-perversity classes are not independent in H(X, Sigma)")
        out.append({live_m[j]: x for j, x in sol.items() if x})
    return out


def _route_cochain(s: StratifiedComplex, c: IntersectionChainComplex, fld: FieldSpec):
    m = s.n // 2
    ys = c.homology_basis(m)
    alphas = dual_cocycles(c, m, ys)
    gamma = s.fundamental_chain(fld)
    raw = [[cup_evaluate(a, m, b, m, gamma) for b in alphas] for a in alphas]
    return [c.chain_of(m, y) for y in ys], raw


def _route_diagonal(s: StratifiedComplex, c: IntersectionChainComplex, fld: FieldSpec):
    m = s.n // 2
    nb = c.perversity
    ps = ProductStratified(s, s)
    q = product_perversity(nb, nb, s, s, ps)
    cxx = IntersectionChainComplex(ps, q, fld)
    d = diagonal_chain(s.fundamental_chain(fld), ps.complex)
    vec = cxx.vector_of(d)
    if len(vec) != len(d.coefficients) or not cxx.contains(s.n, vec):
        raise WittError("diagonal of the fundamental cycle is not Q(n,n)-allowable")
    if not cxx.is_cycle(s.n, vec):
        raise WittError("diagonal of the fundamental cycle is not a cycle")
    kb = kunneth_basis(c, c, cxx, degrees=[s.n])
    dec = kunneth_decompose(vec, s.n, kb, cxx)
    r = len(c.homology_basis(m))
    raw = dec.block(m, r, r)
    return [c.chain_of(m, y) for y in c.homology_basis(m)], raw, dec


def diagonal_route_size(s: StratifiedComplex) -> int:
    """Top simplices of ``X x X``; the diagonal route is used below a threshold."""
    from math import comb
    n = s.n
    return len(s.complex.top_simplices()) ** 2 * comb(2 * n, n)


DIAGONAL_ROUTE_LIMIT = 20000


def intersection_form(s: StratifiedComplex, fld: FieldSpec = QQ, route: str = "auto",
                      check_witt: bool = True) -> IntersectionForm:
    """Middle-dimensional form on ``I^n H_{n/2}`` read off from ``d(Gamma_X)``."""
    if s.n % 2:
        raise WittError("intersection form needs even dimension")
    if s.boundary_faces:
        raise WittError("intersection form needs a closed space")
    if check_witt:
        rep = global_witt_check(s, fld, with_form=False)
        if not rep.verdict:
            raise WittError("space is not globally Witt: " + ", ".join(rep.notes))
    c = build_complex(s, classical("upper-middle", s), fld, validate=False)
    m = s.n // 2
    if not c.homology_basis(m):
        return _finish(s, fld, m, [], [], "trivial", ["middle intersection homology vanishes"])
    notes = []
    if route == "auto":
        route = "diagonal" if diagonal_route_size(s) <= DIAGONAL_ROUTE_LIMIT else "cochain"
    if route == "diagonal":
        basis, raw, _ = _route_diagonal(s, c, fld)
    elif route == "cochain":
        try:
            basis, raw = _route_cochain(s, c, fld)
        except RouteUnavailable:
            notes.append("cochain route unavailable; fell back to the diagonal route")
            basis, raw, _ = _route_diagonal(s, c, fld)
            route = "diagonal"
    elif route == "both":
        basis, raw, _ = _route_diagonal(s, c, fld)
        _, raw_b = _route_cochain(s, c, fld)
        if raw != raw_b:
            raise WittError(f"routes disagree: diagonal {raw} vs cochain {raw_b}")
        notes.append("diagonal and cochain routes agree")
    else:
        raise ValueError(f"unknown route {route!r}")
    return _finish(s, fld, m, basis, raw, route, notes)


def signature(s: StratifiedComplex, route: str = "auto") -> int:
    """Signature over the rationals; 0 when ``n`` is not divisible by 4."""
    if s.n % 4:
        return 0
    return intersection_form(s, QQ, route).signature


# -- the Witt condition -----------------------------------------------------------------

@dataclass
class WittReport:
    comparison: ComparisonReport
    verdict: bool
    form: Optional[IntersectionForm] = None
    notes: List[str] = field(default_factory=list)
    boundary: bool = False

    def as_dict(self) -> dict:
        d = {"comparison": self.comparison.as_dict(), "verdict": self.verdict, "notes": list(self.notes),
             "boundary_version": self.boundary}
        if self.form is not None:
            d["form"] = self.form.as_dict()
        return d


def global_witt_check(s: StratifiedComplex, fld: FieldSpec = QQ, cover=None,
                      with_form: bool = True) -> WittReport:
    """Whether ``I^m H_* -> I^n H_*`` is an isomorphism on the cover (default: ``X`` itself)."""
    if s.has_codim_one_strata():
        raise StratificationError("global Witt check requires no codimension-one strata")
    if not s.is_orientable():
        raise NonOrientableError(f"{s.name} is not orientable")
    target = cover.cover if cover is not None else s
    notes = []
    if target.is_trivially_stratified:
        r = list(homology_ranks(build_complex(target, classical("zero", target), fld, validate=False)).ranks)
        comp = ComparisonReport(r, r, r)
        notes.append("no singular strata: the two complexes coincide")
    else:
        low = build_complex(target, classical("lower-middle", target), fld, validate=False)
        high = build_complex(target, classical("upper-middle", target), fld, validate=False)
        comp = comparison_map_ranks(low, high)
    verdict = comp.isomorphism
    if not verdict:
        bad = [i for i, (r, a, b) in enumerate(zip(comp.ranks, comp.low, comp.high)) if not r == a == b]
        notes.append(f"comparison map fails to be an isomorphism in degrees {bad}")
    rep = WittReport(comp, verdict, None, notes, bool(s.boundary_faces))
    if verdict and with_form and s.n % 2 == 0 and not s.boundary_faces:
        rep.form = intersection_form(s, fld, check_witt=False)
    return rep


# -- products ------------------------------------------------------------------------------

@dataclass
class ProductFormReport:
    signature_x: int
    signature_y: int
    signature_product: int
    multiplicative: bool
    gamma_cross_is_orientation: bool
    pairing_is_dual: bool
    form: List[List]
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.multiplicative and self.gamma_cross_is_orientation and self.pairing_is_dual

    def as_dict(self) -> dict:
        return {"signature_x": self.signature_x, "signature_y": self.signature_y,
                "signature_product": self.signature_product, "multiplicative": self.multiplicative,
                "gamma_cross_is_orientation": self.gamma_cross_is_orientation,
                "pairing_is_dual": self.pairing_is_dual, "form": [[str(x) for x in r] for r in self.form],
                "notes": list(self.notes), "passed": self.passed}


def _all_dual_cocycles(c: IntersectionChainComplex):
    out = {}
    for i in range(c.n + 1):
        ys = c.homology_basis(i)
        out[i] = (ys, dual_cocycles(c, i, ys) if ys else [])
    return out


def product_intersection_form(sx: StratifiedComplex, sy: StratifiedComplex, fld: FieldSpec = QQ):
    """Form of ``X x Y`` on the cross-product basis, using cochain cross products.

    Returns ``(raw, basis_labels, checks)``.  The product chain complex is never
    assembled: basis cycles are shuffle products of factor cycles and the dual
    cocycles are Alexander-Whitney products of factor cocycles.
    """
    n = sx.n + sy.n
    if n % 2:
        raise WittError("product has odd dimension")
    m = n // 2
    cx = build_complex(sx, classical("upper-middle", sx), fld, validate=False)
    cy = build_complex(sy, classical("upper-middle", sy), fld, validate=False)
    dx, dy = _all_dual_cocycles(cx), _all_dual_cocycles(cy)
    ps = ProductStratified(sx, sy)
    pc = ps.complex
    labels, cycles, cochains = [], [], []
    for i in range(max(0, m - sy.n), min(m, sx.n) + 1):
        j = m - i
        ysx, ax = dx[i]
        ysy, ay = dy[j]
        for a in range(len(ysx)):
            for b in range(len(ysy)):
                labels.append((i, a, j, b))
                cycles.append(cross(cx.chain_of(i, ysx[a]), cy.chain_of(j, ysy[b]), pc))
                cochains.append(cochain_cross(ax[a], i, ay[b], j, pc, fld))
    # pairing of cochains with cycles must be the identity
    pairing = [[_evaluate(cochains[r], cycles[t], fld) for t in range(len(cycles))] for r in range(len(cycles))]
    dual_ok = all(pairing[r][t] == (1 if r == t else 0) for r in range(len(cycles)) for t in range(len(cycles)))
    gamma = cross(sx.fundamental_chain(fld), sy.fundamental_chain(fld), pc)
    raw = [[_cup_on(cochains[a], cochains[b], m, gamma, fld) for b in range(len(cycles))]
           for a in range(len(cycles))]
    return raw, labels, {"pairing_is_dual": dual_ok, "gamma": gamma, "product": ps}


def _evaluate(f, chain: Chain, fld: FieldSpec):
    total = fld(0)
    for s, c in chain.coefficients.items():
        x = f(s)
        if x:
            total = fld.add(total, fld.mul(c, x))
    return total


def _cup_on(f, g, m: int, chain: Chain, fld: FieldSpec):
    total = fld(0)
    for s, c in chain.coefficients.items():
        x = f(s[:m + 1])
        if not x:
            continue
        y = g(s[m:])
        if y:
            total = fld.add(total, fld.mul(c, fld.mul(x, y)))
    return total


def verify_product_formula(sx: StratifiedComplex, sy: StratifiedComplex,
                           check_orientation: bool = True) -> ProductFormReport:
    """``sigma(X x Y) = sigma(X) sigma(Y)`` and ``Gamma_{XxY} = Gamma_X x Gamma_Y``."""
    fld = QQ
    notes = []
    sig_x, sig_y = signature(sx), signature(sy)
    raw, labels, chk = product_intersection_form(sx, sy, fld)
    m = (sx.n + sy.n) // 2
    g = _normalise(raw, m, fld)
    inv = symmetric_invariants(g, fld)
    sig = 0 if (sx.n + sy.n) % 4 else (inv.signature or 0)
    gamma_ok = True
    if check_orientation:
        ps: ProductStratified = chk["product"]
        gamma = chk["gamma"]
        anchor = min(gamma.coefficients)
        try:
            o = orient_top(ps.complex, ps.exempt_faces(), {anchor: int(gamma.coefficients[anchor])})
            gamma_ok = o.signs == {t: int(c) for t, c in gamma.coefficients.items()}
        except NonOrientableError:
            gamma_ok = False
        notes.append(f"product has {len(gamma.coefficients)} top simplices")
    if not inv.is_nondegenerate:
        notes.append("product form is degenerate")
    return ProductFormReport(sig_x, sig_y, sig, sig == sig_x * sig_y, gamma_ok, chk["pairing_is_dual"], g, notes)


# -- boundaries ------------------------------------------------------------------------------

@dataclass
class BoundaryReport:
    hypothesis: bool
    boundary_witt: Optional[bool]
    boundary_signature: Optional[int]
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.hypothesis and self.boundary_witt and self.boundary_signature == 0)

    def as_dict(self) -> dict:
        return {"hypothesis_boundary_witt": self.hypothesis, "boundary_witt": self.boundary_witt,
                "boundary_signature": self.boundary_signature, "notes": list(self.notes),
                "passed": self.passed}


def verify_boundary_vanishing(s: StratifiedComplex) -> BoundaryReport:
    """On a global boundary-Witt space: the boundary is Witt and has signature 0."""
    if not s.boundary_faces:
        raise WittError("space has no boundary")
    rep = global_witt_check(s, QQ, with_form=False)
    if not rep.verdict:
        return BoundaryReport(False, None, None, ["hypothesis unmet: space is not globally boundary-Witt"]
                              + rep.notes)
    b = s.boundary_space()
    brep = global_witt_check(b, QQ, with_form=False)
    sig = signature(b) if brep.verdict else None
    return BoundaryReport(True, brep.verdict, sig, [f"boundary has {len(b.complex.top_simplices())} top simplices"])


def reversed_space(s: StratifiedComplex) -> StratifiedComplex:
    return s.reversed()


def disjoint_union(*spaces: StratifiedComplex) -> StratifiedComplex:
    return disjoint_union_space(*spaces)
