"""Acceptance criteria 1-10, one recorded pass/fail line each.

Every comparison is exact (tolerance zero). Timings cover the package
computation; oracle time is reported separately where an oracle runs.
Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import time

import pytest

import oracles
from ihsig import spaces
from ihsig.algebra import QQ, FieldSpec
from ihsig.chains import IntersectionChainComplex, build_complex, cone_formula_oracle, intersection_homology
from ihsig.covers import (CoverComplex, DeckLabeling, EquivariantComplex, FiniteGroup, OrientationRequired,
                          coinvariants_complex, cyclic_labelings, trivial_cover, universal_duality_check)
from ihsig.products import kunneth_basis
from ihsig.stratification import (ProductStratified, StratifiedComplex, classical, complementary, cone_space,
                                  perversity, product_perversity, random_perversity, subdivide)
from ihsig.witt import (duality_check, global_witt_check, intersection_form, reversed_space, disjoint_union,
                        signature, verify_boundary_vanishing, verify_product_formula)

F2 = FieldSpec.prime(2)
CLASSICAL = ("0", "m", "n", "t")
RESULTS: dict = {}


def record(n: int, title: str, budget: float, ok: bool, seconds: float, detail: str) -> bool:
    within = seconds <= budget
    RESULTS[n] = (ok and within, title, seconds, budget, detail if within else f"{detail}; over budget")
    return ok and within


def ranks(space, p, fld=QQ, **kw):
    return list(intersection_homology(space, p, fld, **kw).ranks)


def with_vertex_stratum(s: StratifiedComplex, v: int = 0) -> StratifiedComplex:
    """Same complex and orientation, with one vertex declared ``X^0``."""
    return StratifiedComplex(s.complex, {0: [(v,)]}, orientation=s.orientation, name=f"{s.name}+pt")


# -- 1 ----------------------------------------------------------------------------------

def criterion_1():
    cases = {"S2": spaces.boundary_of_simplex(3), "S3": spaces.boundary_of_simplex(4),
             "S4": spaces.boundary_of_simplex(5), "T2": spaces.torus(), "RP2": spaces.rp2()}
    want = {(k, p): oracles.betti(c.facets, p) for k, c in cases.items() for p in (0, 2)}
    t0 = time.perf_counter()
    bad = []
    for name in cases:
        s = spaces.named(name)
        for fld, p in ((QQ, 0), (F2, 2)):
            for pv in CLASSICAL:
                if ranks(s, classical(pv, s), fld) != want[(name, p)]:
                    bad.append((name, str(fld), pv))
    dt = time.perf_counter() - t0
    return record(1, "IH of trivially stratified manifolds equals ordinary homology", 5, not bad, dt,
                  f"40 cases, mismatches {bad}" if bad else "40 cases (5 spaces x Q,F2 x 4 perversities) exact")


# -- 2 ----------------------------------------------------------------------------------

def criterion_2():
    links = {"C3": spaces.named("S1"), "dDelta3": spaces.sphere_space(2), "T2": spaces.torus_space()}
    t0 = time.perf_counter()
    bad, brute_checked = [], 0
    for name, link in links.items():
        lr = ranks(link, classical("0", link))
        c = cone_space(link)
        apex = c.singular_strata()[0]
        for pv in (-1, 0, 1, 2, 3):
            got = ranks(c, perversity({apex.id: pv}, c))
            if got != list(cone_formula_oracle(lr, pv, link.n).ranks):
                bad.append((name, pv, got))
    dt = time.perf_counter() - t0
    # independent brute force on the same cones
    for name, link in links.items():
        c = cone_space(link)
        lv = oracles.codim_level(c.n, dict(c._level.items()))
        lr = oracles.betti(link.complex.facets)
        for pv in (-1, 0, 1, 2, 3):
            if oracles.ih_betti(c.complex.facets, lv, lambda k, pv=pv: pv) != list(
                    cone_formula_oracle(lr, pv, link.n).ranks):
                bad.append(("oracle", name, pv))
            brute_checked += 1
    return record(2, "cone formula matches IH of cones", 60, not bad, dt,
                  f"15 cones, {brute_checked} brute-force confirmations" + (f", mismatches {bad}" if bad else ""))


# -- 3 ----------------------------------------------------------------------------------

def criterion_3():
    cases = {"S4": spaces.sphere_space(4), "sus-T2": spaces.suspended(spaces.torus_space()),
             "sus-dDelta4": spaces.suspended(spaces.sphere_space(3)),
             "S2 with cone points": spaces.sphere_with_cone_points(2),
             "S4 with cone points": spaces.sphere_with_cone_points(4),
             "S2 + vertex stratum": with_vertex_stratum(spaces.sphere_space(2))}
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    bad, count = [], 0
    for name, s in cases.items():
        perv = [classical(p, s) for p in CLASSICAL] + [random_perversity(s, rng) for _ in range(5)]
        for p in perv:
            count += 1
            if not duality_check(s, p).holds:
                bad.append((name, p.as_dict()))
    dt = time.perf_counter() - t0
    return record(3, "Poincare duality (trivial cover), classical + 5 random perversities", 120, not bad, dt,
                  f"{count} (space, perversity) pairs" + (f", failures {bad}" if bad else " all dual"))


# -- 4, 5 -----------------------------------------------------------------------------------

def cover_examples():
    z2, z3 = FiniteGroup.cyclic(2), FiniteGroup.cyclic(3)
    t2 = spaces.torus_space()
    pinched = spaces.pinched_torus()
    sus_c3 = spaces.suspended(spaces.named("S1"))
    rp2 = spaces.rp2_space()
    return {
        "sus(C3), Z/2 (only double cover: base simply connected)": trivial_cover(sus_c3, z2),
        "RP2 orientation double cover": CoverComplex(rp2, z2, DeckLabeling(z2, cyclic_labelings(rp2.complex, 2)[0])),
        "T2, Z/2": CoverComplex(t2, z2, DeckLabeling(z2, cyclic_labelings(t2.complex, 2)[0])),
        "T2, Z/3": CoverComplex(t2, z3, DeckLabeling(z3, cyclic_labelings(t2.complex, 3)[0])),
        "pinched T2, Z/2": CoverComplex(pinched, z2, DeckLabeling(z2, cyclic_labelings(pinched.complex, 2)[0])),
        "pinched T2, Z/3": CoverComplex(pinched, z3, DeckLabeling(z3, cyclic_labelings(pinched.complex, 3)[0])),
    }


def criterion_4():
    t0 = time.perf_counter()
    bad, rejected, checked = [], [], 0
    for name, cv in cover_examples().items():
        for pv in CLASSICAL:
            p = classical(pv, cv.base)
            try:
                rep = universal_duality_check(cv, p)
            except OrientationRequired:
                rejected.append(name)
                break
            checked += 1
            if not rep.holds:
                bad.append((name, pv))
    dt = time.perf_counter() - t0
    detail = f"{checked} (cover, perversity) pairs dual degreewise"
    if rejected:
        detail += f"; rejected as unoriented (operation precondition): {sorted(set(rejected))}"
    if bad:
        detail += f"; failures {bad}"
    return record(4, "universal duality over nontrivial covers", 120, not bad and checked > 0, dt, detail)


def criterion_5():
    t0 = time.perf_counter()
    bad, iso, total = [], 0, 0
    for name, cv in cover_examples().items():
        for pv in CLASSICAL:
            rep = coinvariants_complex(EquivariantComplex(cv, classical(pv, cv.base)))
            if not rep.homology_agrees:
                bad.append((name, pv))
            total += 1
            iso += all(rep.projection_isomorphism)
    dt = time.perf_counter() - t0
    return record(5, "coinvariants compute base IH", 60, not bad, dt,
                  f"{total} cases agree; chain-level projection is an isomorphism in every degree in {iso}/{total}"
                  + (f"; failures {bad}" if bad else ""))


# -- 6 ----------------------------------------------------------------------------------

def criterion_6():
    cases = {"S2xS2": (spaces.sphere_space(2), spaces.sphere_space(2)),
             "cone(C3)x dDelta3": (spaces.coned(spaces.named("S1")), spaces.sphere_space(2)),
             "sus(T2)xS2": (spaces.suspended(spaces.torus_space()), spaces.sphere_space(2))}
    t0 = time.perf_counter()
    bad = []
    for name, (x, y) in cases.items():
        ps = ProductStratified(x, y)
        for a, b in (("0", "0"), ("m", "n"), ("n", "n")):
            p, q = classical(a, x), classical(b, y)
            kb = kunneth_basis(build_complex(x, p, QQ), build_complex(y, q, QQ),
                               IntersectionChainComplex(ps, product_perversity(p, q, x, y, ps), QQ), strict=False)
            if not (kb.rank_identity and all(kb.independent.values())):
                bad.append((name, a, b, kb.as_dict()))
    dt = time.perf_counter() - t0
    return record(6, "Kunneth rank identity on products", 300, not bad, dt,
                  "9 (product, perversity pair) cases" + (f", failures {bad}" if bad else " hold in every degree"))


# -- 7 ----------------------------------------------------------------------------------

def criterion_7():
    t0 = time.perf_counter()
    got = {
        "sus(T2)": global_witt_check(spaces.suspended(spaces.torus_space()), with_form=False).verdict,
        "sus(dDelta4)": global_witt_check(spaces.suspended(spaces.sphere_space(3)), with_form=False).verdict,
    }
    cone_cp2 = verify_boundary_vanishing(cone_space(spaces.cp2_space()))
    got["cone(CP2) boundary-Witt"] = cone_cp2.hypothesis
    for m in ("S2", "S3", "S4", "T2", "CP2"):
        got[m] = global_witt_check(spaces.named(m), with_form=False).verdict
    dt = time.perf_counter() - t0
    want = {"sus(T2)": False, "sus(dDelta4)": True, "cone(CP2) boundary-Witt": False,
            "S2": True, "S3": True, "S4": True, "T2": True, "CP2": True}
    flagged = any("hypothesis" in n for n in cone_cp2.notes)
    ok = got == want and flagged
    return record(7, "Witt detection", 60, ok, dt,
                  ", ".join(f"{k}: {'pass' if v else 'fail'}" for k, v in got.items())
                  + ("; cone(CP2) flagged as hypothesis failure" if flagged else "; hypothesis flag missing"))


# -- 8 ----------------------------------------------------------------------------------

def criterion_8(include_product: bool = True):
    cp2 = spaces.cp2_space()
    least = min(cp2.orientation.signs)
    oracle = oracles.signature_of(oracles.cup_form(cp2.complex.facets, cp2.orientation.signs[least]))
    t0 = time.perf_counter()
    got = {"CP2": signature(cp2), "S4": signature(spaces.sphere_space(4)),
           "-CP2": signature(reversed_space(cp2)), "CP2+CP2": signature(disjoint_union(cp2, cp2))}
    small = time.perf_counter() - t0
    want = {"CP2": 1, "S4": 0, "-CP2": -1, "CP2+CP2": 2}
    ok = got == want and oracle == 1
    detail = ", ".join(f"{k}={v}" for k, v in got.items()) + f"; cup-product oracle CP2={oracle}"
    dt = small
    if include_product:
        t1 = time.perf_counter()
        rep = verify_product_formula(cp2, cp2)
        dt_prod = time.perf_counter() - t1
        got["CP2xCP2"] = rep.signature_product
        ok = ok and rep.signature_product == 1 and rep.passed and dt_prod <= 20 * 60
        detail += (f", CP2xCP2={rep.signature_product} ({dt_prod:.1f}s; fundamental cycle = cross product: "
                   f"{rep.gamma_cross_is_orientation}, dual pairing: {rep.pairing_is_dual})")
        dt = small + dt_prod
    return record(8, "signature golden values", 60 + 20 * 60, ok and small <= 60, dt, detail)


# -- 9 ----------------------------------------------------------------------------------

def criterion_9():
    t0 = time.perf_counter()
    rep = verify_boundary_vanishing(spaces.cylinder(spaces.cp2_space()))
    dt = time.perf_counter() - t0
    ok = rep.hypothesis and rep.boundary_witt and rep.boundary_signature == 0
    return record(9, "boundary of CP2 x [0,1] is Witt with signature 0", 120, ok, dt,
                  f"boundary Witt: {rep.boundary_witt}, signature {rep.boundary_signature}")


# -- 10 ---------------------------------------------------------------------------------

def criterion_10():
    t0 = time.perf_counter()
    bad = []
    for name in ("S2", "T2", "RP2", "S3", "sus-T2", "sus-S3", "pinched-T2", "S2vS2", "cone-T2"):
        s = spaces.named(name)
        sd = subdivide(s)
        for fld in (QQ, F2):
            for pv in CLASSICAL:
                if ranks(s, classical(pv, s), fld) != ranks(sd, classical(pv, sd), fld):
                    bad.append(("subdivision", name, str(fld), pv))
    for name in ("CP2", "S4"):
        s = spaces.named(name)
        if signature(s) != signature(subdivide(s)):
            bad.append(("subdivision signature", name))
    if signature(reversed_space(spaces.cp2_space())) != signature(subdivide(reversed_space(spaces.cp2_space()))):
        bad.append(("subdivision signature", "-CP2"))
    for name in ("S2", "T2", "S3", "S4", "CP2"):
        s = spaces.named(name)
        r = with_vertex_stratum(s)
        for pv in CLASSICAL:
            if ranks(s, classical(pv, s)) != ranks(r, classical(pv, r)):
                bad.append(("restratification", name, pv))
        if s.n % 4 == 0 and signature(s) != signature(r):
            bad.append(("restratification signature", name))
    dt = time.perf_counter() - t0
    return record(10, "invariance under subdivision and restratification", 600, not bad, dt,
                  "9 spaces x 2 fields x 4 perversities subdivided, 3 signatures subdivided, "
                  "5 manifolds restratified" + (f"; failures {bad}" if bad else ", all invariant"))


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_acceptance(n):
    ok = CRITERIA[n]()
    ok_, title, seconds, budget, detail = RESULTS[n]
    assert ok, f"criterion {n} ({title}): {detail}"


def summary_lines():
    out = []
    for n in sorted(RESULTS):
        ok, title, seconds, budget, detail = RESULTS[n]
        out.append(f"ACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}  {title} [{seconds:.2f}s / {budget:g}s]  {detail}")
    return out


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        CRITERIA[n]()
    print("\n".join(summary_lines()))
