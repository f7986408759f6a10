"""Command-line driver: ``ihsig <command> [flags] FILE ...``.

Exit codes: 0 pass, 1 fail verdict, 2 error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from . import __version__
from .algebra import FieldSpec
from .chains import build_complex, comparison_map_ranks, homology_ranks
from .covers import (CoverComplex, DeckLabeling, EquivariantComplex, FiniteGroup, coinvariants_complex,
                     equivariant_dual_complex, subdivided_labeling, universal_duality_check)
from .products import kunneth_basis
from .simplicial import NonOrientableError
from .spacefile import SpaceFile, SpaceFileError, format_space, parse_space
from .spaces import CATALOG, materialize
from .stratification import (Perversity, ProductStratified, StratificationError, StratifiedComplex,
                             classical, complementary, cone_space, perversity, product_perversity,
                             random_perversity, subdivide_with_carrier, suspension_space,
                             validate_pseudomanifold)
from .witt import (WittError, duality_check, global_witt_check, intersection_form,
                   verify_boundary_vanishing)

COMMANDS = ("validate", "ih", "compare", "duality", "kunneth", "witt", "form", "signature",
            "cover-check", "product", "cone", "suspension", "boundary-check")


class UsageError(ValueError):
    pass


# -- inputs -----------------------------------------------------------------------

class Loaded:
    def __init__(self, label: str, digest: str, space: StratifiedComplex, group=None, labeling=None,
                 subdivisions: int = 0):
        self.label = label
        self.digest = digest
        self.space = space
        self.group = group
        self.labeling = labeling
        self.subdivisions = subdivisions


def _load_raw(ref: str) -> SpaceFile:
    if ref.startswith("named:"):
        name = ref[6:]
        if name not in CATALOG:
            raise UsageError(f"unknown named space {name!r}; known: {', '.join(sorted(CATALOG))}")
        sp = CATALOG[name]()
        digest = hashlib.sha256(ref.encode()).hexdigest()
        return SpaceFile(ref, digest, sp, validate_pseudomanifold(sp))
    return parse_space(ref)


def _subdivide(space, group, labeling, times: int):
    for _ in range(times):
        space, sd = subdivide_with_carrier(space)
        if labeling is not None:
            labeling = subdivided_labeling(labeling, sd)
    return space, labeling


def load(ref: str, mode: str) -> Loaded:
    sf = _load_raw(ref)
    if not sf.validation.passed:
        raise StratificationError(f"{ref}: validation failed: {', '.join(sf.validation.failures())}")
    space, labeling = sf.space, sf.labeling
    count = 0
    if mode != "auto":
        count = int(mode)
        space, labeling = _subdivide(space, sf.group, labeling, count)
    if not space.is_full():
        space, labeling = _subdivide(space, sf.group, labeling, 1)
        count += 1
        if not space.is_full():
            raise StratificationError(f"{ref}: skeleta not full after subdivision")
    return Loaded(ref, sf.digest, space, sf.group, labeling, count)


def resolve_perversity(text: str, space: StratifiedComplex) -> Perversity:
    if text.startswith("custom:"):
        path = Path(text[7:])
        vals: Dict[int, int] = {}
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read perversity file {path}: {exc.strerror}") from None
        for lineno, raw in enumerate(lines, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise UsageError(f"{path}:{lineno}: expected 'stratum-id value'")
            try:
                vals[int(parts[0])] = int(parts[1])
            except ValueError:
                raise UsageError(f"{path}:{lineno}: expected integers") from None
        ids = {st.id for st in space.strata}
        unknown = sorted(set(vals) - ids, key=repr)
        if unknown:
            raise UsageError(f"{path}: unknown stratum ids {unknown}")
        return perversity(vals, space, name=f"custom({path.name})")
    try:
        return classical(text, space)
    except ValueError:
        raise UsageError(f"unknown perversity {text!r} (use 0, t, m, n or custom:FILE)") from None


# -- output ------------------------------------------------------------------------

def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _strata_table(space: StratifiedComplex, p: Optional[Perversity] = None) -> List[dict]:
    vals = p.as_dict() if p is not None else {}
    out = []
    for st in space.strata:
        row = {"id": st.id, "codim": st.codim, "singular": st.is_singular,
               "representative": list(st.representative)}
        if p is not None:
            row["perversity"] = vals.get(st.id, 0)
        out.append(row)
    return out


def _render(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for inp in report["inputs"]:
        lines.append(f"input: {inp['path']} sha256={inp['sha256'][:16]} subdivisions={inp['subdivisions']}")
    cfg = report["config"]
    lines.append("config: " + ", ".join(f"{k}={cfg[k]}" for k in sorted(cfg)))
    for key in sorted(report["result"]):
        val = report["result"][key]
        if isinstance(val, list) and val and all(isinstance(r, dict) and r.keys() == val[0].keys() for r in val):
            lines.append(f"{key}:")
            cols = list(val[0].keys())
            lines.append("  " + " | ".join(cols))
            for row in val:
                lines.append("  " + " | ".join(json.dumps(_plain(row.get(c))) for c in cols))
        elif isinstance(val, dict):
            lines.append(f"{key}:")
            for k in sorted(val, key=str):
                lines.append(f"  {k}: {json.dumps(_plain(val[k]), sort_keys=True)}")
        else:
            lines.append(f"{key}: {json.dumps(_plain(val), sort_keys=True)}")
    if report.get("verdict") is not None:
        lines.append(f"verdict: {'pass' if report['verdict'] else 'fail'}")
    return "\n".join(lines) + "\n"


# -- commands ------------------------------------------------------------------------

def _fld(args) -> FieldSpec:
    try:
        return FieldSpec.parse(args.field)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_validate(args, inputs):
    sf = _load_raw(args.files[0])
    rep = validate_pseudomanifold(sf.space)
    res = {"checks": rep.checks, "certificates": {k: repr(v) for k, v in rep.certificates.items()},
           "notes": rep.notes, "strata": _strata_table(sf.space), "f_vector": sf.space.complex.f_vector(),
           "orientable": sf.space.is_orientable() if rep.passed else None}
    inputs.append(Loaded(args.files[0], sf.digest, sf.space))
    return res, rep.passed


def cmd_ih(args, inputs):
    ld = load(args.files[0], args.subdivide)
    inputs.append(ld)
    fld = _fld(args)
    p = resolve_perversity(args.perversity or "n", ld.space)
    rel = "boundary" if args.relative else None
    ranks = homology_ranks(build_complex(ld.space, p, fld, rel))
    res = {"ranks": list(ranks.ranks), "strata": _strata_table(ld.space, p), "relative": bool(args.relative)}
    if args.stability:
        res["stability"] = _stability(ld, lambda sp: list(homology_ranks(
            build_complex(sp, _transport(p, ld.space, sp), fld, rel)).ranks), list(ranks.ranks))
    return res, None


def _transport(p: Perversity, old: StratifiedComplex, new: StratifiedComplex) -> Perversity:
    """Carry per-stratum values to a subdivision (strata matched by level and rank order)."""
    if p.name in ("0", "t", "n", "m"):
        return classical(p.name, new)
    old_by = {}
    for st in old.strata:
        old_by.setdefault(st.level, []).append(st.id)
    new_by = {}
    for st in new.strata:
        new_by.setdefault(st.level, []).append(st.id)
    vals = p.as_dict()
    out = {}
    for lvl, ids in new_by.items():
        for a, b in zip(old_by.get(lvl, []), ids):
            out[b] = vals.get(a, 0)
    return perversity(out, new, p.name)


def _stability(ld: Loaded, compute, first):
    sp, _ = _subdivide(ld.space, ld.group, ld.labeling, 1)
    second = compute(sp)
    out = {"extra_subdivision": second, "stable": second == first}
    if second != first:
        sp2, _ = _subdivide(sp, ld.group, None, 1)
        third = compute(sp2)
        out["escalated"] = third
        out["stable_after_escalation"] = third == second
    return out


def cmd_compare(args, inputs):
    ld = load(args.files[0], args.subdivide)
    inputs.append(ld)
    fld = _fld(args)
    lo = resolve_perversity(args.low, ld.space)
    hi = resolve_perversity(args.high, ld.space)
    try:
        rep = comparison_map_ranks(build_complex(ld.space, lo, fld), build_complex(ld.space, hi, fld))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return rep.as_dict(), rep.isomorphism


def cmd_duality(args, inputs):
    ld = load(args.files[0], args.subdivide)
    inputs.append(ld)
    fld = _fld(args)
    if args.perversity:
        perv = [resolve_perversity(args.perversity, ld.space)]
    else:
        perv = [classical(x, ld.space) for x in ("0", "m", "n", "t")]
        rng = random.Random(args.seed)
        for i in range(args.random):
            rp = random_perversity(ld.space, rng)
            perv.append(Perversity(rp.values, f"random-{i}"))
    rows = []
    ok = True
    for p in perv:
        r = duality_check(ld.space, p, fld)
        ok &= r.holds
        rows.append({"perversity": p.name, "values": [v for _, v in sorted(p.as_dict().items(), key=repr)],
                     "ranks": r.ranks, "dual_ranks": r.dual_ranks, "holds": r.holds})
    return {"table": rows}, ok


def cmd_kunneth(args, inputs):
    if len(args.files) != 2:
        raise UsageError("kunneth needs two space files")
    a, b = load(args.files[0], args.subdivide), load(args.files[1], args.subdivide)
    inputs.extend([a, b])
    fld = _fld(args)
    p = resolve_perversity(args.perversity or "n", a.space)
    q = resolve_perversity(args.perversity2 or args.perversity or "n", b.space)
    ps = ProductStratified(a.space, b.space)
    Q = product_perversity(p, q, a.space, b.space, ps)
    from .chains import IntersectionChainComplex
    kb = kunneth_basis(build_complex(a.space, p, fld), build_complex(b.space, q, fld),
                       IntersectionChainComplex(ps, Q, fld), strict=False)
    rows = [{"k": k, "sum_of_products": kb.expected[k], "product_rank": kb.actual[k],
             "independent": kb.independent[k]} for k in sorted(kb.expected)]
    return {"table": rows}, kb.rank_identity and all(kb.independent.values())


def _cover_of(ld: Loaded) -> Optional[CoverComplex]:
    if ld.group is None:
        return None
    return CoverComplex(ld.space, ld.group, ld.labeling or DeckLabeling(ld.group))


def cmd_witt(args, inputs):
    ld = load(args.files[0], args.subdivide)
    inputs.append(ld)
    rep = global_witt_check(ld.space, _fld(args), _cover_of(ld), with_form=not args.no_form)
    res = rep.as_dict()
    res.pop("verdict", None)
    return res, rep.verdict


def cmd_form(args, inputs):
    ld = load(args.files[0], args.subdivide)
    inputs.append(ld)
    f = intersection_form(ld.space, _fld(args), args.route)
    return f.as_dict(), f.invariants.is_nondegenerate


def cmd_signature(args, inputs):
    ld = load(args.files[0], args.subdivide)
    inputs.append(ld)
    fld = _fld(args)
    if not fld.is_rational:
        raise UsageError("signature is defined over the rationals (use --field q)")
    if ld.space.n % 4:
        res = {"signature": 0, "note": "dimension not divisible by 4; signature is 0 by convention"}
        return res, None
    f = intersection_form(ld.space, fld, args.route)
    res = {"signature": f.signature, "rank": f.invariants.rank, "route": f.route}
    if args.stability:
        res["stability"] = _stability(ld, lambda sp: intersection_form(sp, fld, args.route).signature,
                                      f.signature)
    return res, None


def cmd_cover_check(args, inputs):
    ld = load(args.files[0], args.subdivide)
    inputs.append(ld)
    if ld.group is None:
        raise UsageError("cover-check needs a file with group and edge directives")
    fld = _fld(args)
    cv = _cover_of(ld)
    p = resolve_perversity(args.perversity or "n", ld.space)
    e = EquivariantComplex(cv, p, fld)
    structure = cv.verify()
    structure.update(e.check_invariants())
    structure["connected"] = cv.is_connected()
    coinv = coinvariants_complex(e)
    dual = equivariant_dual_complex(e)
    ud = universal_duality_check(cv, p, fld)
    chi_cover, chi_base = e.complex.euler_characteristic(), e.base_complex.euler_characteristic()
    res = {"structure": structure, "coinvariants": coinv.as_dict(), "dual_complex": dual.as_dict(),
           "universal_duality": ud.rows,
           "euler": {"cover": chi_cover, "base": chi_base, "multiplicative": chi_cover == cv.group.order * chi_base}}
    ok = (all(structure.values()) and coinv.homology_agrees and dual.square_zero and ud.holds
          and chi_cover == cv.group.order * chi_base)
    return res, ok


def _write_output(args, space: StratifiedComplex, comment: str):
    if not args.output:
        raise UsageError("constructor commands need -o OUT")
    Path(args.output).write_text(format_space(space, comment=comment), encoding="utf-8")
    rt = parse_space(args.output)
    same = (rt.space.complex.facets == space.complex.facets
            and {s: lv for s, lv in rt.space._level.items()} == dict(space._level.items())
            and rt.space.boundary_faces == space.boundary_faces)
    return {"written": args.output, "f_vector": space.complex.f_vector(), "round_trip": same,
            "valid": rt.validation.passed}, same


def cmd_product(args, inputs):
    if len(args.files) != 2:
        raise UsageError("product needs two space files")
    a, b = load(args.files[0], "0"), load(args.files[1], "0")
    inputs.extend([a, b])
    sp = materialize(ProductStratified(a.space, b.space))
    return _write_output(args, sp, f"product of {a.label} and {b.label}")


def cmd_cone(args, inputs):
    a = load(args.files[0], "0")
    inputs.append(a)
    return _write_output(args, cone_space(a.space), f"cone on {a.label}")


def cmd_suspension(args, inputs):
    a = load(args.files[0], "0")
    inputs.append(a)
    return _write_output(args, suspension_space(a.space), f"suspension of {a.label}")


def cmd_boundary_check(args, inputs):
    ld = load(args.files[0], args.subdivide)
    inputs.append(ld)
    rep = verify_boundary_vanishing(ld.space)
    return rep.as_dict(), rep.passed


HANDLERS = {
    "validate": cmd_validate, "ih": cmd_ih, "compare": cmd_compare, "duality": cmd_duality,
    "kunneth": cmd_kunneth, "witt": cmd_witt, "form": cmd_form, "signature": cmd_signature,
    "cover-check": cmd_cover_check, "product": cmd_product, "cone": cmd_cone,
    "suspension": cmd_suspension, "boundary-check": cmd_boundary_check,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ihsig", description="Intersection homology and Witt signatures "
                                 "of triangulated stratified pseudomanifolds.")
    ap.add_argument("--version", action="version", version=f"ihsig {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("files", nargs="+", help="space files, or named:NAME for a built-in space")
    ap.add_argument("--field", default="q", help="q (rationals) or p:K for the prime field F_K")
    ap.add_argument("--perversity", help="0, t, m, n or custom:FILE")
    ap.add_argument("--perversity2", help="perversity on the second factor (kunneth)")
    ap.add_argument("--low", default="m", help="lower perversity (compare)")
    ap.add_argument("--high", default="n", help="upper perversity (compare)")
    ap.add_argument("--subdivide", default="auto",
                    help="'auto' subdivides only until skeleta are full; N forces N subdivisions")
    ap.add_argument("--stability", action="store_true", help="recompute after one extra subdivision")
    ap.add_argument("--relative", action="store_true", help="homology relative to the declared boundary")
    ap.add_argument("--route", default="auto", choices=("auto", "diagonal", "cochain", "both"))
    ap.add_argument("--no-form", action="store_true", help="witt: skip the intersection form")
    ap.add_argument("--random", type=int, default=5, help="duality: number of random perversities")
    ap.add_argument("--seed", type=int, default=0, help="seed for random perversities")
    ap.add_argument("--json", dest="json_out", metavar="OUT", help="also write the report as JSON")
    ap.add_argument("-o", "--output", help="output file for cone/suspension/product")
    return ap


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.subdivide != "auto":
        try:
            if int(args.subdivide) < 0:
                raise ValueError
        except ValueError:
            print("error: --subdivide takes 'auto' or a nonnegative integer", file=stderr)
            return 2
    inputs: List[Loaded] = []
    try:
        result, verdict = HANDLERS[args.command](args, inputs)
    except (SpaceFileError, UsageError, StratificationError, WittError, NonOrientableError, ArithmeticError,
            ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=stderr)
        return 2
    cfg = {"field": str(FieldSpec.parse(args.field)), "subdivide": args.subdivide}
    if args.perversity:
        cfg["perversity"] = args.perversity
    if args.command == "duality":
        cfg["seed"] = args.seed
        cfg["random"] = args.random
    if args.command in ("form", "signature"):
        cfg["route"] = args.route
    report = {"command": args.command, "version": __version__,
              "inputs": [{"path": i.label, "sha256": i.digest, "subdivisions": i.subdivisions} for i in inputs],
              "config": cfg, "result": _plain(result), "verdict": verdict}
    stdout.write(_render(report))
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return 1 if verdict is False else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
