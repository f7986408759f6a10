"""Reader and writer for the line-oriented space description format.

::

    dim N
    simplex v0 v1 ... vN            # top simplices
    skeleton K: v0 ... vJ           # a J-simplex generating part of X^K
    boundary: v0 ... v{N-1}         # boundary top simplices
    orient s +1|-1                  # orientation of the s-th simplex line
    group order=M row i: g0 ... g(M-1)
    edge u v g                      # deck labeling; unlisted edges = identity
    collar                          # assert the boundary has a collar
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .covers import CocycleError, DeckLabeling, FiniteGroup, GroupAxiomError
from .simplicial import NonOrientableError, SimplicialComplex, orient_top
from .stratification import StratifiedComplex, ValidationReport, validate_pseudomanifold


class SpaceFileError(ValueError):
    """Syntax or semantic error, located by line and column (1-based)."""

    def __init__(self, message: str, line: int = 0, column: int = 0, path: str = ""):
        loc = f"{path or '<input>'}:{line}:{column}: " if line else ""
        super().__init__(loc + message)
        self.line = line
        self.column = column


@dataclass
class SpaceFile:
    path: str
    digest: str
    space: StratifiedComplex
    validation: ValidationReport
    group: Optional[FiniteGroup] = None
    labeling: Optional[DeckLabeling] = None

    @property
    def has_cover(self) -> bool:
        return self.group is not None


def _ints(tokens: List[str], lineno: int, col0: int, line: str, path: str) -> List[int]:
    out = []
    for t in tokens:
        try:
            v = int(t)
        except ValueError:
            raise SpaceFileError(f"expected an integer, got {t!r}", lineno, line.find(t, col0) + 1, path) from None
        if v < 0:
            raise SpaceFileError(f"negative integer {v}", lineno, line.find(t, col0) + 1, path)
        out.append(v)
    return out


def parse_text(text: str, path: str = "<input>") -> SpaceFile:
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    dim: Optional[int] = None
    tops: List[Tuple[int, ...]] = []
    top_lines: List[int] = []
    skeleta: Dict[int, List[Tuple[int, ...]]] = {}
    skel_lines: List[Tuple[int, int, Tuple[int, ...]]] = []
    boundary: List[Tuple[int, ...]] = []
    orient: Dict[int, Tuple[int, int]] = {}
    group_order: Optional[int] = None
    rows: Dict[int, List[int]] = {}
    edges: Dict[Tuple[int, int], int] = {}
    edge_lines: Dict[Tuple[int, int], int] = {}
    collar = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        tokens = line.split()
        head = tokens[0]
        col = line.find(head) + 1
        if head == "dim":
            if len(tokens) != 2:
                raise SpaceFileError("usage: dim N", lineno, col, path)
            if dim is not None:
                raise SpaceFileError("duplicate dim directive", lineno, col, path)
            dim = _ints(tokens[1:], lineno, col, line, path)[0]
        elif head == "simplex":
            vs = _ints(tokens[1:], lineno, col + 7, line, path)
            if dim is None:
                raise SpaceFileError("simplex before dim", lineno, col, path)
            if len(vs) != dim + 1 or len(set(vs)) != len(vs):
                raise SpaceFileError(f"a top simplex needs {dim + 1} distinct vertices", lineno, col, path)
            tops.append(tuple(sorted(vs)))
            top_lines.append(lineno)
        elif head == "skeleton":
            if len(tokens) < 3 or not tokens[1].endswith(":"):
                raise SpaceFileError("usage: skeleton K: v0 ... vJ", lineno, col, path)
            k = _ints([tokens[1][:-1]], lineno, col, line, path)[0]
            vs = _ints(tokens[2:], lineno, line.find(":") + 1, line, path)
            if len(set(vs)) != len(vs):
                raise SpaceFileError("repeated vertex in skeleton simplex", lineno, col, path)
            s = tuple(sorted(vs))
            skeleta.setdefault(k, []).append(s)
            skel_lines.append((lineno, k, s))
        elif head == "boundary:":
            vs = _ints(tokens[1:], lineno, col + 9, line, path)
            if dim is None or len(vs) != dim or len(set(vs)) != len(vs):
                raise SpaceFileError("boundary simplices need dim distinct vertices", lineno, col, path)
            boundary.append(tuple(sorted(vs)))
        elif head == "orient":
            if len(tokens) != 3 or tokens[2] not in ("+1", "-1", "1"):
                raise SpaceFileError("usage: orient s +1|-1", lineno, col, path)
            idx = _ints([tokens[1]], lineno, col, line, path)[0]
            orient[idx] = (-1 if tokens[2] == "-1" else 1, lineno)
        elif head == "group":
            if len(tokens) < 4 or not tokens[1].startswith("order=") or tokens[2] != "row" \
                    or not tokens[3].endswith(":"):
                raise SpaceFileError("usage: group order=M row i: g0 ... g(M-1)", lineno, col, path)
            m = _ints([tokens[1][6:]], lineno, col, line, path)[0]
            if group_order is not None and m != group_order:
                raise SpaceFileError("inconsistent group order", lineno, col, path)
            group_order = m
            i = _ints([tokens[3][:-1]], lineno, col, line, path)[0]
            row = _ints(tokens[4:], lineno, line.find(":") + 1, line, path)
            if len(row) != m:
                raise SpaceFileError(f"row {i} has {len(row)} entries, expected {m}", lineno, col, path)
            if i in rows:
                raise SpaceFileError(f"duplicate row {i}", lineno, col, path)
            rows[i] = row
        elif head == "edge":
            if len(tokens) != 4:
                raise SpaceFileError("usage: edge u v g", lineno, col, path)
            u, v, g = _ints(tokens[1:], lineno, col, line, path)
            if u == v:
                raise SpaceFileError("edge endpoints must differ", lineno, col, path)
            edges[(u, v)] = g
            edge_lines[(min(u, v), max(u, v))] = lineno
        elif head == "collar":
            collar = True
        else:
            raise SpaceFileError(f"unknown directive {head!r}", lineno, col, path)
    if dim is None:
        raise SpaceFileError("missing dim directive", 0, 0, path)
    if not tops:
        raise SpaceFileError("no simplex lines", 0, 0, path)
    k = SimplicialComplex(tops, name=Path(path).stem if path != "<input>" else "space")
    for lineno, lvl, s in skel_lines:
        if s not in k:
            raise SpaceFileError(f"skeleton simplex {s} is not a simplex of the complex", lineno, 1, path)
        if not 0 <= lvl < dim:
            raise SpaceFileError(f"skeleton level {lvl} must lie in 0..{dim - 1}", lineno, 1, path)
        if len(s) - 1 > lvl:
            raise SpaceFileError(f"{len(s) - 1}-simplex {s} cannot lie in X^{lvl}", lineno, 1, path)
    # nested skeleta: X^K contains X^{K-1}; generators at lower levels are automatically included
    for b in boundary:
        if b not in k:
            raise SpaceFileError(f"boundary simplex {b} is not a simplex of the complex", 0, 0, path)
    space = StratifiedComplex(k, skeleta, boundary, None, collar, name=k.name)
    if orient:
        prescribed = {}
        for idx, (sgn, lineno) in orient.items():
            if idx >= len(tops):
                raise SpaceFileError(f"orient index {idx} out of range", lineno, 1, path)
            prescribed[tops[idx]] = sgn
        try:
            space._orientation = orient_top(k, space.exempt_faces(), prescribed)
        except NonOrientableError as exc:
            raise SpaceFileError(f"orientation: {exc}", min(l for _, l in orient.values()), 1, path) from None
    group = labeling = None
    if group_order is not None:
        if sorted(rows) != list(range(group_order)):
            raise SpaceFileError(f"group table needs rows 0..{group_order - 1}", 0, 0, path)
        try:
            group = FiniteGroup([rows[i] for i in range(group_order)])
        except GroupAxiomError as exc:
            raise SpaceFileError(f"group: {exc}", 0, 0, path) from None
        try:
            labeling = DeckLabeling(group, edges)
            labeling.check_cocycle(k)
        except CocycleError as exc:
            line = edge_lines.get(tuple(exc.triangle[:2]), 0) if len(exc.triangle) == 2 else 0
            raise SpaceFileError(f"deck labeling: {exc}", line, 1, path) from None
        except ValueError as exc:
            raise SpaceFileError(f"deck labeling: {exc}", 0, 0, path) from None
    elif edges:
        raise SpaceFileError("edge labels given without a group", min(edge_lines.values()), 1, path)
    return SpaceFile(path, digest, space, validate_pseudomanifold(space), group, labeling)


def parse_space(path: Union[str, Path]) -> SpaceFile:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpaceFileError(f"cannot read {p}: {exc.strerror}") from None
    return parse_text(text, str(p))


def format_space(space: StratifiedComplex, group: Optional[FiniteGroup] = None,
                 labeling: Optional[DeckLabeling] = None, comment: str = "") -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    k = space.complex
    lines.append(f"dim {space.n}")
    tops = k.facets
    for s in tops:
        lines.append("simplex " + " ".join(map(str, s)))
    for lvl in sorted(space.generators):
        gens = space.generators[lvl]
        gs = set(gens)
        maximal = [g for g in gens if not any(len(h) > len(g) and set(g) <= set(h) for h in gs)]
        for g in sorted(maximal):
            lines.append(f"skeleton {lvl}: " + " ".join(map(str, g)))
    for b in space.boundary_faces:
        lines.append("boundary: " + " ".join(map(str, b)))
    if space.collar_asserted:
        lines.append("collar")
    if space.is_orientable():
        signs = space.orientation.signs
        for i, s in enumerate(tops):
            if s in signs:
                lines.append(f"orient {i} {'+1' if signs[s] > 0 else '-1'}")
    if group is not None:
        for i, row in enumerate(group.table):
            lines.append(f"group order={group.order} row {i}: " + " ".join(map(str, row)))
        if labeling is not None:
            for (u, v), g in sorted(labeling.labels.items()):
                if g != group.identity:
                    lines.append(f"edge {u} {v} {g}")
    return "\n".join(lines) + "\n"


def write_space(space: StratifiedComplex, path: Union[str, Path], group=None, labeling=None,
                comment: str = "") -> None:
    Path(path).write_text(format_space(space, group, labeling, comment), encoding="utf-8")
