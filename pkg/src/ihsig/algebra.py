"""Exact linear algebra over the rationals and prime fields.

Vectors are sparse ``dict`` objects mapping an integer index to a nonzero
field element.  Rational elements are Python ``int`` when integral and
``fractions.Fraction`` otherwise; prime-field elements are ``int`` in
``range(p)``.  Nothing here ever touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Vector = Dict[int, object]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: ``characteristic == 0`` means the rationals."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"characteristic {self.characteristic} is not prime")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``q``/``Q``/``rationals`` or ``p:K``/``fK``."""
        t = text.strip().lower()
        if t in ("q", "qq", "rationals", "0"):
            return cls(0)
        for prefix in ("p:", "f", "gf"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls(int(t[len(prefix):]))
        raise ValueError(f"unrecognised field {text!r}")

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"F_{self.characteristic}"

    # -- element arithmetic -------------------------------------------------
    def __call__(self, x):
        p = self.characteristic
        if p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, p)) % p
            return int(x) % p
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, int):
            return x
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else x

    def inv(self, x):
        p = self.characteristic
        if p:
            return pow(x, -1, p)
        if x == 1 or x == -1:
            return x
        r = Fraction(1) / x
        return r.numerator if r.denominator == 1 else r

    def mul(self, a, b):
        p = self.characteristic
        if p:
            return a * b % p
        r = a * b
        if r.__class__ is Fraction and r.denominator == 1:
            return r.numerator
        return r

    def add(self, a, b):
        p = self.characteristic
        if p:
            return (a + b) % p
        r = a + b
        if r.__class__ is Fraction and r.denominator == 1:
            return r.numerator
        return r

    def neg(self, a):
        p = self.characteristic
        return (-a) % p if p else -a

    def is_square(self, a) -> bool:
        """Square test in F_p (p odd) by Euler's criterion."""
        p = self.characteristic
        if not p:
            raise ValueError("square classes are only tracked over prime fields")
        a %= p
        if a == 0 or p == 2:
            return True
        return pow(a, (p - 1) // 2, p) == 1


QQ = FieldSpec(0)


def axpy(y: Vector, a, x: Vector, fld: FieldSpec) -> None:
    """In place ``y += a * x``; zero entries are removed."""
    p = fld.characteristic
    get = y.get
    if p:
        for k, v in x.items():
            nv = (get(k, 0) + a * v) % p
            if nv:
                y[k] = nv
            else:
                y.pop(k, None)
    else:
        frac = Fraction
        for k, v in x.items():
            nv = get(k, 0) + a * v
            if nv:
                if nv.__class__ is frac and nv.denominator == 1:
                    nv = nv.numerator
                y[k] = nv
            else:
                y.pop(k, None)


def scale(x: Vector, a, fld: FieldSpec) -> Vector:
    if a == 1:
        return dict(x)
    return {k: fld.mul(v, a) for k, v in x.items()}


def dot(x: Vector, y: Vector, fld: FieldSpec):
    if len(x) > len(y):
        x, y = y, x
    s = 0
    for k, v in x.items():
        w = y.get(k)
        if w is not None:
            s = s + v * w
    return fld(s)


class EchelonBasis:
    """Incremental echelon basis of a subspace, pivoting on the largest index.

    Each stored pivot vector is normalised to have entry 1 at its pivot.  When
    ``track`` is on, every stored vector carries the combination of inserted
    vectors (keyed by the ``tag`` given to :meth:`add`) that produces it.
    """

    def __init__(self, fld: FieldSpec = QQ, track: bool = False):
        self.field = fld
        self.track = track
        self.pivots: Dict[int, Tuple[Vector, Optional[Vector]]] = {}

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Vector, combo: Optional[Vector] = None):
        """Reduce ``vec`` in place; return its leading index or ``None``."""
        fld = self.field
        pivots = self.pivots
        while vec:
            low = max(vec)
            hit = pivots.get(low)
            if hit is None:
                return low
            pv, pc = hit
            f = fld.neg(vec[low])
            axpy(vec, f, pv, fld)
            if combo is not None and pc is not None:
                axpy(combo, f, pc, fld)
        return None

    def add(self, vec: Vector, tag=None) -> bool:
        """Insert a copy of ``vec``; return ``True`` if it enlarged the span."""
        v = dict(vec)
        combo = {tag: 1} if self.track else None
        low = self.reduce(v, combo)
        if low is None:
            self._last_dependency = combo
            return False
        c = self.field.inv(v[low])
        v = scale(v, c, self.field)
        if combo is not None:
            combo = scale(combo, c, self.field)
        self.pivots[low] = (v, combo)
        self._last_dependency = None
        return True

    def contains(self, vec: Vector) -> bool:
        return self.reduce(dict(vec)) is None

    def express(self, vec: Vector) -> Optional[Vector]:
        """Coordinates of ``vec`` over the inserted tags, or ``None``."""
        if not self.track:
            raise ValueError("express() needs a tracking basis")
        v = dict(vec)
        combo: Vector = {}
        fld = self.field
        pivots = self.pivots
        while v:
            low = max(v)
            hit = pivots.get(low)
            if hit is None:
                return None
            pv, pc = hit
            f = v[low]
            axpy(v, fld.neg(f), pv, fld)
            axpy(combo, f, pc, fld)
        return combo


@dataclass
class ExactMatrix:
    """Sparse matrix stored by columns."""

    rows: int
    cols: int
    columns: List[Vector]
    field: FieldSpec = field(default=QQ)

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise ValueError("column count mismatch")

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], fld: FieldSpec = QQ) -> "ExactMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        columns = [{} for _ in range(cols)]
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for j, x in enumerate(row):
                x = fld(x)
                if x:
                    columns[j][i] = x
        return cls(rows, cols, columns, fld)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Dict[Tuple[int, int], object],
                     fld: FieldSpec = QQ) -> "ExactMatrix":
        columns = [{} for _ in range(cols)]
        for (i, j), x in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError((i, j))
            x = fld(x)
            if x:
                columns[j][i] = x
        return cls(rows, cols, columns, fld)

    @classmethod
    def zeros(cls, rows: int, cols: int, fld: FieldSpec = QQ) -> "ExactMatrix":
        return cls(rows, cols, [{} for _ in range(cols)], fld)

    def to_dense(self) -> List[List]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                out[i][j] = x
        return out

    def transpose(self) -> "ExactMatrix":
        columns = [{} for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                columns[i][j] = x
        return ExactMatrix(self.cols, self.rows, columns, self.field)

    def __getitem__(self, ij):
        i, j = ij
        return self.columns[j].get(i, 0)

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "ExactMatrix":
        """Matrix with rows/columns reordered: new row ``k`` is old row ``row_perm[k]``."""
        inv_row = {old: new for new, old in enumerate(row_perm)}
        columns = [{inv_row[i]: x for i, x in self.columns[old].items()} for old in col_perm]
        return ExactMatrix(self.rows, self.cols, columns, self.field)

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for j, c in vec.items():
            axpy(out, c, self.columns[j], self.field)
        return out


def rank(m: ExactMatrix) -> int:
    """Exact rank over the matrix's field."""
    return column_rank(m.columns, m.field)


def column_rank(columns: Iterable[Vector], fld: FieldSpec) -> int:
    eb = EchelonBasis(fld)
    for col in columns:
        if col:
            eb.add(col)
    return eb.rank


def kernel_basis(m: ExactMatrix) -> List[Vector]:
    """Basis of the right null space as sparse vectors indexed by column."""
    return kernel_of_columns(m.columns, m.field)


def kernel_of_columns(columns: Sequence[Vector], fld: FieldSpec) -> List[Vector]:
    eb = EchelonBasis(fld, track=True)
    kernel = []
    for j, col in enumerate(columns):
        if not col:
            kernel.append({j: 1})
            continue
        if not eb.add(col, tag=j):
            kernel.append(eb._last_dependency)
    return kernel


def solve_in_span(targets: ExactMatrix, vector: Vector) -> Optional[Vector]:
    """Coordinates ``c`` with ``targets @ c == vector``, or ``None``."""
    eb = EchelonBasis(targets.field, track=True)
    for j, col in enumerate(targets.columns):
        if col:
            eb.add(col, tag=j)
    if not vector:
        return {}
    return eb.express({k: targets.field(v) for k, v in vector.items() if targets.field(v)})


@dataclass(frozen=True)
class SymmetricFormInvariants:
    """Rank, signature (rationals) and discriminant class of a bilinear form."""

    field: FieldSpec
    size: int
    rank: int
    is_symmetric: bool
    is_nondegenerate: bool
    signature: Optional[int] = None
    discriminant: object = None
    discriminant_is_square: Optional[bool] = None
    diagonal: Tuple = ()

    def as_dict(self) -> dict:
        d = {
            "field": str(self.field),
            "size": self.size,
            "rank": self.rank,
            "is_symmetric": self.is_symmetric,
            "is_nondegenerate": self.is_nondegenerate,
            "signature": self.signature,
            "discriminant": _jsonable(self.discriminant),
        }
        if self.discriminant_is_square is not None:
            d["discriminant_is_square"] = self.discriminant_is_square
        return d


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    return x


def _squarefree_rational(x: Fraction) -> int:
    """Squarefree integer in the square class of a nonzero rational."""
    x = Fraction(x)
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
        if n % d == 0:
            out *= d
            n //= d
        d += 1
    return sign * out * n


def congruence_diagonalize(b: Sequence[Sequence], fld: FieldSpec):
    """Diagonalise a symmetric matrix by congruence.

    Returns the diagonal entries (zeros included).  In characteristic 2 a
    remaining alternating block is split into hyperbolic planes, each
    contributing ``(None, None)`` markers to the diagonal list.
    """
    n = len(b)
    a = [[fld(x) for x in row] for row in b]
    diag = []
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j]), None)
            if pair is None:
                diag.extend([0] * (n - k))
                break
            i, j = pair
            if fld.characteristic != 2:
                # row/col i += row/col j makes a[i][i] = 2 a[i][j] != 0
                for t in range(n):
                    a[i][t] = fld.add(a[i][t], a[j][t])
                for t in range(n):
                    a[t][i] = fld.add(a[t][i], a[t][j])
                piv = i
            else:
                # hyperbolic plane spanned by i, j: clear it off the rest
                _swap(a, k, i)
                _swap(a, k + 1, j if j != k else i)
                h = a[k][k + 1]
                hinv = fld.inv(h)
                for t in range(k + 2, n):
                    # kill a[t][k] using column k+1, a[t][k+1] using column k
                    c1 = fld.mul(a[t][k], hinv)
                    c2 = fld.mul(a[t][k + 1], hinv)
                    for s in range(n):
                        a[t][s] = fld.add(a[t][s], fld.neg(fld.add(fld.mul(c1, a[k + 1][s]),
                                                                     fld.mul(c2, a[k][s]))))
                    for s in range(n):
                        a[s][t] = fld.add(a[s][t], fld.neg(fld.add(fld.mul(c1, a[s][k + 1]),
                                                                     fld.mul(c2, a[s][k]))))
                diag.extend([(None, h), (None, h)])
                k += 2
                continue
        _swap(a, k, piv)
        d = a[k][k]
        dinv = fld.inv(d)
        for t in range(k + 1, n):
            c = fld.mul(a[t][k], dinv)
            if c:
                for s in range(k, n):
                    a[t][s] = fld.add(a[t][s], fld.neg(fld.mul(c, a[k][s])))
                for s in range(k, n):
                    a[s][t] = fld.add(a[s][t], fld.neg(fld.mul(c, a[s][k])))
        diag.append(d)
        k += 1
    return diag


def _swap(a, i, j):
    if i == j:
        return
    a[i], a[j] = a[j], a[i]
    for row in a:
        row[i], row[j] = row[j], row[i]


def symmetric_invariants(b, fld: Optional[FieldSpec] = None) -> SymmetricFormInvariants:
    """Rank, signature and discriminant of a square bilinear form."""
    if isinstance(b, ExactMatrix):
        fld = fld or b.field
        if b.rows != b.cols:
            raise ValueError("form matrix must be square")
        dense = b.to_dense()
    else:
        fld = fld or QQ
        dense = [list(r) for r in b]
        if any(len(r) != len(dense) for r in dense):
            raise ValueError("form matrix must be square")
    dense = [[fld(x) for x in r] for r in dense]
    n = len(dense)
    sym = all(dense[i][j] == dense[j][i] for i in range(n) for j in range(i))
    r = column_rank(ExactMatrix.from_dense(dense, fld).columns, fld) if n else 0
    nondeg = r == n
    if not sym:
        return SymmetricFormInvariants(fld, n, r, False, nondeg)
    diag = congruence_diagonalize(dense, fld)
    signature = None
    disc = 0
    disc_sq = None
    if fld.is_rational:
        signature = sum(1 for d in diag if d > 0) - sum(1 for d in diag if d < 0)
        if nondeg:
            prod = Fraction(1)
            for d in diag:
                prod *= d
            disc = _squarefree_rational(prod)
    else:
        if nondeg:
            # each hyperbolic plane contributes det -h^2, i.e. the class of -1
            planes = sum(1 for d in diag if isinstance(d, tuple)) // 2
            prod = 1
            for d in diag:
                if not isinstance(d, tuple):
                    prod = fld.mul(prod, d)
            for _ in range(planes):
                prod = fld.mul(prod, fld.neg(1))
            disc = prod
            disc_sq = fld.is_square(prod) if fld.characteristic != 2 else True
    return SymmetricFormInvariants(fld, n, r, True, nondeg, signature, disc, disc_sq,
                                   tuple(diag))
