"""Exact rational sparse linear algebra.

Vectors and matrices are stored sparsely with ``fractions.Fraction`` entries,
so every result below is exact: reduced row echelon form, nullspace bases,
feasibility of ``A x = b`` with Farkas-style infeasibility certificates, and
span membership. No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(value) -> Fraction:
    """Coerce ints, strings like ``3/4`` and Fractions to an exact Scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact scalar: {value!r}")


class SparseVec:
    """Finitely supported map key -> nonzero Scalar.

    Keys may be any orderable hashable values (basis keys, column indices).
    Zero entries are never stored; equality is entrywise.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Optional[Mapping] = None):
        cleaned = {}
        if entries:
            for k, v in entries.items():
                v = as_scalar(v)
                if v:
                    cleaned[k] = v
        self._entries = cleaned

    @property
    def entries(self) -> dict:
        return dict(self._entries)

    def get(self, key) -> Fraction:
        return self._entries.get(key, ZERO)

    def __getitem__(self, key) -> Fraction:
        return self._entries.get(key, ZERO)

    def __contains__(self, key) -> bool:
        return key in self._entries

    def support(self) -> list:
        return sorted(self._entries)

    def items(self) -> list:
        return sorted(self._entries.items())

    def is_zero(self) -> bool:
        return not self._entries

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVec):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def __add__(self, other: "SparseVec") -> "SparseVec":
        out = dict(self._entries)
        for k, v in other._entries.items():
            nv = out.get(k, ZERO) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return SparseVec(out)

    def __sub__(self, other: "SparseVec") -> "SparseVec":
        return self + (-other)

    def __neg__(self) -> "SparseVec":
        return SparseVec({k: -v for k, v in self._entries.items()})

    def scaled(self, factor) -> "SparseVec":
        factor = as_scalar(factor)
        if not factor:
            return SparseVec()
        return SparseVec({k: factor * v for k, v in self._entries.items()})

    def __rmul__(self, factor) -> "SparseVec":
        return self.scaled(factor)

    def __mul__(self, factor) -> "SparseVec":
        return self.scaled(factor)

    def dot(self, other: "SparseVec") -> Fraction:
        if len(other._entries) < len(self._entries):
            self, other = other, self
        total = ZERO
        for k, v in self._entries.items():
            w = other._entries.get(k)
            if w is not None:
                total += v * w
        return total

    def __repr__(self) -> str:
        if not self._entries:
            return "SparseVec(0)"
        body = ", ".join(f"{k}: {v}" for k, v in self.items())
        return f"SparseVec({{{body}}})"


def vec(entries: Optional[Mapping] = None) -> SparseVec:
    return SparseVec(entries)


@dataclass(frozen=True)
class RatMatrix:
    """Sparse rational matrix: rows are column->Scalar maps."""

    rows: tuple
    ncols: int

    @staticmethod
    def from_rows(rows: Iterable[Mapping], ncols: int) -> "RatMatrix":
        packed = []
        for row in rows:
            cleaned = {}
            for c, v in row.items():
                if not 0 <= c < ncols:
                    raise ValueError(f"column index {c} outside 0..{ncols - 1}")
                v = as_scalar(v)
                if v:
                    cleaned[c] = v
            packed.append(cleaned)
        return RatMatrix(tuple(packed), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row_vectors(self) -> list:
        return [SparseVec(r) for r in self.rows]

    def apply(self, x: SparseVec) -> SparseVec:
        """Matrix-vector product; x is indexed by column, result by row."""
        out = {}
        for i, row in enumerate(self.rows):
            total = ZERO
            for c, v in row.items():
                xc = x.get(c)
                if xc:
                    total += v * xc
            if total:
                out[i] = total
        return SparseVec(out)


def _reduce_row(row: dict, pivots: dict) -> dict:
    """Eliminate all pivot columns from ``row`` (row is mutated and returned)."""
    while row:
        lead = min(row)
        prow = pivots.get(lead)
        if prow is None:
            return row
        f = row[lead]
        for c, v in prow.items():
            nv = row.get(c, ZERO) - f * v
            if nv:
                row[c] = nv
            else:
                row.pop(c, None)
    return row


def _forward_eliminate(rows: Iterable[Mapping]) -> dict:
    """Gaussian elimination; returns pivot-col -> normalized row dict."""
    pivots: dict = {}
    for row in rows:
        row = _reduce_row(dict(row), pivots)
        if row:
            lead = min(row)
            f = row[lead]
            pivots[lead] = {c: v / f for c, v in row.items()}
    return pivots


def _back_eliminate(pivots: dict) -> dict:
    cols = sorted(pivots)
    for p in reversed(cols):
        prow = pivots[p]
        for q in cols:
            if q >= p:
                break
            qrow = pivots[q]
            f = qrow.get(p)
            if f:
                for c, v in prow.items():
                    nv = qrow.get(c, ZERO) - f * v
                    if nv:
                        qrow[c] = nv
                    else:
                        qrow.pop(c, None)
    return pivots


def rref(matrix: RatMatrix) -> tuple:
    """Reduced row echelon form. Returns (RatMatrix, rank).

    The output has the same shape as the input, zero rows collected at the
    bottom. Pivots are the lowest-index nonzero column of each row, so the
    result is the (unique) canonical RREF.
    """
    pivots = _back_eliminate(_forward_eliminate(matrix.rows))
    ordered = [dict(pivots[c]) for c in sorted(pivots)]
    rank = len(ordered)
    ordered.extend({} for _ in range(matrix.nrows - rank))
    return RatMatrix.from_rows(ordered, matrix.ncols), rank


def rank(matrix: RatMatrix) -> int:
    return len(_forward_eliminate(matrix.rows))


def nullspace(matrix: RatMatrix) -> list:
    """Basis of the right nullspace, one SparseVec per free column.

    Vectors are emitted in increasing free-column order; each has entry 1 at
    its free column, making the basis canonical for a fixed column order.
    """
    pivots = _back_eliminate(_forward_eliminate(matrix.rows))
    basis = []
    for free in range(matrix.ncols):
        if free in pivots:
            continue
        v = {free: ONE}
        for p, prow in pivots.items():
            coeff = prow.get(free)
            if coeff:
                v[p] = -coeff
        basis.append(SparseVec(v))
    return basis


@dataclass(frozen=True)
class LinearSolveResult:
    """Outcome of ``solve_feasible``: a solution or a Farkas certificate.

    When infeasible, ``certificate`` is a row combination u (indexed by row)
    with u.A = 0 and u.b != 0.
    """

    feasible: bool
    solution: Optional[SparseVec] = None
    certificate: Optional[SparseVec] = None


def solve_feasible(matrix: RatMatrix, b: SparseVec) -> LinearSolveResult:
    """Solve A x = b exactly, or certify infeasibility.

    Row-reduces the augmented system while tracking the row transform, so an
    inconsistent reduced row directly yields a left-nullspace witness.
    """
    aug_col = matrix.ncols
    pivots: dict = {}
    transforms: dict = {}
    for i, row in enumerate(matrix.rows):
        work = dict(row)
        bi = b.get(i)
        if bi:
            work[aug_col] = bi
        t = {i: ONE}
        while work:
            lead = min(work)
            prow = pivots.get(lead)
            if prow is None:
                f = work[lead]
                pivots[lead] = {c: v / f for c, v in work.items()}
                transforms[lead] = {r: v / f for r, v in t.items()}
                break
            f = work[lead]
            for c, v in prow.items():
                nv = work.get(c, ZERO) - f * v
                if nv:
                    work[c] = nv
                else:
                    work.pop(c, None)
            for r, v in transforms[lead].items():
                nv = t.get(r, ZERO) - f * v
                if nv:
                    t[r] = nv
                else:
                    t.pop(r, None)
        if aug_col in pivots:
            return LinearSolveResult(False, certificate=SparseVec(transforms[aug_col]))
    _back_eliminate(pivots)
    solution = {}
    for p, prow in pivots.items():
        rhs = prow.get(aug_col)
        if rhs:
            solution[p] = rhs
    return LinearSolveResult(True, solution=SparseVec(solution))


class RowSpace:
    """Incrementally built row space supporting exact membership queries."""

    def __init__(self, vectors: Iterable[SparseVec] = ()):
        self._pivots: dict = {}
        self._dim = 0
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return self._dim

    def add(self, v: SparseVec) -> bool:
        """Insert v; returns True if it enlarged the space."""
        row = _reduce_row(dict(v.entries), self._pivots)
        if not row:
            return False
        lead = min(row)
        f = row[lead]
        self._pivots[lead] = {c: x / f for c, x in row.items()}
        self._dim += 1
        return True

    def contains(self, v: SparseVec) -> bool:
        return not _reduce_row(dict(v.entries), self._pivots)


def in_span(v: SparseVec, basis: Iterable[SparseVec]) -> bool:
    """True iff v is an exact rational combination of the basis vectors."""
    return RowSpace(basis).contains(v)


def span_dim(vectors: Iterable[SparseVec]) -> int:
    return RowSpace(vectors).dim


def combination_for(v: SparseVec, basis: list) -> Optional[SparseVec]:
    """Coefficients c with sum(c_k * basis_k) = v, or None.

    The returned vector is indexed by basis position.
    """
    keys = sorted(set(v.support()).union(*(b.support() for b in basis)))
    key_row = {k: i for i, k in enumerate(keys)}
    rows = [{} for _ in keys]
    for j, bvec in enumerate(basis):
        for k, val in bvec.entries.items():
            rows[key_row[k]][j] = val
    rhs = SparseVec({key_row[k]: val for k, val in v.entries.items()})
    result = solve_feasible(RatMatrix.from_rows(rows, len(basis)), rhs)
    return result.solution if result.feasible else None
