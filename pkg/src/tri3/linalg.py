"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`, which keeps every value in lowest
terms with a positive denominator. Matrices are dense and immutable; the
row-reduction machinery underneath works on sparse rows (``dict`` from column
index to nonzero value) because the constraint systems built elsewhere in the
package (Leibniz rules, module-map commutation) have only a handful of
nonzeros per equation.

Subspaces of ``Q^n`` are always stored through the reduced row-echelon form of
a basis, so two :class:`Subspace` objects describe the same space exactly
when they compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import DimensionMismatchError, NotNestedError

Rational = Fraction
Scalar = Union[Fraction, int, str]
Vector = tuple  # tuple[Fraction, ...]
SparseRow = dict  # dict[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: Scalar) -> Fraction:
    """Coerce ``value`` to a canonical Fraction.

    Strings follow the ``"p/q"`` / ``"p"`` convention of the instance files.
    Floats are rejected because they would smuggle rounding into exact work.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact scalar {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_vector(values: Iterable[Scalar]) -> Vector:
    return tuple(as_rational(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def add_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatchError(f"vector lengths {len(u)} and {len(v)} differ")
    return tuple(a + b for a, b in zip(u, v))


def sub_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatchError(f"vector lengths {len(u)} and {len(v)} differ")
    return tuple(a - b for a, b in zip(u, v))


def scale_vector(c: Scalar, v: Sequence[Fraction]) -> Vector:
    c = as_rational(c)
    return tuple(c * a for a in v)


def is_zero_vector(v: Iterable[Fraction]) -> bool:
    return not any(v)


@dataclass(frozen=True)
class RatMatrix:
    """Dense rational matrix, row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix shape must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: int | None = None) -> RatMatrix:
        rows = [as_vector(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count is ambiguous for an empty row list")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatchError(f"row of length {len(r)} in a {cols}-column matrix")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int | None = None) -> RatMatrix:
        if not columns:
            if rows is None:
                raise ValueError("row count is ambiguous for an empty column list")
            return cls(rows, 0, ())
        return cls.from_rows(columns, rows).transpose()

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> RatMatrix:
        return RatMatrix(
            self.cols, self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def apply(self, v: Sequence[Scalar]) -> Vector:
        """Matrix-vector product ``self @ v``."""
        if len(v) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(v)} for {self.cols} columns")
        v = as_vector(v)
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(
            sum((self.entries[i * self.cols + j] * x for j, x in nz), ZERO) for i in range(self.rows)
        )

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            nz = [(k, x) for k, x in enumerate(r) if x]
            for c in cols:
                out.append(sum((x * c[k] for k, x in nz), ZERO))
        return RatMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: RatMatrix) -> RatMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("matrix shapes differ")
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("matrix shapes differ")
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c: Scalar) -> RatMatrix:
        c = as_rational(c)
        return RatMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def sparse_rows(self) -> list[SparseRow]:
        return [{j: x for j, x in enumerate(self.row(i)) if x} for i in range(self.rows)]

    def __str__(self) -> str:
        cells = [[format_rational(x) for x in self.row(i)] for i in range(self.rows)]
        width = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(width) for c in r) + "]" for r in cells)


class RREF(NamedTuple):
    reduced: RatMatrix
    rank: int
    pivots: tuple


# ---------------------------------------------------------------------------
# sparse elimination


def _axpy(row: SparseRow, factor: Fraction, other: SparseRow, skip: int | None = None) -> None:
    """In place: ``row -= factor * other`` (ignoring column ``skip``)."""
    for k, v in other.items():
        if k == skip:
            continue
        nv = row.get(k, ZERO) - factor * v
        if nv:
            row[k] = nv
        else:
            row.pop(k, None)


def _gauss_jordan(rows: list[SparseRow], ncols: int) -> tuple[list[SparseRow], list[int]]:
    """Textbook column-by-column Gauss-Jordan on sparse rows.

    Returns the nonzero rows of the unique RREF and their pivot columns.
    """
    rows = [dict(r) for r in rows if r]
    done: list[SparseRow] = []
    pivots: list[int] = []
    for col in range(ncols):
        if not rows:
            break
        pick = None
        for idx, r in enumerate(rows):
            if col in r:
                # prefer the sparsest candidate to limit fill-in
                if pick is None or len(r) < len(rows[pick]):
                    pick = idx
        if pick is None:
            continue
        prow = rows.pop(pick)
        inv = 1 / prow[col]
        prow = {k: v * inv for k, v in prow.items()}
        for r in rows:
            f = r.get(col)
            if f:
                _axpy(r, f, prow)
        for r in done:
            f = r.get(col)
            if f:
                _axpy(r, f, prow)
        rows = [r for r in rows if r]
        done.append(prow)
        pivots.append(col)
    return done, pivots


def _integer_row(row: SparseRow) -> dict[int, int]:
    """``row`` scaled to coprime integers (sign and scale are irrelevant to the span)."""
    den = math.lcm(*(v.denominator for v in row.values())) if row else 1
    ints = {k: v.numerator * (den // v.denominator) for k, v in row.items() if v}
    return _primitive(ints)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = math.gcd(*row.values()) if row else 1
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incrementally maintained fully-reduced row basis over the integers.

    Rows are fed one at a time. Stored rows are primitive integer vectors
    that vanish in every pivot column except their own, so reducing a new
    row costs one pass over the pivot columns it touches. Elimination is
    fraction-free (cross-multiplication followed by removing the content),
    which is much faster than ``Fraction`` arithmetic on dense systems.

    The pivot set depends on insertion order, so the stored rows are *not*
    the canonical RREF; callers that need canonical output go through
    :func:`rref` or :class:`Subspace`.
    """

    def __init__(self, ncols: int) -> None:
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}
        # non-pivot column -> pivot columns whose rows mention it
        self._users: dict[int, set[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def entry(self, pivot: int, col: int) -> Fraction:
        """Entry ``col`` of the stored row for ``pivot``, scaled so the pivot is 1."""
        row = self.rows[pivot]
        return Fraction(row.get(col, 0), row[pivot])

    def reduce(self, row: SparseRow) -> dict[int, int]:
        """``row`` (as a primitive integer vector) with every pivot column cleared."""
        row = _integer_row(row)
        for k in [k for k in row if k in self.rows]:
            f = row.get(k)
            if not f:
                continue
            other = self.rows[k]
            pk = other[k]
            g = math.gcd(pk, f)
            a, b = pk // g, f // g
            out = {}
            for c, v in row.items():
                if c != k:
                    out[c] = v * a
            for c, v in other.items():
                if c != k:
                    nv = out.get(c, 0) - b * v
                    if nv:
                        out[c] = nv
                    else:
                        out.pop(c, None)
            row = _primitive(out)
        return row

    def add(self, row: SparseRow) -> bool:
        """Insert ``row``; return True if it raised the rank."""
        row = self.reduce(row)
        if not row:
            return False
        for k in row:
            if k < 0 or k >= self.ncols:
                raise DimensionMismatchError(f"column {k} outside {self.ncols} columns")
        piv = min(row)
        pv = row[piv]
        users = self._users
        for p in users.pop(piv, ()):
            target = self.rows[p]
            t = target.pop(piv)
            g = math.gcd(pv, t)
            a, b = pv // g, t // g
            for c in target:
                target[c] *= a
            for k, v in row.items():
                if k == piv:
                    continue
                nv = target.get(k, 0) - b * v
                if nv:
                    if k not in target:
                        users.setdefault(k, set()).add(p)
                    target[k] = nv
                elif k in target:
                    del target[k]
                    users[k].discard(p)
            prim = _primitive(target)
            if prim is not target:
                self.rows[p] = prim
        for k in row:
            if k != piv:
                users.setdefault(k, set()).add(piv)
        self.rows[piv] = row
        return True

    def extend(self, rows: Iterable[SparseRow]) -> None:
        for r in rows:
            self.add(r)

    def null_basis(self) -> list[SparseRow]:
        out = []
        for f in range(self.ncols):
            if f in self.rows:
                continue
            v = {f: ONE}
            for p in self._users.get(f, ()):
                v[p] = -self.entry(p, f)
            out.append(v)
        return out


def _dense(row: SparseRow, n: int) -> Vector:
    v = [ZERO] * n
    for k, x in row.items():
        v[k] = x
    return tuple(v)


# ---------------------------------------------------------------------------
# public operations


def rref(m: RatMatrix) -> RREF:
    """Reduced row-echelon form, rank and pivot columns of ``m``."""
    rows, pivots = _gauss_jordan(m.sparse_rows(), m.cols)
    reduced = [_dense(r, m.cols) for r in rows]
    reduced += [zero_vector(m.cols)] * (m.rows - len(rows))
    return RREF(RatMatrix(m.rows, m.cols, tuple(x for r in reduced for x in r)), len(rows), tuple(pivots))


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``Q^ambient_dim`` held by its RREF basis (one row per vector)."""

    ambient_dim: int
    basis: RatMatrix

    def __post_init__(self) -> None:
        if self.basis.cols != self.ambient_dim:
            raise DimensionMismatchError("basis width differs from the ambient dimension")

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Scalar]], ambient_dim: int) -> Subspace:
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(f"vector of length {len(v)} in Q^{ambient_dim}")
            rows.append({j: as_rational(x) for j, x in enumerate(v) if x})
        return cls.from_sparse(rows, ambient_dim)

    @classmethod
    def from_sparse(cls, rows: Iterable[SparseRow], ambient_dim: int) -> Subspace:
        reduced, _ = _gauss_jordan(list(rows), ambient_dim)
        dense = [_dense(r, ambient_dim) for r in reduced]
        return cls(ambient_dim, RatMatrix(len(dense), ambient_dim, tuple(x for r in dense for x in r)))

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, RatMatrix(0, ambient_dim, ()))

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, RatMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @cached_property
    def pivots(self) -> tuple:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis.to_rows())

    def vectors(self) -> list[Vector]:
        return self.basis.to_rows()

    def sparse_vectors(self) -> list[SparseRow]:
        return self.basis.sparse_rows()

    def residual(self, w: Sequence[Scalar]) -> SparseRow:
        """What is left of ``w`` after clearing it against the basis pivots."""
        if len(w) != self.ambient_dim:
            raise DimensionMismatchError(f"vector of length {len(w)} in Q^{self.ambient_dim}")
        row = {j: as_rational(x) for j, x in enumerate(w) if x}
        for p, b in zip(self.pivots, self.sparse_vectors()):
            f = row.get(p)
            if f:
                _axpy(row, f, b)
        return row

    def __contains__(self, w: Sequence[Scalar]) -> bool:
        return not self.residual(w)

    def __str__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def null_space_sparse(rows: Iterable[SparseRow], ncols: int) -> Subspace:
    """Null space of the system whose equations are the sparse ``rows``."""
    ech = Echelon(ncols)
    ech.extend(rows)
    return Subspace.from_sparse(ech.null_basis(), ncols)


def null_space(m: RatMatrix) -> Subspace:
    """``{v : m v = 0}`` as a canonical subspace of ``Q^cols``."""
    return null_space_sparse(m.sparse_rows(), m.cols)


def column_space(m: RatMatrix) -> Subspace:
    return Subspace.span(m.transpose().to_rows(), m.rows) if m.cols else Subspace.zero(m.rows)


def _check_ambient(u: Subspace, v: Subspace) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatchError(
            f"subspaces live in Q^{u.ambient_dim} and Q^{v.ambient_dim}"
        )


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    return Subspace.from_sparse(u.sparse_vectors() + v.sparse_vectors(), u.ambient_dim)


def annihilator(u: Subspace) -> Subspace:
    """Linear forms (as vectors) vanishing on ``u``."""
    return null_space_sparse(u.sparse_vectors(), u.ambient_dim)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    constraints = annihilator(u).sparse_vectors() + annihilator(v).sparse_vectors()
    return null_space_sparse(constraints, u.ambient_dim)


def contains(u: Subspace, w: Sequence[Scalar]) -> bool:
    return w in u


def is_subset(u: Subspace, v: Subspace) -> bool:
    _check_ambient(u, v)
    return all(not v.residual(b) for b in u.vectors())


def quotient_dim(small: Subspace, big: Subspace) -> int:
    _check_ambient(small, big)
    if not is_subset(small, big):
        raise NotNestedError("quotient requested for subspaces that are not nested")
    return big.dim - small.dim


def direct_sum(*parts: Subspace) -> Subspace:
    """Block-diagonal embedding of ``parts`` in the concatenated ambient space."""
    rows: list[SparseRow] = []
    offset = 0
    for part in parts:
        for r in part.sparse_vectors():
            rows.append({k + offset: x for k, x in r.items()})
        offset += part.ambient_dim
    return Subspace.from_sparse(rows, offset)


def solve(m: RatMatrix, b: Sequence[Scalar]) -> Vector | None:
    """A particular solution of ``m x = b`` (free variables set to 0), or None."""
    if len(b) != m.rows:
        raise DimensionMismatchError(f"right-hand side of length {len(b)} for {m.rows} rows")
    b = as_vector(b)
    n = m.cols
    ech = Echelon(n + 1)
    for i, r in enumerate(m.sparse_rows()):
        if b[i]:
            r[n] = b[i]
        ech.add(r)
    if n in ech.rows:
        return None
    x = [ZERO] * n
    for p in ech.rows:
        x[p] = ech.entry(p, n)
    return tuple(x)
