"""Finite-dimensional algebras, bimodules and pairings given by structure constants.

All three objects store dense rank-3 tensors as nested tuples of Fractions:

* ``StructureAlgebra.mult[i][j][k]`` -- coefficient of ``e_k`` in ``e_i e_j``;
* ``Bimodule.left_action[i][j][k]`` -- coefficient of ``m_k`` in ``a_i m_j``,
  ``Bimodule.right_action[i][j][k]`` -- coefficient of ``m_k`` in ``m_i b_j``;
* ``Pairing.tensor[i][j][k]`` -- coefficient of ``p_k`` in ``mu(m_i, n_j)``.

Validators never raise on a broken axiom; they return a list of
:class:`Violation` records, empty when everything holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, InconsistentSystemError, ShapeError
from .linalg import (
    ZERO,
    RatMatrix,
    Subspace,
    Vector,
    as_rational,
    as_vector,
    null_space_sparse,
    rref,
    solve,
    zero_vector,
)

Tensor3 = tuple  # tuple[tuple[tuple[Fraction, ...], ...], ...]


def dense_tensor(shape: tuple[int, int, int], entries: Iterable[Sequence] = ()) -> Tensor3:
    """Expand sparse ``(i, j, k, value)`` entries into a dense nested tuple.

    Repeated coordinates are summed.
    """
    n0, n1, n2 = shape
    grid = [[[ZERO] * n2 for _ in range(n1)] for _ in range(n0)]
    for entry in entries:
        i, j, k, q = entry
        if not (0 <= i < n0 and 0 <= j < n1 and 0 <= k < n2):
            raise ShapeError(f"entry index ({i}, {j}, {k}) outside shape {shape}")
        grid[i][j][k] += as_rational(q)
    return tuple(tuple(tuple(row) for row in plane) for plane in grid)


def tensor_shape(t: Tensor3) -> tuple[int, int, int]:
    n0 = len(t)
    n1 = len(t[0]) if n0 else 0
    n2 = len(t[0][0]) if n0 and n1 else 0
    return n0, n1, n2


def _check_shape(t: Tensor3, shape: tuple[int, int, int], what: str) -> None:
    if len(t) != shape[0] or any(len(p) != shape[1] for p in t) or any(
        len(r) != shape[2] for p in t for r in p
    ):
        raise ShapeError(f"{what} tensor does not have shape {shape}")


def _nonzero(t: Tensor3) -> list[tuple[int, int, int, Fraction]]:
    return [(i, j, k, x) for i, p in enumerate(t) for j, r in enumerate(p) for k, x in enumerate(r) if x]


def _contract(nz, x: Sequence[Fraction], y: Sequence[Fraction], n: int) -> Vector:
    out = [ZERO] * n
    for i, j, k, c in nz:
        xi = x[i]
        if xi:
            yj = y[j]
            if yj:
                out[k] += c * xi * yj
    return tuple(out)


def basis_vector(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = Fraction(1)
    return tuple(v)


@dataclass(frozen=True)
class Violation:
    """One failed axiom instance."""

    axiom: str
    witness: tuple
    where: str = ""

    def __str__(self) -> str:
        prefix = f"{self.where}: " if self.where else ""
        return f"{prefix}{self.axiom} fails at {self.witness}"


@dataclass(frozen=True)
class StructureAlgebra:
    dim: int
    mult: Tensor3
    unit: Vector | None = None

    def __post_init__(self) -> None:
        _check_shape(self.mult, (self.dim, self.dim, self.dim), "multiplication")
        if self.unit is not None and len(self.unit) != self.dim:
            raise ShapeError(f"unit of length {len(self.unit)} for a {self.dim}-dimensional algebra")

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[Sequence], unit: Sequence | None = None) -> StructureAlgebra:
        return cls(dim, dense_tensor((dim, dim, dim), entries), None if unit is None else as_vector(unit))

    @cached_property
    def nonzero(self) -> list[tuple[int, int, int, Fraction]]:
        return _nonzero(self.mult)

    @cached_property
    def table(self) -> dict[tuple[int, int], list[tuple[int, Fraction]]]:
        """``(i, j) -> [(k, c), ...]`` with ``e_i e_j = sum c e_k``."""
        out: dict = {}
        for i, j, k, c in self.nonzero:
            out.setdefault((i, j), []).append((k, c))
        return out

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def multiply(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        return multiply(self, x, y)

    def basis(self, i: int) -> Vector:
        return basis_vector(self.dim, i)


def multiply(alg: StructureAlgebra, x: Sequence, y: Sequence) -> Vector:
    """Product of two coordinate vectors in ``alg``."""
    if len(x) != alg.dim or len(y) != alg.dim:
        raise DimensionMismatchError(
            f"vectors of length {len(x)}, {len(y)} in a {alg.dim}-dimensional algebra"
        )
    return _contract(alg.nonzero, as_vector(x), as_vector(y), alg.dim)


@dataclass(frozen=True)
class Bimodule:
    """A left ``left_algebra``-, right ``right_algebra``-module of dimension ``dim``."""

    dim: int
    left_algebra: StructureAlgebra
    right_algebra: StructureAlgebra
    left_action: Tensor3
    right_action: Tensor3

    def __post_init__(self) -> None:
        _check_shape(self.left_action, (self.left_algebra.dim, self.dim, self.dim), "left action")
        _check_shape(self.right_action, (self.dim, self.right_algebra.dim, self.dim), "right action")

    @cached_property
    def _left_nz(self):
        return _nonzero(self.left_action)

    @cached_property
    def _right_nz(self):
        return _nonzero(self.right_action)

    def left(self, a: Sequence, m: Sequence) -> Vector:
        if len(a) != self.left_algebra.dim or len(m) != self.dim:
            raise DimensionMismatchError("left action operands have the wrong lengths")
        return _contract(self._left_nz, a, m, self.dim)

    def right(self, m: Sequence, b: Sequence) -> Vector:
        if len(m) != self.dim or len(b) != self.right_algebra.dim:
            raise DimensionMismatchError("right action operands have the wrong lengths")
        return _contract(self._right_nz, m, b, self.dim)


@dataclass(frozen=True)
class Pairing:
    """Bilinear map ``module_m x module_n -> module_p``."""

    module_m: Bimodule
    module_n: Bimodule
    module_p: Bimodule
    tensor: Tensor3

    def __post_init__(self) -> None:
        _check_shape(self.tensor, (self.module_m.dim, self.module_n.dim, self.module_p.dim), "pairing")

    @classmethod
    def zero(cls, m: Bimodule, n: Bimodule, p: Bimodule) -> Pairing:
        return cls(m, n, p, dense_tensor((m.dim, n.dim, p.dim)))

    @cached_property
    def _nz(self):
        return _nonzero(self.tensor)

    @property
    def is_zero(self) -> bool:
        return not self._nz

    def apply(self, m: Sequence, n: Sequence) -> Vector:
        if len(m) != self.module_m.dim or len(n) != self.module_n.dim:
            raise DimensionMismatchError("pairing operands have the wrong lengths")
        return _contract(self._nz, m, n, self.module_p.dim)


# ---------------------------------------------------------------------------
# validators


def _sparse_combine(pairs) -> dict:
    out: dict = {}
    for k, v in pairs:
        out[k] = out.get(k, ZERO) + v
    return {k: v for k, v in out.items() if v}


def validate_algebra(alg: StructureAlgebra, where: str = "") -> list[Violation]:
    d = alg.dim
    tab = alg.table
    out: list[Violation] = []
    for i, j, k in product(range(d), repeat=3):
        lhs = _sparse_combine((m, c * c2) for l, c in tab.get((i, j), ()) for m, c2 in tab.get((l, k), ()))
        rhs = _sparse_combine((m, c * c2) for l, c in tab.get((j, k), ()) for m, c2 in tab.get((i, l), ()))
        if lhs != rhs:
            out.append(Violation("associativity", (i, j, k), where))
    if alg.unit is not None:
        u = alg.unit
        e = [alg.basis(i) for i in range(d)]
        for j in range(d):
            if multiply(alg, u, e[j]) != e[j]:
                out.append(Violation("left-unit", (j,), where))
            if multiply(alg, e[j], u) != e[j]:
                out.append(Violation("right-unit", (j,), where))
    return out


def validate_bimodule(mod: Bimodule, where: str = "") -> list[Violation]:
    A, B = mod.left_algebra, mod.right_algebra
    ea = [A.basis(i) for i in range(A.dim)]
    eb = [B.basis(i) for i in range(B.dim)]
    em = [basis_vector(mod.dim, i) for i in range(mod.dim)]
    out: list[Violation] = []
    for i, i2, j in product(range(A.dim), range(A.dim), range(mod.dim)):
        lhs = mod.left(multiply(A, ea[i], ea[i2]), em[j])
        if lhs != mod.left(ea[i], mod.left(ea[i2], em[j])):
            out.append(Violation("left-module", (i, i2, j), where))
    for j, i, i2 in product(range(mod.dim), range(B.dim), range(B.dim)):
        lhs = mod.right(em[j], multiply(B, eb[i], eb[i2]))
        if lhs != mod.right(mod.right(em[j], eb[i]), eb[i2]):
            out.append(Violation("right-module", (j, i, i2), where))
    for i, j, k in product(range(A.dim), range(mod.dim), range(B.dim)):
        if mod.right(mod.left(ea[i], em[j]), eb[k]) != mod.left(ea[i], mod.right(em[j], eb[k])):
            out.append(Violation("bimodule-commutation", (i, j, k), where))
    if A.unit is not None:
        for j in range(mod.dim):
            if mod.left(A.unit, em[j]) != em[j]:
                out.append(Violation("left-unit-action", (j,), where))
    if B.unit is not None:
        for j in range(mod.dim):
            if mod.right(em[j], B.unit) != em[j]:
                out.append(Violation("right-unit-action", (j,), where))
    return out


def validate_pairing(pair: Pairing, where: str = "mu") -> list[Violation]:
    """Check left linearity, right linearity and balance over the middle algebra.

    Raises:
        InconsistentSystemError: if the three modules do not share acting
            algebras as ``M: (A, B)``, ``N: (B, C)``, ``P: (A, C)``.
    """
    M, N, P = pair.module_m, pair.module_n, pair.module_p
    if M.left_algebra != P.left_algebra:
        raise InconsistentSystemError("M and P must share their left algebra")
    if N.right_algebra != P.right_algebra:
        raise InconsistentSystemError("N and P must share their right algebra")
    if M.right_algebra != N.left_algebra:
        raise InconsistentSystemError("M's right algebra must be N's left algebra")
    A, B, C = M.left_algebra, M.right_algebra, N.right_algebra
    em = [basis_vector(M.dim, i) for i in range(M.dim)]
    en = [basis_vector(N.dim, i) for i in range(N.dim)]
    out: list[Violation] = []
    for a, i, j in product(range(A.dim), range(M.dim), range(N.dim)):
        x = A.basis(a)
        if pair.apply(M.left(x, em[i]), en[j]) != P.left(x, pair.apply(em[i], en[j])):
            out.append(Violation("pairing-left-linearity", (a, i, j), where))
    for i, j, c in product(range(M.dim), range(N.dim), range(C.dim)):
        z = C.basis(c)
        if pair.apply(em[i], N.right(en[j], z)) != P.right(pair.apply(em[i], en[j]), z):
            out.append(Violation("pairing-right-linearity", (i, j, c), where))
    for i, b, j in product(range(M.dim), range(B.dim), range(N.dim)):
        y = B.basis(b)
        if pair.apply(M.right(em[i], y), en[j]) != pair.apply(em[i], N.left(y, en[j])):
            out.append(Violation("pairing-balance", (i, b, j), where))
    return out


# ---------------------------------------------------------------------------
# derived data


def center(alg: StructureAlgebra) -> Subspace:
    """The center ``{x : x e_j = e_j x for all j}`` as a subspace of ``Q^dim``."""
    d = alg.dim
    # row (j, k): sum_i x_i (c[i][j][k] - c[j][i][k]) = 0
    rows: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i, j, k, c in alg.nonzero:
        r = rows.setdefault((j, k), {})
        r[i] = r.get(i, ZERO) + c
        r = rows.setdefault((i, k), {})
        r[j] = r.get(j, ZERO) - c
    return null_space_sparse(rows.values(), d)


def is_commutative(alg: StructureAlgebra) -> bool:
    return all(alg.mult[i][j] == alg.mult[j][i] for i in range(alg.dim) for j in range(i))


def change_basis(alg: StructureAlgebra, g: RatMatrix) -> StructureAlgebra:
    """Structure constants of ``alg`` in the basis ``f_j = sum_i g[i, j] e_i``.

    Raises:
        DimensionMismatchError: if ``g`` is not square of size ``alg.dim``.
        ValueError: if ``g`` is singular.
    """
    d = alg.dim
    if g.rows != d or g.cols != d:
        raise DimensionMismatchError("change of basis must be a square matrix of the algebra's size")
    if rref(g).rank != d:
        raise ValueError("change-of-basis matrix is singular")
    f = [g.column(j) for j in range(d)]
    entries = []
    for i in range(d):
        for j in range(d):
            coords = solve(g, multiply(alg, f[i], f[j]))
            entries.extend((i, j, k, x) for k, x in enumerate(coords) if x)
    unit = None if alg.unit is None else solve(g, alg.unit)
    return StructureAlgebra.from_entries(d, entries, unit)


# ---------------------------------------------------------------------------
# matrix realisations used by fixtures and the instance catalog


def matrix_unit(n_rows: int, n_cols: int, r: int, s: int) -> RatMatrix:
    return RatMatrix(n_rows, n_cols, tuple(Fraction(int(i == r and j == s)) for i in range(n_rows) for j in range(n_cols)))


def algebra_from_matrices(mats: Sequence[RatMatrix], unital: bool = True) -> StructureAlgebra:
    """Structure constants of the matrix algebra spanned by ``mats``.

    The span must be closed under multiplication; the unit is the identity
    matrix when it lies in the span and ``unital`` is set.
    """
    d = len(mats)
    flat = RatMatrix.from_columns([m.entries for m in mats], len(mats[0].entries))
    entries = []
    for i, j in product(range(d), repeat=2):
        coords = solve(flat, (mats[i] @ mats[j]).entries)
        if coords is None:
            raise ValueError("matrix span is not closed under multiplication")
        entries.extend((i, j, k, x) for k, x in enumerate(coords) if x)
    unit = None
    if unital:
        n = mats[0].rows
        unit = solve(flat, RatMatrix.identity(n).entries)
    return StructureAlgebra.from_entries(d, entries, unit)


def rectangular_bimodule(
    left: StructureAlgebra,
    left_mats: Sequence[RatMatrix],
    right: StructureAlgebra,
    right_mats: Sequence[RatMatrix],
) -> Bimodule:
    """All ``r x s`` matrices, acted on by matrix multiplication from both sides.

    ``left_mats``/``right_mats`` realise the acting algebras' bases as ``r x r``
    and ``s x s`` matrices. The module basis is the matrix units in row-major
    order.
    """
    r, s = left_mats[0].rows, right_mats[0].rows
    units = [matrix_unit(r, s, i, j) for i in range(r) for j in range(s)]
    lam = []
    for i, x in enumerate(left_mats):
        for j, u in enumerate(units):
            lam.extend((i, j, k, v) for k, v in enumerate((x @ u).entries) if v)
    rho = []
    for j, u in enumerate(units):
        for i, y in enumerate(right_mats):
            rho.extend((j, i, k, v) for k, v in enumerate((u @ y).entries) if v)
    dim = r * s
    return Bimodule(
        dim, left, right,
        dense_tensor((left.dim, dim, dim), lam),
        dense_tensor((dim, right.dim, dim), rho),
    )


def matrix_pairing(m: Bimodule, n: Bimodule, p: Bimodule, r: int, s: int, t: int) -> Pairing:
    """``mu(x, y) = x y`` for ``x`` an ``r x s`` and ``y`` an ``s x t`` matrix."""
    entries = []
    for i in range(r * s):
        a, b = divmod(i, s)
        for j in range(s * t):
            b2, c = divmod(j, t)
            if b == b2:
                entries.append((i, j, a * t + c, 1))
    return Pairing(m, n, p, dense_tensor((m.dim, n.dim, p.dim), entries))


def scalar_algebra() -> StructureAlgebra:
    return StructureAlgebra.from_entries(1, [(0, 0, 0, 1)], [1])


def scalar_module(left: StructureAlgebra, right: StructureAlgebra, dim: int) -> Bimodule:
    """``Q^dim`` over two copies of ``Q`` acting by scalars."""
    lam = [(0, j, j, 1) for j in range(dim)]
    rho = [(j, 0, j, 1) for j in range(dim)]
    return Bimodule(dim, left, right, dense_tensor((1, dim, dim), lam), dense_tensor((dim, 1, dim), rho))


def full_matrix_basis(n: int) -> list[RatMatrix]:
    return [matrix_unit(n, n, i, j) for i in range(n) for j in range(n)]


def diagonal_matrix_basis(n: int) -> list[RatMatrix]:
    return [matrix_unit(n, n, i, i) for i in range(n)]


def upper_triangular_basis(n: int) -> list[RatMatrix]:
    return [matrix_unit(n, n, i, j) for i in range(n) for j in range(i, n)]


def zero_bimodule_actions(left: StructureAlgebra, right: StructureAlgebra, dim: int) -> Bimodule:
    return Bimodule(dim, left, right, dense_tensor((left.dim, dim, dim)), dense_tensor((dim, right.dim, dim)))


__all__ = [
    "Bimodule",
    "Pairing",
    "StructureAlgebra",
    "Violation",
    "algebra_from_matrices",
    "basis_vector",
    "center",
    "change_basis",
    "dense_tensor",
    "diagonal_matrix_basis",
    "full_matrix_basis",
    "is_commutative",
    "matrix_pairing",
    "matrix_unit",
    "multiply",
    "rectangular_bimodule",
    "scalar_algebra",
    "scalar_module",
    "tensor_shape",
    "upper_triangular_basis",
    "validate_algebra",
    "validate_bimodule",
    "validate_pairing",
    "zero_bimodule_actions",
    "zero_vector",
]
