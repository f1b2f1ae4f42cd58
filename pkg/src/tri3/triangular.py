"""Order-three triangular algebras.

An element of ``T`` is a formal upper-triangular matrix

    [a m p]
    [  b n]
    [    c]

with ``a, b, c`` in the corner algebras, ``m, n, p`` in the bimodules, and the
product

    [a1 m1 p1][a2 m2 p2]   [a1a2  a1m2 + m1b2  a1p2 + mu(m1, n2) + p1c2]
    [   b1 n1][   b2 n2] = [      b1b2         b1n2 + n1c2             ]
    [      c1][      c2]   [                   c1c2                    ]

``T`` is materialised as a :class:`StructureAlgebra` whose basis lists the six
blocks in the order A, M, P, B, N, C.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .algebra import (
    Bimodule,
    Pairing,
    StructureAlgebra,
    Violation,
    validate_algebra,
    validate_bimodule,
    validate_pairing,
)
from .errors import DimensionMismatchError, InconsistentSystemError, ValidationError
from .linalg import ZERO, Vector, add_vectors, as_vector

BLOCKS = ("A", "M", "P", "B", "N", "C")


@dataclass(frozen=True)
class TriSystem:
    """The data ``(A, B, C, M, N, P, mu)`` defining a triangular algebra."""

    A: StructureAlgebra
    B: StructureAlgebra
    C: StructureAlgebra
    M: Bimodule
    N: Bimodule
    P: Bimodule
    mu: Pairing
    name: str = field(default="", compare=False)

    def component(self, block: str):
        if block not in BLOCKS:
            raise KeyError(f"unknown block {block!r}")
        return getattr(self, block)

    @property
    def dims(self) -> dict[str, int]:
        return {b: self.component(b).dim for b in BLOCKS}

    @property
    def is_unital(self) -> bool:
        return all(x.unit is not None for x in (self.A, self.B, self.C))


def validate_system(sys: TriSystem) -> list[Violation]:
    """All axiom violations of ``sys``; empty when it defines an algebra.

    Wrong algebra references are reported as violations of the ``references``
    axiom rather than raised, so callers see every problem at once.
    """
    out: list[Violation] = []
    expected = {"M": ("A", "B"), "N": ("B", "C"), "P": ("A", "C")}
    refs_ok = True
    for mod_name, (left, right) in expected.items():
        mod = sys.component(mod_name)
        if mod.left_algebra != sys.component(left):
            out.append(Violation("references", (f"left algebra is not {left}",), mod_name))
            refs_ok = False
        if mod.right_algebra != sys.component(right):
            out.append(Violation("references", (f"right algebra is not {right}",), mod_name))
            refs_ok = False
    pair = sys.mu
    if (pair.module_m, pair.module_n, pair.module_p) != (sys.M, sys.N, sys.P):
        out.append(Violation("references", ("pairing modules are not (M, N, P)",), "mu"))
        refs_ok = False
    for name in ("A", "B", "C"):
        out.extend(validate_algebra(sys.component(name), name))
    for name in ("M", "N", "P"):
        out.extend(validate_bimodule(sys.component(name), name))
    if refs_ok:
        try:
            out.extend(validate_pairing(pair, "mu"))
        except InconsistentSystemError as exc:  # pragma: no cover - refs_ok guards this
            out.append(Violation("references", (str(exc),), "mu"))
    return out


@dataclass(frozen=True)
class TriAlgebra:
    system: TriSystem
    algebra: StructureAlgebra
    block_offsets: dict = field(compare=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def block_range(self, block: str) -> range:
        if block not in BLOCKS:
            raise KeyError(f"unknown block {block!r}")
        start = self.block_offsets[block]
        return range(start, start + self.system.component(block).dim)

    def embed(self, block: str, v: Sequence) -> Vector:
        return embed_block(self, block, v)

    def project(self, block: str, w: Sequence) -> Vector:
        return project_block(self, block, w)

    @cached_property
    def unit(self) -> Vector | None:
        return unit_of(self)


def build_triangular(sys: TriSystem, validate: bool = True) -> TriAlgebra:
    """Structure constants of the triangular algebra of ``sys``.

    Raises:
        ValidationError: when ``validate`` is set and ``sys`` breaks an axiom.
    """
    if validate:
        violations = validate_system(sys)
        if violations:
            raise ValidationError(violations)
    dims = sys.dims
    offsets = {}
    pos = 0
    for b in BLOCKS:
        offsets[b] = pos
        pos += dims[b]
    oA, oM, oP, oB, oN, oC = (offsets[b] for b in BLOCKS)
    entries = []

    def put(tensor, o1, o2, o3):
        for i, plane in enumerate(tensor):
            for j, row in enumerate(plane):
                for k, x in enumerate(row):
                    if x:
                        entries.append((o1 + i, o2 + j, o3 + k, x))

    put(sys.A.mult, oA, oA, oA)
    put(sys.B.mult, oB, oB, oB)
    put(sys.C.mult, oC, oC, oC)
    put(sys.M.left_action, oA, oM, oM)
    put(sys.M.right_action, oM, oB, oM)
    put(sys.P.left_action, oA, oP, oP)
    put(sys.P.right_action, oP, oC, oP)
    put(sys.N.left_action, oB, oN, oN)
    put(sys.N.right_action, oN, oC, oN)
    put(sys.mu.tensor, oM, oN, oP)

    unit = None
    if sys.is_unital:
        u = [ZERO] * pos
        for b in ("A", "B", "C"):
            for i, x in enumerate(sys.component(b).unit):
                u[offsets[b] + i] = x
        unit = tuple(u)
    return TriAlgebra(sys, StructureAlgebra.from_entries(pos, entries, unit), offsets)


def embed_block(t: TriAlgebra, block: str, v: Sequence) -> Vector:
    rng = t.block_range(block)
    if len(v) != len(rng):
        raise DimensionMismatchError(f"{block}-vector of length {len(v)}, expected {len(rng)}")
    out = [ZERO] * t.dim
    out[rng.start:rng.stop] = as_vector(v)
    return tuple(out)


def project_block(t: TriAlgebra, block: str, w: Sequence) -> Vector:
    if len(w) != t.dim:
        raise DimensionMismatchError(f"T-vector of length {len(w)}, expected {t.dim}")
    rng = t.block_range(block)
    return as_vector(w[rng.start:rng.stop])


def unit_of(t: TriAlgebra) -> Vector | None:
    """``diag(e_A, e_B, e_C)`` when all three corners are unital, else None."""
    sys = t.system
    if not sys.is_unital:
        return None
    u = embed_block(t, "A", sys.A.unit)
    u = add_vectors(u, embed_block(t, "B", sys.B.unit))
    return add_vectors(u, embed_block(t, "C", sys.C.unit))
