"""Bimodule endomorphisms, central Rosenblum operators and module-map triples.

A *triple* is ``(phi, theta, psi)`` with ``phi`` acting on M, ``theta`` on P and
``psi`` on N. Triple spaces live in ``Q^(m*m + p*p + n*n)`` with the three
column-stacked blocks concatenated in the order (phi, theta, psi).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Bimodule, basis_vector, center
from .derivations import (
    LinearMap,
    MapSpace,
    block_diagonal,
    inner_derivation,
    is_derivation,
    pairing_compatibility,
)
from .errors import DimensionMismatchError, InvariantError, PreconditionError
from .linalg import (
    ZERO,
    RatMatrix,
    Subspace,
    Vector,
    add_vectors,
    as_vector,
    direct_sum,
    intersect,
    null_space_sparse,
    solve,
    zero_vector,
)
from .triangular import TriAlgebra, TriSystem, embed_block

TripleSpace = Subspace


def _hom_rows(mod: Bimodule, offset: int = 0):
    """Equations ``phi(a m) = a phi(m)`` and ``phi(m b) = phi(m) b`` on basis elements."""
    n = mod.dim
    lam: dict = {}
    for i, j, k, c in mod._left_nz:
        lam.setdefault((i, j), []).append((k, c))
    lam_out: dict = {}
    for i, l, k, c in mod._left_nz:
        lam_out.setdefault((i, k), []).append((l, c))
    rho: dict = {}
    for j, i, k, c in mod._right_nz:
        rho.setdefault((j, i), []).append((k, c))
    rho_out: dict = {}
    for l, i, k, c in mod._right_nz:
        rho_out.setdefault((i, k), []).append((l, c))

    def emit(row):
        row = {key: v for key, v in row.items() if v}
        if row:
            yield row

    for i in range(mod.left_algebra.dim):
        for j in range(n):
            for k in range(n):
                # phi(a_i m_j)_k - (a_i phi(m_j))_k
                row: dict[int, Fraction] = {}
                for l, c in lam.get((i, j), ()):
                    key = offset + l * n + k
                    row[key] = row.get(key, ZERO) + c
                for l, c in lam_out.get((i, k), ()):
                    key = offset + j * n + l
                    row[key] = row.get(key, ZERO) - c
                yield from emit(row)
    for i in range(mod.right_algebra.dim):
        for j in range(n):
            for k in range(n):
                # phi(m_j b_i)_k - (phi(m_j) b_i)_k
                row = {}
                for l, c in rho.get((j, i), ()):
                    key = offset + l * n + k
                    row[key] = row.get(key, ZERO) + c
                for l, c in rho_out.get((i, k), ()):
                    key = offset + j * n + l
                    row[key] = row.get(key, ZERO) - c
                yield from emit(row)


def hom_space(mod: Bimodule) -> MapSpace:
    """Linear maps on ``mod`` commuting with both actions."""
    return null_space_sparse(_hom_rows(mod), mod.dim * mod.dim)


def left_multiplication(mod: Bimodule, x: Sequence) -> LinearMap:
    return LinearMap.from_images([mod.left(x, basis_vector(mod.dim, j)) for j in range(mod.dim)], mod.dim)


def right_multiplication(mod: Bimodule, y: Sequence) -> LinearMap:
    return LinearMap.from_images([mod.right(basis_vector(mod.dim, j), y) for j in range(mod.dim)], mod.dim)


def rosenblum(mod: Bimodule, x: Sequence, y: Sequence) -> LinearMap:
    """``m -> m y - x m``."""
    return right_multiplication(mod, y) - left_multiplication(mod, x)


def zr_space(mod: Bimodule) -> MapSpace:
    """Span of ``m -> m y - x m`` over central ``x`` (left) and ``y`` (right)."""
    gens = [left_multiplication(mod, x).to_vector() for x in center(mod.left_algebra).vectors()]
    gens += [right_multiplication(mod, y).to_vector() for y in center(mod.right_algebra).vectors()]
    return Subspace.span(gens, mod.dim * mod.dim)


@dataclass(frozen=True)
class HomTriple:
    phi: LinearMap
    theta: LinearMap
    psi: LinearMap

    def to_vector(self) -> Vector:
        return self.phi.to_vector() + self.theta.to_vector() + self.psi.to_vector()

    @classmethod
    def from_vector(cls, sys: TriSystem, vec: Sequence) -> HomTriple:
        m, p, n = sys.M.dim, sys.P.dim, sys.N.dim
        if len(vec) != m * m + p * p + n * n:
            raise DimensionMismatchError(f"triple vector of length {len(vec)}")
        vec = as_vector(vec)
        return cls(
            LinearMap.from_vector(vec[:m * m], m),
            LinearMap.from_vector(vec[m * m:m * m + p * p], p),
            LinearMap.from_vector(vec[m * m + p * p:], n),
        )

    @classmethod
    def zero(cls, sys: TriSystem) -> HomTriple:
        return cls(LinearMap.zero(sys.M.dim), LinearMap.zero(sys.P.dim), LinearMap.zero(sys.N.dim))


def triple_ambient(sys: TriSystem) -> int:
    return sys.M.dim ** 2 + sys.P.dim ** 2 + sys.N.dim ** 2


def hom_triples(sys: TriSystem) -> TripleSpace:
    return direct_sum(hom_space(sys.M), hom_space(sys.P), hom_space(sys.N))


def zr_triples(sys: TriSystem) -> TripleSpace:
    return direct_sum(zr_space(sys.M), zr_space(sys.P), zr_space(sys.N))


def _central_bases(sys: TriSystem) -> tuple[list[Vector], list[Vector], list[Vector]]:
    return center(sys.A).vectors(), center(sys.B).vectors(), center(sys.C).vectors()


def _joint_generators(sys: TriSystem) -> list[Vector]:
    """Images of the central basis elements under ``(x, y, z) -> (tau_M^{x,y}, tau_P^{x,z}, tau_N^{y,z})``."""
    zA, zB, zC = _central_bases(sys)
    m, p, n = sys.M.dim, sys.P.dim, sys.N.dim
    gens = []
    for x in zA:
        gens.append(HomTriple(
            rosenblum(sys.M, x, zero_vector(sys.B.dim)),
            rosenblum(sys.P, x, zero_vector(sys.C.dim)),
            LinearMap.zero(n),
        ).to_vector())
    for y in zB:
        gens.append(HomTriple(
            rosenblum(sys.M, zero_vector(sys.A.dim), y),
            LinearMap.zero(p),
            rosenblum(sys.N, y, zero_vector(sys.C.dim)),
        ).to_vector())
    for z in zC:
        gens.append(HomTriple(
            LinearMap.zero(m),
            rosenblum(sys.P, zero_vector(sys.A.dim), z),
            rosenblum(sys.N, zero_vector(sys.B.dim), z),
        ).to_vector())
    return gens


def joint_rosenblum(sys: TriSystem) -> TripleSpace:
    """Triples of central Rosenblum operators that share one ``(x, y, z)``."""
    return Subspace.span(_joint_generators(sys), triple_ambient(sys))


def _compatibility_rows(sys: TriSystem):
    """Equations ``theta(mu(m_i, n_j)) - mu(phi m_i, n_j) - mu(m_i, psi n_j) = 0``."""
    m, p, n = sys.M.dim, sys.P.dim, sys.N.dim
    o_theta, o_psi = m * m, m * m + p * p
    nz = sys.mu._nz
    by_ij: dict = {}
    by_jk: dict = {}
    by_ik: dict = {}
    for i, j, k, c in nz:
        by_ij.setdefault((i, j), []).append((k, c))
        by_jk.setdefault((j, k), []).append((i, c))
        by_ik.setdefault((i, k), []).append((j, c))
    for i in range(m):
        for j in range(n):
            for k in range(p):
                row: dict[int, Fraction] = {}
                for l, c in by_ij.get((i, j), ()):
                    key = o_theta + l * p + k
                    row[key] = row.get(key, ZERO) + c
                for l, c in by_jk.get((j, k), ()):
                    key = i * m + l
                    row[key] = row.get(key, ZERO) - c
                for l, c in by_ik.get((i, k), ()):
                    key = o_psi + j * n + l
                    row[key] = row.get(key, ZERO) - c
                row = {key: v for key, v in row.items() if v}
                if row:
                    yield row


def compatible_triples(sys: TriSystem) -> TripleSpace:
    """Hom triples whose block map respects the pairing."""
    compat = null_space_sparse(_compatibility_rows(sys), triple_ambient(sys))
    return intersect(hom_triples(sys), compat)


def triple_block_map(t: TriAlgebra, triple: HomTriple) -> LinearMap:
    """``[a m p; b n; c] -> [0 phi(m) theta(p); 0 psi(n); 0]`` with no checks."""
    return block_diagonal(t, {"M": triple.phi, "P": triple.theta, "N": triple.psi})


def build_triple_derivation(t: TriAlgebra, triple: HomTriple) -> LinearMap:
    """The derivation of ``t`` induced by a compatible Hom triple.

    Raises:
        PreconditionError: if a member is not a bimodule map, or the triple
            breaks compatibility with the pairing.
        InvariantError: if the checks pass but the result is not a derivation.
    """
    sys = t.system
    for name, mod, f in (("phi", sys.M, triple.phi), ("theta", sys.P, triple.theta), ("psi", sys.N, triple.psi)):
        if f.dim != mod.dim:
            raise DimensionMismatchError(f"{name} acts on Q^{f.dim}, expected Q^{mod.dim}")
        if f.to_vector() not in hom_space(mod):
            raise PreconditionError("Hom membership", f"{name} is not a bimodule map")
    bad = pairing_compatibility(t, triple.phi, triple.theta, triple.psi)
    if bad:
        raise PreconditionError("pairing compatibility", f"fails at basis pair {bad[0].witness}")
    out = triple_block_map(t, triple)
    if not is_derivation(t.algebra, out):
        raise InvariantError("compatible Hom triple produced a non-derivation")
    return out


@dataclass(frozen=True)
class InnerWitness:
    """Central elements realising a triple, and the diagonal element they form."""

    x: Vector
    y: Vector
    z: Vector
    element: Vector


def is_inner_triple(t: TriAlgebra, triple: HomTriple) -> InnerWitness | None:
    """Find central ``x, y, z`` with ``triple = (tau_M^{x,y}, tau_P^{x,z}, tau_N^{y,z})``.

    When found, the inner derivation of ``diag(x, y, z)`` is compared with the
    triple's block map; a mismatch raises :class:`InvariantError`.
    """
    sys = t.system
    zA, zB, zC = _central_bases(sys)
    gens = _joint_generators(sys)
    target = triple.to_vector()
    if not gens:
        if any(target):
            return None
        coeffs: tuple = ()
    else:
        coeffs = solve(RatMatrix.from_columns(gens, len(target)), target)
        if coeffs is None:
            return None

    def mix(basis, cs, dim):
        out = zero_vector(dim)
        for c, v in zip(cs, basis):
            out = add_vectors(out, tuple(c * a for a in v))
        return out

    ka, kb = len(zA), len(zB)
    x = mix(zA, coeffs[:ka], sys.A.dim)
    y = mix(zB, coeffs[ka:ka + kb], sys.B.dim)
    z = mix(zC, coeffs[ka + kb:], sys.C.dim)
    element = add_vectors(add_vectors(embed_block(t, "A", x), embed_block(t, "B", y)), embed_block(t, "C", z))
    if inner_derivation(t.algebra, element) != triple_block_map(t, triple):
        raise InvariantError("joint Rosenblum witness does not reproduce the triple's block map")
    return InnerWitness(x, y, z, element)


__all__ = [
    "HomTriple",
    "InnerWitness",
    "TripleSpace",
    "build_triple_derivation",
    "compatible_triples",
    "hom_space",
    "hom_triples",
    "is_inner_triple",
    "joint_rosenblum",
    "left_multiplication",
    "right_multiplication",
    "rosenblum",
    "triple_ambient",
    "triple_block_map",
    "zr_space",
    "zr_triples",
]
