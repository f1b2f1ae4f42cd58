"""Derivations, inner derivations and first cohomology of structure-constant algebras.

Linear maps are square matrices whose column ``j`` is the image of ``e_j``.
Spaces of maps are :class:`~tri3.linalg.Subspace` objects over the
column-stacked vectorisation: entry ``(r, s)`` of a ``d x d`` map sits at
index ``s * d + r``, so the vector is the concatenation of the images of
``e_0, e_1, ...``.

The second half of the module deals with derivations of a
:class:`~tri3.triangular.TriAlgebra`: splitting one into its corner data,
rebuilding it, checking how the corner maps interact with the module
actions, and assembling block-diagonal derivations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import StructureAlgebra, Violation, basis_vector, center, multiply
from .errors import (
    CornerStructureError,
    DimensionMismatchError,
    InvariantError,
    NonUnitalError,
    NotADerivationError,
    PreconditionError,
)
from .linalg import (
    ZERO,
    RatMatrix,
    Subspace,
    Vector,
    add_vectors,
    as_vector,
    is_subset,
    is_zero_vector,
    null_space_sparse,
    scale_vector,
    sub_vectors,
    zero_vector,
)
from .triangular import BLOCKS, TriAlgebra, embed_block, project_block

MapSpace = Subspace


@dataclass(frozen=True)
class LinearMap:
    """A linear endomorphism of ``Q^dim``; column ``j`` is the image of ``e_j``."""

    dim: int
    matrix: RatMatrix

    def __post_init__(self) -> None:
        if self.matrix.rows != self.dim or self.matrix.cols != self.dim:
            raise DimensionMismatchError(
                f"{self.matrix.rows}x{self.matrix.cols} matrix for a map on Q^{self.dim}"
            )

    @classmethod
    def zero(cls, dim: int) -> LinearMap:
        return cls(dim, RatMatrix.zeros(dim, dim))

    @classmethod
    def identity(cls, dim: int) -> LinearMap:
        return cls(dim, RatMatrix.identity(dim))

    @classmethod
    def from_images(cls, images: Sequence[Sequence], dim: int | None = None) -> LinearMap:
        """Build the map sending ``e_j`` to ``images[j]``."""
        if dim is None:
            dim = len(images)
        if len(images) != dim:
            raise DimensionMismatchError(f"{len(images)} images for a map on Q^{dim}")
        return cls(dim, RatMatrix.from_columns(images, dim))

    @classmethod
    def from_vector(cls, vec: Sequence, dim: int) -> LinearMap:
        if len(vec) != dim * dim:
            raise DimensionMismatchError(f"vector of length {len(vec)} for a map on Q^{dim}")
        vec = as_vector(vec)
        return cls.from_images([vec[j * dim:(j + 1) * dim] for j in range(dim)], dim)

    def to_vector(self) -> Vector:
        return tuple(x for j in range(self.dim) for x in self.matrix.column(j))

    def image(self, j: int) -> Vector:
        return self.matrix.column(j)

    def apply(self, v: Sequence) -> Vector:
        return self.matrix.apply(v)

    def __call__(self, v: Sequence) -> Vector:
        return self.matrix.apply(v)

    def __add__(self, other: LinearMap) -> LinearMap:
        return LinearMap(self.dim, self.matrix + other.matrix)

    def __sub__(self, other: LinearMap) -> LinearMap:
        return LinearMap(self.dim, self.matrix - other.matrix)

    def scale(self, c) -> LinearMap:
        return LinearMap(self.dim, self.matrix.scale(c))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


def combine(space: Subspace, coeffs: Sequence, dim: int) -> LinearMap:
    """The map ``sum coeffs[i] * basis_i`` of a map space."""
    vec = zero_vector(space.ambient_dim)
    for c, b in zip(coeffs, space.vectors()):
        if c:
            vec = add_vectors(vec, scale_vector(c, b))
    return LinearMap.from_vector(vec, dim)


def basis_maps(space: Subspace, dim: int) -> list[LinearMap]:
    return [LinearMap.from_vector(v, dim) for v in space.vectors()]


# ---------------------------------------------------------------------------
# generic engine


def _index_tables(alg: StructureAlgebra):
    by_ij: dict = {}
    by_jk: dict = {}
    by_ik: dict = {}
    for i, j, k, c in alg.nonzero:
        by_ij.setdefault((i, j), []).append((k, c))
        by_jk.setdefault((j, k), []).append((i, c))
        by_ik.setdefault((i, k), []).append((j, c))
    return by_ij, by_jk, by_ik


def leibniz_rows(alg: StructureAlgebra):
    """Sparse equations ``D(e_i e_j) - D(e_i) e_j - e_i D(e_j) = 0``, coordinate ``k``.

    Every ordered pair ``(i, j)`` is included; the unknown ``D[r][s]`` is
    variable ``s * d + r``.
    """
    d = alg.dim
    by_ij, by_jk, by_ik = _index_tables(alg)
    for i in range(d):
        for j in range(d):
            prod = by_ij.get((i, j), ())
            for k in range(d):
                row: dict[int, Fraction] = {}
                for l, c in prod:
                    key = l * d + k
                    row[key] = row.get(key, ZERO) + c
                for l, c in by_jk.get((j, k), ()):
                    key = i * d + l
                    row[key] = row.get(key, ZERO) - c
                for l, c in by_ik.get((i, k), ()):
                    key = j * d + l
                    row[key] = row.get(key, ZERO) - c
                row = {key: v for key, v in row.items() if v}
                if row:
                    yield row


def derivation_space(alg: StructureAlgebra) -> MapSpace:
    """All derivations of ``alg`` as a subspace of ``Q^(d*d)``."""
    return null_space_sparse(leibniz_rows(alg), alg.dim * alg.dim)


def inner_derivation(alg: StructureAlgebra, t: Sequence) -> LinearMap:
    """The map ``w -> w t - t w``."""
    t = as_vector(t)
    images = []
    for j in range(alg.dim):
        e = basis_vector(alg.dim, j)
        images.append(sub_vectors(multiply(alg, e, t), multiply(alg, t, e)))
    return LinearMap.from_images(images, alg.dim)


def inner_derivation_space(alg: StructureAlgebra) -> MapSpace:
    gens = [inner_derivation(alg, basis_vector(alg.dim, s)).to_vector() for s in range(alg.dim)]
    return Subspace.span(gens, alg.dim * alg.dim)


def h1_dim(alg: StructureAlgebra) -> int:
    """``dim Der(alg) - dim Inn(alg)``.

    Raises:
        InvariantError: if some inner derivation is not in the computed
            derivation space, which would mean the engine is broken.
    """
    der = derivation_space(alg)
    inn = inner_derivation_space(alg)
    if not is_subset(inn, der):
        raise InvariantError("inner derivations are not contained in the derivation space")
    return der.dim - inn.dim


def leibniz_defects(alg: StructureAlgebra, f: LinearMap) -> list[tuple[int, int]]:
    """Ordered basis pairs ``(i, j)`` where ``f(e_i e_j) != f(e_i) e_j + e_i f(e_j)``."""
    if f.dim != alg.dim:
        raise DimensionMismatchError(f"map on Q^{f.dim} for a {alg.dim}-dimensional algebra")
    d = alg.dim
    table = alg.table
    cols = [{r: x for r, x in enumerate(f.image(j)) if x} for j in range(d)]
    bad = []
    for i in range(d):
        for j in range(d):
            acc: dict[int, Fraction] = {}
            for k, c in table.get((i, j), ()):
                for r, x in cols[k].items():
                    acc[r] = acc.get(r, ZERO) + c * x
            for l, x in cols[i].items():
                for k, c in table.get((l, j), ()):
                    acc[k] = acc.get(k, ZERO) - x * c
            for l, x in cols[j].items():
                for k, c in table.get((i, l), ()):
                    acc[k] = acc.get(k, ZERO) - x * c
            if any(acc.values()):
                bad.append((i, j))
    return bad


def is_derivation(alg: StructureAlgebra, f: LinearMap) -> bool:
    """True iff ``f(xy) = f(x) y + x f(y)`` holds exactly on every basis pair."""
    return not leibniz_defects(alg, f)


def center_dim(alg: StructureAlgebra) -> int:
    return center(alg).dim


# ---------------------------------------------------------------------------
# triangular algebras


@dataclass(frozen=True)
class CornerData:
    """The nine components a derivation of a triangular algebra splits into."""

    dA: LinearMap
    dB: LinearMap
    dC: LinearMap
    tauM: LinearMap
    tauP: LinearMap
    tauN: LinearMap
    mD: Vector
    pD: Vector
    nD: Vector

    @classmethod
    def zero(cls, t: TriAlgebra) -> CornerData:
        dims = t.system.dims
        return cls(
            *(LinearMap.zero(dims[b]) for b in ("A", "B", "C", "M", "P", "N")),
            zero_vector(dims["M"]), zero_vector(dims["P"]), zero_vector(dims["N"]),
        )


def _check_dims(t: TriAlgebra, c: CornerData) -> None:
    dims = t.system.dims
    pairs = [
        ("dA", c.dA.dim, dims["A"]), ("dB", c.dB.dim, dims["B"]), ("dC", c.dC.dim, dims["C"]),
        ("tauM", c.tauM.dim, dims["M"]), ("tauP", c.tauP.dim, dims["P"]), ("tauN", c.tauN.dim, dims["N"]),
        ("mD", len(c.mD), dims["M"]), ("pD", len(c.pD), dims["P"]), ("nD", len(c.nD), dims["N"]),
    ]
    for name, got, want in pairs:
        if got != want:
            raise DimensionMismatchError(f"{name} has dimension {got}, expected {want}")


def extract_corners(t: TriAlgebra, d: LinearMap) -> CornerData:
    """Split a derivation of ``t`` into corner derivations, module maps and three elements.

    Every block the decomposition predicts to vanish is checked, as are the
    cross terms tying the pieces together.

    Raises:
        NonUnitalError: if A, B or C has no unit.
        NotADerivationError: if ``d`` breaks the Leibniz rule.
        CornerStructureError: if the image of some block has the wrong shape;
            ``case`` numbers the offending family (1: e_A, 2: A, 3: e_B, 4: B,
            5: e_C, 6: C, 7: M, 8: P, 9: N).
    """
    sys = t.system
    if not sys.is_unital:
        raise NonUnitalError("corner extraction needs unital A, B and C")
    defects = leibniz_defects(t.algebra, d)
    if defects:
        raise NotADerivationError(f"Leibniz rule fails on basis pair {defects[0]}")
    A, B, C, M, N, P, mu = sys.A, sys.B, sys.C, sys.M, sys.N, sys.P, sys.mu

    def image(block: str, v: Sequence) -> dict[str, Vector]:
        w = d(embed_block(t, block, v))
        return {b: project_block(t, b, w) for b in BLOCKS}

    def expect_zero(case: int, img: dict[str, Vector], blocks: str, what: str) -> None:
        for b in blocks:
            if not is_zero_vector(img[b]):
                raise CornerStructureError(case, f"image of {what} has a nonzero {b}-component")

    def expect(case: int, got: Vector, want: Vector, what: str) -> None:
        if got != want:
            raise CornerStructureError(case, what)

    img = image("A", A.unit)
    expect_zero(1, img, "ABNC", "e_A")
    mD, pD = img["M"], img["P"]

    img = image("B", B.unit)
    expect_zero(3, img, "APBC", "e_B")
    expect(3, img["M"], scale_vector(-1, mD), "M-component of D(e_B) is not -m_D")
    nD = img["N"]

    img = image("C", C.unit)
    expect_zero(5, img, "AMBC", "e_C")
    expect(5, img["P"], scale_vector(-1, pD), "P-component of D(e_C) is not -p_D")
    expect(5, img["N"], scale_vector(-1, nD), "N-component of D(e_C) is not -n_D")

    cols: dict[str, list[Vector]] = {b: [] for b in ("A", "B", "C", "M", "P", "N")}
    for i in range(A.dim):
        a = basis_vector(A.dim, i)
        img = image("A", a)
        expect_zero(2, img, "BNC", f"a_{i}")
        expect(2, img["M"], M.left(a, mD), f"M-component of D(a_{i}) is not a m_D")
        expect(2, img["P"], P.left(a, pD), f"P-component of D(a_{i}) is not a p_D")
        cols["A"].append(img["A"])
    for i in range(B.dim):
        b = basis_vector(B.dim, i)
        img = image("B", b)
        expect_zero(4, img, "APC", f"b_{i}")
        expect(4, img["M"], scale_vector(-1, M.right(mD, b)), f"M-component of D(b_{i}) is not -m_D b")
        expect(4, img["N"], N.left(b, nD), f"N-component of D(b_{i}) is not b n_D")
        cols["B"].append(img["B"])
    for i in range(C.dim):
        c = basis_vector(C.dim, i)
        img = image("C", c)
        expect_zero(6, img, "AMB", f"c_{i}")
        expect(6, img["P"], scale_vector(-1, P.right(pD, c)), f"P-component of D(c_{i}) is not -p_D c")
        expect(6, img["N"], scale_vector(-1, N.right(nD, c)), f"N-component of D(c_{i}) is not -n_D c")
        cols["C"].append(img["C"])
    for i in range(M.dim):
        m = basis_vector(M.dim, i)
        img = image("M", m)
        expect_zero(7, img, "ABNC", f"m_{i}")
        expect(7, img["P"], mu.apply(m, nD), f"P-component of D(m_{i}) is not mu(m, n_D)")
        cols["M"].append(img["M"])
    for i in range(P.dim):
        img = image("P", basis_vector(P.dim, i))
        expect_zero(8, img, "AMBNC", f"p_{i}")
        cols["P"].append(img["P"])
    for i in range(N.dim):
        n = basis_vector(N.dim, i)
        img = image("N", n)
        expect_zero(9, img, "AMBC", f"n_{i}")
        expect(9, img["P"], scale_vector(-1, mu.apply(mD, n)), f"P-component of D(n_{i}) is not -mu(m_D, n)")
        cols["N"].append(img["N"])

    maps = {b: LinearMap.from_images(cols[b], sys.component(b).dim) for b in cols}
    for case, b in ((2, "A"), (4, "B"), (6, "C")):
        if not is_derivation(sys.component(b), maps[b]):
            raise CornerStructureError(case, f"the {b}-corner map is not a derivation of {b}")
    return CornerData(
        maps["A"], maps["B"], maps["C"], maps["M"], maps["P"], maps["N"], mD, pD, nD
    )


def apply_corner_formula(t: TriAlgebra, c: CornerData, w: Sequence) -> Vector:
    """Evaluate the map described by corner data ``c`` at the element ``w`` of ``t``."""
    sys = t.system
    M, N, P, mu = sys.M, sys.N, sys.P, sys.mu
    a, m, p, b, n, cc = (project_block(t, blk, w) for blk in BLOCKS)
    out_a = c.dA(a)
    out_m = add_vectors(sub_vectors(M.left(a, c.mD), M.right(c.mD, b)), c.tauM(m))
    out_p = sub_vectors(P.left(a, c.pD), P.right(c.pD, cc))
    out_p = sub_vectors(out_p, mu.apply(c.mD, n))
    out_p = add_vectors(out_p, mu.apply(m, c.nD))
    out_p = add_vectors(out_p, c.tauP(p))
    out_b = c.dB(b)
    out_n = add_vectors(sub_vectors(N.left(b, c.nD), N.right(c.nD, cc)), c.tauN(n))
    out_c = c.dC(cc)
    return out_a + out_m + out_p + out_b + out_n + out_c


def reconstruct(t: TriAlgebra, c: CornerData) -> LinearMap:
    """The map on ``t`` whose corner data is ``c``."""
    _check_dims(t, c)
    images = [apply_corner_formula(t, c, basis_vector(t.dim, j)) for j in range(t.dim)]
    return LinearMap.from_images(images, t.dim)


_IDENTITIES = (
    (1, "tau_M(a m) = D_A(a) m + a tau_M(m)"),
    (2, "tau_M(m b) = m D_B(b) + tau_M(m) b"),
    (3, "tau_P(a p) = D_A(a) p + a tau_P(p)"),
    (4, "tau_P(p c) = p D_C(c) + tau_P(p) c"),
    (5, "tau_N(b n) = D_B(b) n + b tau_N(n)"),
    (6, "tau_N(n c) = n D_C(c) + tau_N(n) c"),
)


def check_corner_identities(t: TriAlgebra, c: CornerData) -> list[Violation]:
    """How the module maps of ``c`` interact with the corner derivations.

    Each violation's ``axiom`` is the failed identity and ``where`` carries its
    number ``identity 1`` ... ``identity 6``; ``witness`` is the pair of basis
    indices (algebra element, module element) in the order they appear.
    """
    _check_dims(t, c)
    sys = t.system
    out: list[Violation] = []

    def left_rule(num, alg, mod, dalg, tau):
        for i in range(alg.dim):
            a = basis_vector(alg.dim, i)
            da = dalg(a)
            for j in range(mod.dim):
                m = basis_vector(mod.dim, j)
                if tau(mod.left(a, m)) != add_vectors(mod.left(da, m), mod.left(a, tau(m))):
                    out.append(Violation(_IDENTITIES[num - 1][1], (i, j), f"identity {num}"))

    def right_rule(num, alg, mod, dalg, tau):
        for j in range(mod.dim):
            m = basis_vector(mod.dim, j)
            tm = tau(m)
            for i in range(alg.dim):
                b = basis_vector(alg.dim, i)
                if tau(mod.right(m, b)) != add_vectors(mod.right(m, dalg(b)), mod.right(tm, b)):
                    out.append(Violation(_IDENTITIES[num - 1][1], (j, i), f"identity {num}"))

    left_rule(1, sys.A, sys.M, c.dA, c.tauM)
    right_rule(2, sys.B, sys.M, c.dB, c.tauM)
    left_rule(3, sys.A, sys.P, c.dA, c.tauP)
    right_rule(4, sys.C, sys.P, c.dC, c.tauP)
    left_rule(5, sys.B, sys.N, c.dB, c.tauN)
    right_rule(6, sys.C, sys.N, c.dC, c.tauN)
    return out


def pairing_compatibility(t: TriAlgebra, tauM: LinearMap, tauP: LinearMap, tauN: LinearMap) -> list[Violation]:
    """Basis pairs where ``tau_P(mu(m, n)) != mu(tau_M m, n) + mu(m, tau_N n)``."""
    sys = t.system
    mu = sys.mu
    out = []
    for i in range(sys.M.dim):
        m = basis_vector(sys.M.dim, i)
        tm = tauM(m)
        for j in range(sys.N.dim):
            n = basis_vector(sys.N.dim, j)
            if tauP(mu.apply(m, n)) != add_vectors(mu.apply(tm, n), mu.apply(m, tauN(n))):
                out.append(Violation("tau_P(mu(m, n)) = mu(tau_M m, n) + mu(m, tau_N n)", (i, j), "mu"))
    return out


def block_diagonal(t: TriAlgebra, parts: dict[str, LinearMap]) -> LinearMap:
    """Map acting blockwise by ``parts[block]``; absent blocks map to zero."""
    images = []
    for blk in BLOCKS:
        f = parts.get(blk)
        dim = t.system.component(blk).dim
        if f is not None and f.dim != dim:
            raise DimensionMismatchError(f"{blk}-block map on Q^{f.dim}, expected Q^{dim}")
        for j in range(dim):
            img = f.image(j) if f is not None else zero_vector(dim)
            images.append(embed_block(t, blk, img))
    return LinearMap.from_images(images, t.dim)


def assemble_diagonal(
    t: TriAlgebra,
    dA: LinearMap,
    dB: LinearMap,
    dC: LinearMap,
    tauM: LinearMap,
    tauP: LinearMap,
    tauN: LinearMap,
) -> LinearMap:
    """Block-diagonal derivation built from corner derivations and module maps.

    Raises:
        PreconditionError: naming the first requirement that fails: one of
            the corner maps is not a derivation, one of the six module
            identities fails, or the pairing compatibility fails.
        InvariantError: if every precondition holds and the result is still
            not a derivation.
    """
    sys = t.system
    for name, alg, f in (("D_A", sys.A, dA), ("D_B", sys.B, dB), ("D_C", sys.C, dC)):
        if f.dim != alg.dim:
            raise DimensionMismatchError(f"{name} acts on Q^{f.dim}, expected Q^{alg.dim}")
        if not is_derivation(alg, f):
            raise PreconditionError(f"{name} is a derivation", "Leibniz rule fails")
    dims = sys.dims
    corners = CornerData(
        dA, dB, dC, tauM, tauP, tauN,
        zero_vector(dims["M"]), zero_vector(dims["P"]), zero_vector(dims["N"]),
    )
    bad = check_corner_identities(t, corners)
    if bad:
        raise PreconditionError(bad[0].where, f"{bad[0].axiom} fails at {bad[0].witness}")
    bad = pairing_compatibility(t, tauM, tauP, tauN)
    if bad:
        raise PreconditionError("pairing compatibility", f"{bad[0].axiom} fails at {bad[0].witness}")
    out = block_diagonal(t, {"A": dA, "M": tauM, "P": tauP, "B": dB, "N": tauN, "C": dC})
    if not is_derivation(t.algebra, out):
        raise InvariantError("assembled block-diagonal map is not a derivation")
    return out
