from __future__ import annotations

import random

import pytest

from tri3.algebra import algebra_from_matrices, basis_vector, multiply, upper_triangular_basis, validate_algebra
from tri3.errors import DimensionMismatchError, ValidationError
from tri3.instances import block_matrix_system, catalog, load_fixture
from tri3.linalg import add_vectors, zero_vector
from tri3.triangular import BLOCKS, TriSystem, build_triangular, embed_block, project_block, unit_of


@pytest.fixture(scope="module")
def t3():
    return build_triangular(load_fixture("t3_full"))


def test_all_scalar_system_is_upper_triangular_3x3(t3):
    # matrix units E11, E12, E13, E22, E23, E33 line up with A, M, P, B, N, C
    ref = algebra_from_matrices(upper_triangular_basis(3))
    assert t3.algebra.mult == ref.mult
    assert t3.dim == 6


def test_pairing_term_e12_e23(t3):
    e12 = embed_block(t3, "M", (1,))
    e23 = embed_block(t3, "N", (1,))
    assert multiply(t3.algebra, e12, e23) == embed_block(t3, "P", (1,))


def test_zero_pairing_kills_e12_e23():
    t = build_triangular(load_fixture("t3_mu_zero"))
    ref = build_triangular(load_fixture("t3_full"))
    e12, e23 = embed_block(t, "M", (1,)), embed_block(t, "N", (1,))
    assert multiply(t.algebra, e12, e23) == zero_vector(6)
    for i in range(6):
        for j in range(6):
            if (i, j) != (1, 4):
                assert t.algebra.mult[i][j] == ref.algebra.mult[i][j]


def test_unit_acts_on_modules(t3):
    e_a = embed_block(t3, "A", (1,))
    m = embed_block(t3, "M", (5,))
    assert multiply(t3.algebra, e_a, m) == m


def test_unit_of_t3_is_identity_matrix(t3):
    assert unit_of(t3) == (1, 0, 0, 1, 0, 1)
    assert t3.unit == unit_of(t3)


def test_non_unital_corner_has_no_unit():
    sys = load_fixture("t3_full")
    A = type(sys.A)(sys.A.dim, sys.A.mult, None)
    M = type(sys.M)(sys.M.dim, A, sys.M.right_algebra, sys.M.left_action, sys.M.right_action)
    P = type(sys.P)(sys.P.dim, A, sys.P.right_algebra, sys.P.left_action, sys.P.right_action)
    mu = type(sys.mu)(M, sys.N, P, sys.mu.tensor)
    t = build_triangular(TriSystem(A, sys.B, sys.C, M, sys.N, P, mu))
    assert unit_of(t) is None


def test_embed_project_round_trip(t3):
    rng = random.Random(0)
    for blk in BLOCKS:
        v = (rng.randint(-5, 5),)
        assert project_block(t3, blk, embed_block(t3, blk, v)) == v
    assert project_block(t3, "A", embed_block(t3, "M", (3,))) == (0,)


def test_six_embeds_rebuild_an_element():
    t = build_triangular(load_fixture("example1_d2"))
    rng = random.Random(1)
    w = tuple(rng.randint(-3, 3) for _ in range(t.dim))
    total = zero_vector(t.dim)
    for blk in BLOCKS:
        total = add_vectors(total, embed_block(t, blk, project_block(t, blk, w)))
    assert total == w


def test_embed_errors(t3):
    with pytest.raises(DimensionMismatchError):
        embed_block(t3, "M", (1, 2))
    with pytest.raises(KeyError):
        embed_block(t3, "Q", (1,))
    with pytest.raises(DimensionMismatchError):
        project_block(t3, "A", (1, 2))


# which block the product of two blocks lands in; absent pairs multiply to zero
PRODUCT_TABLE = {
    ("A", "A"): "A", ("A", "M"): "M", ("A", "P"): "P", ("M", "B"): "M", ("M", "N"): "P",
    ("P", "C"): "P", ("B", "B"): "B", ("B", "N"): "N", ("N", "C"): "N", ("C", "C"): "C",
}


@pytest.mark.parametrize("index", range(0, 60, 3))
def test_block_grading(index):
    sys = catalog(20)[index]
    t = build_triangular(sys)
    for x in BLOCKS:
        for y in BLOCKS:
            target = PRODUCT_TABLE.get((x, y))
            for i in t.block_range(x):
                for j in t.block_range(y):
                    prod = multiply(t.algebra, basis_vector(t.dim, i), basis_vector(t.dim, j))
                    for blk in BLOCKS:
                        if blk != target:
                            assert not any(project_block(t, blk, prod)), (x, y, blk)


@pytest.mark.parametrize("sys", catalog(4), ids=lambda s: s.name)
def test_constructed_algebra_is_associative(sys):
    t = build_triangular(sys)
    assert validate_algebra(t.algebra) == []
    assert t.dim == sum(sys.dims.values())
    if sys.is_unital:
        u = t.unit
        for j in range(t.dim):
            e = basis_vector(t.dim, j)
            assert multiply(t.algebra, u, e) == e == multiply(t.algebra, e, u)


def test_invalid_system_is_refused():
    sys = block_matrix_system(("Q", "Q2", "M2"))
    bad = TriSystem(sys.A, sys.C, sys.B, sys.M, sys.N, sys.P, sys.mu)
    with pytest.raises(ValidationError) as exc:
        build_triangular(bad)
    assert any(v.axiom == "references" for v in exc.value.violations)
