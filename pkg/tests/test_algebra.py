from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import invertible_matrices, oracle_center_dim
from tri3.algebra import (
    Bimodule,
    Pairing,
    StructureAlgebra,
    algebra_from_matrices,
    basis_vector,
    center,
    change_basis,
    dense_tensor,
    diagonal_matrix_basis,
    full_matrix_basis,
    is_commutative,
    matrix_unit,
    multiply,
    rectangular_bimodule,
    scalar_algebra,
    scalar_module,
    upper_triangular_basis,
    validate_algebra,
    validate_bimodule,
    validate_pairing,
)
from tri3.errors import DimensionMismatchError, InconsistentSystemError, ShapeError
from tri3.linalg import RatMatrix, Subspace

Q = scalar_algebra()
M2 = algebra_from_matrices(full_matrix_basis(2))
T3 = algebra_from_matrices(upper_triangular_basis(3))


def brute_associative(mult, dim) -> bool:
    """Exhaustive ``(e_i e_j) e_k = e_i (e_j e_k)`` by explicit sums."""
    for i, j, k in product(range(dim), repeat=3):
        for r in range(dim):
            lhs = sum(mult[i][j][l] * mult[l][k][r] for l in range(dim))
            rhs = sum(mult[j][k][l] * mult[i][l][r] for l in range(dim))
            if lhs != rhs:
                return False
    return True


# structure algebras

def test_scalar_field_is_valid():
    assert validate_algebra(Q) == []


def test_matrix_algebra_is_valid():
    assert validate_algebra(M2) == []
    assert validate_algebra(T3) == []


def test_square_to_first_basis_vector_matches_brute_force():
    alg = StructureAlgebra.from_entries(2, [(0, 0, 0, 1), (1, 1, 0, 1)])
    found = validate_algebra(alg)
    assert bool(found) == (not brute_associative(alg.mult, 2))
    assert {v.axiom for v in found} == {"associativity"}
    # (e1 e1) e0 = e0 but e1 (e1 e0) = 0
    assert any(v.witness[:3] == (1, 1, 0) for v in found)


def test_wrong_unit_is_reported():
    alg = StructureAlgebra.from_entries(1, [(0, 0, 0, 1)], [2])
    axioms = {v.axiom for v in validate_algebra(alg)}
    assert axioms & {"left-unit", "right-unit"}


def test_tensor_shape_is_checked():
    with pytest.raises(ShapeError):
        dense_tensor((2, 2, 2), [(0, 0, 2, 1)])
    with pytest.raises((ShapeError, DimensionMismatchError)):
        StructureAlgebra(2, dense_tensor((1, 2, 2)))


@settings(max_examples=40)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.sampled_from([-1, 1, 2]))
def test_single_perturbation_is_detected(i, j, k, delta):
    # M2 in matrix units: perturbing any slot of the structure tensor breaks an axiom
    entries = [(a, b, c, x) for a in range(4) for b in range(4) for c in range(4)
               if (x := M2.mult[a][b][c])]
    entries.append((i, j, k, delta))
    bad = StructureAlgebra.from_entries(4, entries, M2.unit)
    assert validate_algebra(bad)


def test_multiply_examples():
    assert multiply(Q, (2,), (3,)) == (6,)
    e11, e12 = basis_vector(4, 0), basis_vector(4, 1)
    assert multiply(M2, e11, e12) == e12
    assert multiply(M2, e12, e12) == (0, 0, 0, 0)
    with pytest.raises(DimensionMismatchError):
        multiply(M2, (1,), e11)


# centers

def test_center_of_diagonal_algebra_is_everything():
    alg = algebra_from_matrices(diagonal_matrix_basis(3))
    assert is_commutative(alg)
    assert center(alg) == Subspace.full(3)


def test_center_of_m2_is_scalars():
    z = center(M2)
    assert z.dim == oracle_center_dim(M2.mult, 4) == 1
    assert M2.unit in z


def test_center_of_t3_is_scalars():
    z = center(T3)
    assert z.dim == oracle_center_dim(T3.mult, 6) == 1
    assert T3.unit in z


@pytest.mark.parametrize("alg", [Q, M2, T3, algebra_from_matrices(diagonal_matrix_basis(2))])
def test_center_is_a_unital_subalgebra(alg):
    z = center(alg)
    for x in z.vectors():
        for y in z.vectors():
            assert multiply(alg, x, y) in z
    assert alg.unit in z


# bimodules

def test_scalar_bimodule_is_valid():
    assert validate_bimodule(scalar_module(Q, Q, 1)) == []


def test_column_vectors_over_m2_are_valid():
    one = [matrix_unit(1, 1, 0, 0)]
    mod = rectangular_bimodule(M2, full_matrix_basis(2), algebra_from_matrices(one), one)
    assert validate_bimodule(mod) == []


@pytest.mark.parametrize("slot", [(0, 0, 0), (1, 1, 0), (3, 1, 1), (2, 0, 1)])
def test_perturbed_left_action_is_detected(slot):
    one = [matrix_unit(1, 1, 0, 0)]
    good = rectangular_bimodule(M2, full_matrix_basis(2), algebra_from_matrices(one), one)
    lam = [list(map(list, plane)) for plane in good.left_action]
    i, j, k = slot
    lam[i][j][k] += 1
    bad = Bimodule(good.dim, good.left_algebra, good.right_algebra, lam, good.right_action)
    axioms = {v.axiom for v in validate_bimodule(bad, "M")}
    assert axioms & {"left-module", "left-unit-action", "bimodule-commutation"}


# pairings

def test_zero_and_multiplication_pairings_are_valid():
    m = scalar_module(Q, Q, 1)
    assert validate_pairing(Pairing.zero(m, m, m)) == []
    assert validate_pairing(Pairing(m, m, m, dense_tensor((1, 1, 1), [(0, 0, 0, 1)]))) == []


def test_unbalanced_pairing_is_rejected():
    # B = Q^2 acts on M through its first idempotent and on N through its second,
    # so mu(m b0, n) = mu(m, n) while mu(m, b0 n) = 0
    B = algebra_from_matrices(diagonal_matrix_basis(2))
    M = Bimodule(1, Q, B, dense_tensor((1, 1, 1), [(0, 0, 0, 1)]), dense_tensor((1, 2, 1), [(0, 0, 0, 1)]))
    N = Bimodule(1, B, Q, dense_tensor((2, 1, 1), [(1, 0, 0, 1)]), dense_tensor((1, 1, 1), [(0, 0, 0, 1)]))
    P = scalar_module(Q, Q, 1)
    assert validate_bimodule(M) == [] and validate_bimodule(N) == []
    found = validate_pairing(Pairing(M, N, P, dense_tensor((1, 1, 1), [(0, 0, 0, 1)])))
    assert {v.axiom for v in found} == {"pairing-balance"}


def test_pairing_with_mismatched_algebras_raises():
    m = scalar_module(Q, Q, 1)
    other = rectangular_bimodule(M2, full_matrix_basis(2), Q, [matrix_unit(1, 1, 0, 0)])
    with pytest.raises(InconsistentSystemError):
        validate_pairing(Pairing(m, m, other, dense_tensor((1, 1, 2))))


# change of basis

def test_change_basis_rejects_singular():
    with pytest.raises(ValueError):
        change_basis(M2, RatMatrix.zeros(4, 4))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["Q2", "T2", "M2"]), st.data())
def test_change_basis_preserves_axioms_and_center(kind, data):
    bases = {"Q2": diagonal_matrix_basis(2), "T2": upper_triangular_basis(2), "M2": full_matrix_basis(2)}
    alg = algebra_from_matrices(bases[kind])
    g = data.draw(invertible_matrices(alg.dim))
    moved = change_basis(alg, g)
    assert validate_algebra(moved) == []
    assert center(moved).dim == center(alg).dim
    assert brute_associative(moved.mult, moved.dim)
