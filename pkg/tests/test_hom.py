from __future__ import annotations

import pytest
import sympy

from tri3.algebra import (
    Pairing,
    StructureAlgebra,
    full_matrix_basis,
    scalar_algebra,
    scalar_module,
    zero_bimodule_actions,
)
from tri3.derivations import LinearMap, inner_derivation_space, is_derivation
from tri3.errors import PreconditionError
from tri3.hom import (
    HomTriple,
    build_triple_derivation,
    compatible_triples,
    hom_space,
    hom_triples,
    is_inner_triple,
    joint_rosenblum,
    triple_block_map,
    zr_space,
    zr_triples,
)
from tri3.instances import catalog, load_fixture, matrix_corner, scalar_tower
from tri3.linalg import Subspace, is_subset
from tri3.triangular import TriSystem, build_triangular

Q = scalar_algebra()


def scalar_triple(a, b, c):
    one = LinearMap.identity(1)
    return HomTriple(one.scale(a), one.scale(b), one.scale(c))


def zero_action_system():
    z = StructureAlgebra.from_entries(1, [])
    M, N, P = (zero_bimodule_actions(z, z, 2) for _ in range(3))
    return TriSystem(z, z, z, M, N, P, Pairing.zero(M, N, P), name="zero-actions")


def sympy_commutant_dim(mats, n):
    """Dimension of ``{X : X g = g X}`` for the given n x n matrices."""
    xs = sympy.symbols(f"x0:{n * n}")
    X = sympy.Matrix(n, n, xs)
    eqs = []
    for g in mats:
        G = sympy.Matrix(n, n, list(g.entries))
        eqs.extend(list(X * G - G * X))
    A, _ = sympy.linear_eq_to_matrix(eqs, xs)
    return n * n - A.rank()


# Hom and ZR

@pytest.mark.parametrize("d", [1, 2, 3])
def test_scalar_actions_allow_every_map(d):
    mod = scalar_module(Q, Q, d)
    assert hom_space(mod).dim == d * d
    assert zr_space(mod) == Subspace.span([LinearMap.identity(d).to_vector()], d * d)


def test_column_vectors_over_m2():
    mod = matrix_corner(2).M
    assert hom_space(mod).dim == sympy_commutant_dim(full_matrix_basis(2), 2) == 1
    assert zr_space(mod).dim == 1
    assert LinearMap.identity(2).to_vector() in hom_space(mod)


def test_zero_actions():
    sys = zero_action_system()
    assert hom_space(sys.M).dim == 4
    assert zr_space(sys.M).dim == 0
    assert joint_rosenblum(sys).dim == 0


# joint Rosenblum and compatible triples

def test_joint_rosenblum_scalar_pattern():
    # (x, y, z) -> (y - x, z - x, z - y) has rank 2
    assert sympy.Matrix([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]]).rank() == 2
    assert joint_rosenblum(load_fixture("t3_full")).dim == 2
    assert joint_rosenblum(load_fixture("t3_mu_zero")).dim == 2
    assert joint_rosenblum(load_fixture("example1_d2")).dim == 2


def test_compatible_triples_examples():
    assert compatible_triples(load_fixture("t3_full")).dim == 2
    t3 = compatible_triples(load_fixture("t3_full"))
    # lambda_2 = lambda_1 + lambda_3
    assert scalar_triple(1, 3, 2).to_vector() in t3
    assert scalar_triple(1, 1, 1).to_vector() not in t3
    assert compatible_triples(load_fixture("example1_d2")).dim == 12


@pytest.mark.parametrize("sys", [load_fixture("t3_mu_zero"), scalar_tower(2, 3, 1)], ids=lambda s: s.name or "tower")
def test_zero_pairing_imposes_nothing(sys):
    assert compatible_triples(sys) == hom_triples(sys)
    assert compatible_triples(sys).dim == sum(hom_space(m).dim for m in (sys.M, sys.P, sys.N))


# the triple derivation

def test_zero_triple_gives_zero_map():
    sys = load_fixture("t3_full")
    t = build_triangular(sys)
    assert build_triple_derivation(t, HomTriple.zero(sys)).is_zero()


def test_compatible_scalar_triple_is_a_derivation():
    t = build_triangular(load_fixture("t3_full"))
    d = build_triple_derivation(t, scalar_triple(1, 1, 0))
    assert is_derivation(t.algebra, d)


def test_incompatible_scalar_triple_is_refused():
    t = build_triangular(load_fixture("t3_full"))
    with pytest.raises(PreconditionError) as exc:
        build_triple_derivation(t, scalar_triple(1, 1, 1))
    assert exc.value.identity == "pairing compatibility"
    assert not is_derivation(t.algebra, triple_block_map(t, scalar_triple(1, 1, 1)))


def test_non_module_map_is_refused():
    sys = matrix_corner(2)
    t = build_triangular(sys)
    phi = LinearMap.from_vector([0, 1, 0, 0], 2)
    triple = HomTriple(phi, LinearMap.zero(2), LinearMap.zero(1))
    with pytest.raises(PreconditionError) as exc:
        build_triple_derivation(t, triple)
    assert exc.value.identity == "Hom membership"


# inner triples

def test_zero_triple_has_zero_witness():
    sys = load_fixture("t3_full")
    w = is_inner_triple(build_triangular(sys), HomTriple.zero(sys))
    assert w is not None and not any(w.element)


def test_witness_for_compatible_scalar_triple():
    t = build_triangular(load_fixture("t3_full"))
    w = is_inner_triple(t, scalar_triple(1, 1, 0))
    assert w is not None
    (x,), (y,), (z,) = w.x, w.y, w.z
    assert (y - x, z - x, z - y) == (1, 1, 0)


def test_outer_triple_has_no_witness():
    t = build_triangular(load_fixture("t3_mu_zero"))
    assert is_inner_triple(t, scalar_triple(1, 0, 0)) is None


# properties over the catalog

CATALOG = catalog(6)


@pytest.mark.parametrize("sys", CATALOG, ids=lambda s: s.name)
def test_inclusions(sys):
    for mod in (sys.M, sys.P, sys.N):
        assert is_subset(zr_space(mod), hom_space(mod))
    joint = joint_rosenblum(sys)
    assert is_subset(joint, zr_triples(sys))
    assert is_subset(joint, compatible_triples(sys))


@pytest.mark.parametrize("sys", CATALOG, ids=lambda s: s.name)
def test_compatibility_decides_derivations(sys):
    t = build_triangular(sys)
    compatible = compatible_triples(sys)
    for vec in compatible.vectors():
        assert is_derivation(t.algebra, build_triple_derivation(t, HomTriple.from_vector(sys, vec)))
    for vec in hom_triples(sys).vectors():
        if vec not in compatible:
            assert not is_derivation(t.algebra, triple_block_map(t, HomTriple.from_vector(sys, vec)))


@pytest.mark.parametrize("sys", CATALOG, ids=lambda s: s.name)
def test_witness_iff_inner(sys):
    t = build_triangular(sys)
    inn = inner_derivation_space(t.algebra)
    for vec in compatible_triples(sys).vectors():
        triple = HomTriple.from_vector(sys, vec)
        d = build_triple_derivation(t, triple)
        assert (is_inner_triple(t, triple) is not None) == (d.to_vector() in inn)
