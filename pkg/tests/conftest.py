"""Shared oracles and strategies.

The oracles rebuild every linear system densely from the raw structure
tensors and hand it to sympy, so they share no code with the sparse
elimination inside the package.
"""

from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from tri3.algebra import Bimodule, Pairing, StructureAlgebra, dense_tensor, scalar_algebra, scalar_module
from tri3.instances import load_fixture
from tri3.linalg import RatMatrix
from tri3.triangular import TriSystem

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


def sympy_rank(rows, ncols: int) -> int:
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                          for x in r] for r in rows]).rank()


def oracle_der_dim(mult, dim: int) -> int:
    """``dim Der`` from the dense Leibniz system ``D(e_i e_j) = D(e_i) e_j + e_i D(e_j)``.

    Unknown ``D[r][s]`` (image of ``e_s``, coordinate ``r``) sits at index ``r * dim + s``.
    """
    rows = []
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                row = [0] * (dim * dim)
                for l in range(dim):
                    if mult[i][j][l]:
                        row[k * dim + l] += mult[i][j][l]
                    # D(e_i)_l e_l e_j and e_i D(e_j)_l e_l
                    if mult[l][j][k]:
                        row[l * dim + i] -= mult[l][j][k]
                    if mult[i][l][k]:
                        row[l * dim + j] -= mult[i][l][k]
                if any(row):
                    rows.append(row)
    return dim * dim - sympy_rank(rows, dim * dim)


def oracle_inn_dim(mult, dim: int) -> int:
    """Rank of ``t -> (w -> w t - t w)`` as a dense matrix."""
    cols = []
    for t in range(dim):
        col = []
        for s in range(dim):
            for r in range(dim):
                col.append(mult[s][t][r] - mult[t][s][r])
        cols.append(col)
    return sympy_rank(cols, dim * dim)


def oracle_center_dim(mult, dim: int) -> int:
    rows = []
    for j in range(dim):
        for k in range(dim):
            rows.append([mult[i][j][k] - mult[j][i][k] for i in range(dim)])
    return dim - sympy_rank(rows, dim)


small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows: int = 5, max_cols: int = 5, elements=small_rationals):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(elements, min_size=c, max_size=c), min_size=r, max_size=r))
    return RatMatrix.from_rows(rows, c)


@st.composite
def low_rank_matrices(draw, max_rows: int = 5, max_cols: int = 5):
    """Products of two thin integer matrices, so rank deficiency is common."""
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    k = draw(st.integers(1, min(r, c)))
    ints = st.integers(-3, 3)
    left = RatMatrix.from_rows(draw(st.lists(st.lists(ints, min_size=k, max_size=k), min_size=r, max_size=r)), k)
    right = RatMatrix.from_rows(draw(st.lists(st.lists(ints, min_size=c, max_size=c), min_size=k, max_size=k)), c)
    return left @ right


@st.composite
def invertible_matrices(draw, n: int):
    """Unit lower times unit upper triangular, times a diagonal: always invertible."""
    ints = st.integers(-2, 2)
    lower = [[1 if i == j else (draw(ints) if j < i else 0) for j in range(n)] for i in range(n)]
    upper = [[draw(st.sampled_from([1, -1, 2])) if i == j else (draw(ints) if j > i else 0) for j in range(n)]
             for i in range(n)]
    return RatMatrix.from_rows(lower, n) @ RatMatrix.from_rows(upper, n)


# systems


def dual_numbers_system():
    """A = Q[x]/(x^2) acting on M = P = Q through x -> 0; B = C = Q."""
    A = StructureAlgebra.from_entries(2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)], [1, 0])
    Q = scalar_algebra()
    M = Bimodule(1, A, Q, dense_tensor((2, 1, 1), [(0, 0, 0, 1)]), dense_tensor((1, 1, 1), [(0, 0, 0, 1)]))
    P = Bimodule(1, A, Q, dense_tensor((2, 1, 1), [(0, 0, 0, 1)]), dense_tensor((1, 1, 1), [(0, 0, 0, 1)]))
    N = scalar_module(Q, Q, 1)
    return TriSystem(A, Q, Q, M, N, P, Pairing(M, N, P, dense_tensor((1, 1, 1), [(0, 0, 0, 1)])), name="dual")


def non_unital_system():
    sys = load_fixture("t3_mu_zero")
    A = StructureAlgebra(1, sys.A.mult, None)
    M = Bimodule(1, A, sys.B, sys.M.left_action, sys.M.right_action)
    P = Bimodule(1, A, sys.C, sys.P.left_action, sys.P.right_action)
    return TriSystem(A, sys.B, sys.C, M, sys.N, P, Pairing.zero(M, sys.N, P), name="no-unit")
