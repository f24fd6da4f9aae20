import pytest
from hypothesis import given, settings, strategies as st

from extlim.acceptance import is_hermite, is_smith_diagonal
from extlim.zmat import (
    IntMatrix, block_diag, determinant, hnf, image_intersection, inverse_unimodular,
    invariant_diagonal, kernel_basis, kronecker, rank, same_lattice, snf, solve,
)

M = IntMatrix.from_rows
I = IntMatrix.identity


@st.composite
def matrices(draw, max_dim=4, bound=12):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    data = draw(st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c))
    return IntMatrix(r, c, data)


# hnf

def test_hnf_gcd_of_generators():
    assert hnf(M([[6, 4]])).basis == M([[2]])


def test_hnf_zero_matrix_gives_empty_basis():
    B = hnf(IntMatrix.zeros(3, 2))
    assert B.rank == 0 and B.ambient == 3


def test_hnf_canonical_input_unchanged():
    assert hnf(M([[2, 0], [0, 3]])).basis == M([[2, 0], [0, 3]])


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_is_canonical_and_spans(A):
    B = hnf(A)
    assert is_hermite(B.basis, B.pivots)
    assert B.rank == rank(A)
    for col in A.to_columns():
        assert B.contains(col)
    for col in B.basis.to_columns():
        assert solve(A, col) is not None
    assert hnf(B.basis).basis == B.basis


@settings(max_examples=80, deadline=None)
@given(matrices(max_dim=3), st.integers(0, 10_000))
def test_hnf_invariant_under_column_operations(A, seed):
    import random
    from extlim.samples import random_unimodular
    if A.cols == 0:
        return
    U = random_unimodular(random.Random(seed), A.cols)
    assert hnf(A @ U).basis == hnf(A).basis


# snf

def test_snf_examples():
    assert snf(M([[2, 0], [0, 3]])).D == M([[1, 0], [0, 6]])
    assert snf(I(3)).D == I(3)
    assert snf(M([[0]])).D == M([[0]])


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_decomposition(A):
    S = snf(A)
    assert S.U @ A @ S.V == S.D
    assert abs(determinant(S.U)) == 1 and abs(determinant(S.V)) == 1
    assert is_smith_diagonal(S.D)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-60, 60), min_size=0, max_size=6))
def test_diagonal_fast_path_matches_full_smith(entries):
    D = IntMatrix.diag(entries)
    want = [d for d in snf(D).diagonal() if d != 0]
    assert invariant_diagonal(D) == want


def test_smith_determinant_product():
    A = M([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    d = snf(A).diagonal()
    assert d == [2, 6, 12]
    assert abs(determinant(A)) == 2 * 6 * 12


# kernels, solving, intersections

def test_kernel_examples():
    assert same_lattice(kernel_basis(M([[1, 1]])), M([[1], [-1]]))
    assert kernel_basis(I(2)).rank == 0
    assert same_lattice(kernel_basis(M([[2, -4]])), M([[2], [1]]))


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_is_saturated_and_complete(A):
    K = kernel_basis(A)
    assert (A @ K.basis).is_zero()
    assert K.rank == A.cols - rank(A)
    # saturation: Smith factors of the kernel basis are all 1
    assert all(d == 1 for d in invariant_diagonal(K.basis))


def test_solve_examples():
    assert solve(M([[2]]), [4]) == [2]
    assert solve(M([[2]]), [3]) is None
    x = solve(M([[1, 1], [0, 2]]), [3, 2])
    assert x == [2, 1]


@settings(max_examples=100, deadline=None)
@given(matrices(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_roundtrip(A, coeffs):
    b = A.apply(coeffs[:A.cols])
    x = solve(A, b)
    assert x is not None and A.apply(x) == b


def test_intersection_examples():
    assert image_intersection(M([[2]]), M([[3]])).basis == M([[6]])
    A = M([[1, 2], [3, 4]])
    assert image_intersection(A, A).basis == hnf(A).basis
    X = image_intersection(M([[2, 0], [0, 1]]), M([[1], [1]]))
    assert X.basis == M([[2], [2]])


@settings(max_examples=60, deadline=None)
@given(matrices(max_dim=3), matrices(max_dim=3))
def test_intersection_contained_in_both(A, B):
    if A.rows != B.rows:
        return
    X = image_intersection(A, B)
    assert hnf(A).contains_lattice(X) and hnf(B).contains_lattice(X)


# kronecker and helpers

def test_kronecker_examples():
    assert kronecker(I(2), I(3)) == I(6)
    assert kronecker(M([[2]]), M([[3]])) == M([[6]])
    assert kronecker(M([[0, 1], [1, 0]]), M([[1]])) == M([[0, 1], [1, 0]])


def test_kronecker_first_factor_most_significant():
    A, B = M([[1, 2]]), M([[0, 1], [1, 0]])
    assert kronecker(A, B) == M([[0, 1, 0, 2], [1, 0, 2, 0]])


@settings(max_examples=60, deadline=None)
@given(matrices(max_dim=2, bound=5), matrices(max_dim=2, bound=5),
       matrices(max_dim=2, bound=5), matrices(max_dim=2, bound=5))
def test_kronecker_mixed_product(A, B, C, D):
    if A.cols != C.rows or B.cols != D.rows:
        return
    assert kronecker(A, B) @ kronecker(C, D) == kronecker(A @ C, B @ D)


def test_block_diag_and_inverse():
    U = M([[2, 1], [1, 1]])
    assert inverse_unimodular(U) @ U == I(2)
    assert block_diag(M([[1]]), M([[2, 3]])) == M([[1, 0, 0], [0, 2, 3]])


def test_inverse_rejects_non_unimodular():
    with pytest.raises(ValueError):
        inverse_unimodular(M([[2]]))


def test_bad_shapes_rejected():
    with pytest.raises(ValueError):
        IntMatrix(2, 2, [1, 2, 3])
    with pytest.raises(ValueError):
        M([[1, 2]]) @ M([[1, 2]])


@settings(max_examples=60, deadline=None)
@given(matrices(max_dim=4, bound=9))
def test_smith_diagonal_matches_sympy(A):
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form
    if A.rows == 0 or A.cols == 0:
        return
    D = smith_normal_form(sympy.Matrix(A.to_rows()), domain=sympy.ZZ)
    theirs = sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0)
    ours = sorted(d for d in snf(A).diagonal() if d != 0)
    assert ours == theirs
