import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from extlim.fgab import format_group
from extlim.polyfunctors import (
    Kind, basis_size, functor_on_inclusion, gamma_map, gamma_to_invariants, indexer,
    invariants_subgroup, kind_map, lambda_map, sigma_action, sp_map, tensor_power_map,
)
from extlim.presentation import canonical_presentation, presentation_of_subgroup
from extlim.fgab import parse_group
from extlim.zmat import IntMatrix, determinant, hnf

M = IntMatrix.from_rows
SWAP4 = M([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])


@st.composite
def square_or_rect(draw, max_dim=3, bound=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    data = draw(st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c))
    return IntMatrix(r, c, data)


def test_basis_sizes_and_orders():
    assert basis_size(Kind.TENSOR, 3, 2) == 9
    assert basis_size(Kind.EXT, 4, 2) == 6
    assert basis_size(Kind.SYM, 3, 2) == basis_size(Kind.GAMMA, 3, 2) == 6
    assert indexer(Kind.TENSOR, 2, 2).indices == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert indexer(Kind.EXT, 3, 2).indices == [(0, 1), (0, 2), (1, 2)]
    # exponent vectors in decreasing lexicographic order
    assert indexer(Kind.SYM, 2, 2).indices == [(2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("r, n", [(1, 1), (2, 2), (3, 2), (2, 3), (3, 3)])
def test_basis_size_formula(kind, r, n):
    want = {Kind.TENSOR: r ** n, Kind.EXT: comb(r, n)}.get(kind, comb(r + n - 1, n))
    assert len(indexer(kind, r, n)) == basis_size(kind, r, n) == want


def test_tensor_power_examples():
    assert tensor_power_map(M([[2]]), 3) == M([[8]])
    assert tensor_power_map(M([[0, 1], [1, 0]]), 2) == M(
        [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])


def test_sigma_action_examples():
    assert sigma_action([0, 1, 2], 2) == IntMatrix.identity(8)
    assert sigma_action([1, 0], 2) == SWAP4
    with pytest.raises(ValueError):
        sigma_action([0, 0], 2)


@pytest.mark.parametrize("n", [2, 3])
def test_sigma_action_reverses_composition(n):
    perms = list(itertools.permutations(range(n)))
    for s in perms:
        for t in perms:
            st_ = tuple(s[t[k]] for k in range(n))
            assert sigma_action(st_, 2) == sigma_action(t, 2) @ sigma_action(s, 2)


@settings(max_examples=40, deadline=None)
@given(square_or_rect(max_dim=2))
def test_tensor_power_commutes_with_place_permutations(A):
    T = tensor_power_map(A, 3)
    for s in itertools.permutations(range(3)):
        assert T @ sigma_action(s, A.cols) == sigma_action(s, A.rows) @ T


def test_exterior_square_of_2x2_is_determinant():
    A = M([[3, 5], [-2, 7]])
    assert lambda_map(A, 2) == M([[determinant(A)]])


@pytest.mark.parametrize("c", [-3, 2, 5])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_rank_one_maps(c, n):
    assert gamma_map(M([[c]]), n) == M([[c ** n]])
    assert sp_map(M([[c]]), n) == M([[c ** n]])


def test_gamma_of_scaled_vector():
    # γ₂(2x) = 4γ₂(x) while x·x maps to 4 x·x in SP² too; Γ differs on mixed terms
    assert gamma_map(M([[2]]), 2) == M([[4]])
    G = gamma_map(M([[1], [1]]), 2)   # x ↦ e1 + e2, γ₂ ↦ γ₂(e1) + e1e2 + γ₂(e2)
    S = sp_map(M([[1], [1]]), 2)      # x² ↦ e1² + 2 e1e2 + e2²
    assert G.to_columns() == [[1, 1, 1]]
    assert S.to_columns() == [[1, 2, 1]]


@pytest.mark.parametrize("kind", list(Kind))
@settings(max_examples=25, deadline=None)
@given(A=square_or_rect(), B=square_or_rect(), n=st.integers(1, 3))
def test_functoriality(kind, A, B, n):
    if A.cols != B.rows:
        return
    assert kind_map(kind, A @ B, n) == kind_map(kind, A, n) @ kind_map(kind, B, n)
    I = IntMatrix.identity(A.rows)
    assert kind_map(kind, I, n) == IntMatrix.identity(basis_size(kind, A.rows, n))


@settings(max_examples=30, deadline=None)
@given(square_or_rect(), st.integers(1, 3))
def test_gamma_is_transpose_dual_of_sym(A, n):
    assert gamma_map(A, n) == sp_map(A.transpose(), n).transpose()


def test_invariants_examples():
    assert invariants_subgroup(1, 3).rank == 1
    assert gamma_to_invariants(2, 2).to_columns()[1] == [0, 1, 1, 0]
    assert invariants_subgroup(2, 2).rank == 3
    assert invariants_subgroup(3, 2).rank == 6


@pytest.mark.parametrize("r, n", [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_gamma_equals_symmetric_tensors(r, n):
    assert hnf(gamma_to_invariants(r, n)).basis == invariants_subgroup(r, n).basis


def test_functor_on_inclusion_examples():
    p = canonical_presentation(parse_group("Z/2"))
    assert format_group(functor_on_inclusion(p, Kind.GAMMA, 2)[1]) == "Z/4"
    assert format_group(functor_on_inclusion(p, Kind.EXT, 2)[1]) == "0"
    assert format_group(functor_on_inclusion(p, Kind.TENSOR, 2)[1]) == "Z/4"
    assert format_group(functor_on_inclusion(p, Kind.SYM, 2)[1]) == "Z/4"


def test_functor_on_inclusion_of_stacked_lattice():
    p = presentation_of_subgroup(2, M([[2, 0], [0, 3]]))
    incl, Q = functor_on_inclusion(p, Kind.EXT, 2)
    assert incl.matrix == M([[6]])
    assert format_group(Q) == "Z/6"
