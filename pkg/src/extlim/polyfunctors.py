"""Tensor, symmetric, exterior and divided powers of free abelian groups.

Every functor comes with a fixed lexicographic basis of its value on
``Z^r`` and an induced-matrix function.  The basis orders are part of the
public contract:

* tensor: words ``(i_1, ..., i_n)`` in ``range(r)``, Kronecker order;
* exterior: strictly increasing ``n``-subsets;
* symmetric and divided: exponent vectors summing to ``n``, in decreasing
  lexicographic order (the order of sorted multisets, so degree 1 matches
  the basis of ``Z^r``).
"""

from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from math import comb, factorial, prod
from typing import Sequence

from .fgab import AbHom, FgAbGroup, free_group
from .zmat import HermiteBasis, IntMatrix, determinant, hnf, kernel_basis, kronecker, vstack


class Kind(enum.Enum):
    TENSOR = "tensor"
    SYM = "sym"
    EXT = "ext"
    GAMMA = "gamma"


@lru_cache(maxsize=None)
def _compositions(r: int, n: int) -> tuple[tuple[int, ...], ...]:
    if r == 0:
        return ((),) if n == 0 else ()
    out = []
    for first in range(n, -1, -1):
        for rest in _compositions(r - 1, n - first):
            out.append((first,) + rest)
    return tuple(out)


class BasisIndexer:
    """Ordered basis of ``kind`` applied to ``Z^r`` in degree ``n``."""

    def __init__(self, kind: Kind, r: int, n: int):
        self.kind = kind
        self.r = r
        self.n = n
        if kind is Kind.TENSOR:
            self.indices = list(itertools.product(range(r), repeat=n))
        elif kind is Kind.EXT:
            self.indices = list(itertools.combinations(range(r), n))
        else:
            self.indices = list(_compositions(r, n))
        self.position = {idx: k for k, idx in enumerate(self.indices)}

    def __len__(self) -> int:
        return len(self.indices)

    def __getitem__(self, k: int):
        return self.indices[k]

    def index(self, key) -> int:
        return self.position[tuple(key)]


@lru_cache(maxsize=None)
def indexer(kind: Kind, r: int, n: int) -> BasisIndexer:
    return BasisIndexer(kind, r, n)


def basis_size(kind: Kind, r: int, n: int) -> int:
    if kind is Kind.TENSOR:
        return r ** n
    if kind is Kind.EXT:
        return comb(r, n)
    return comb(r + n - 1, n) if r else int(n == 0)


# ---------------------------------------------------------------------------
# induced maps


def tensor_power_map(M: IntMatrix, n: int) -> IntMatrix:
    out = IntMatrix.identity(1)
    for _ in range(n):
        out = kronecker(out, M)
    return out


def sigma_action(sigma: Sequence[int], r: int) -> IntMatrix:
    """Place permutation ``x_1⊗...⊗x_n ↦ x_σ(1)⊗...⊗x_σ(n)`` on ``(Z^r)^{⊗n}``.

    ``sigma`` is 0-based: ``sigma[k]`` is the image of ``k``.  Because the
    factors are permuted by position, ``sigma_action(σ∘τ)`` equals
    ``sigma_action(τ) @ sigma_action(σ)``.
    """
    n = len(sigma)
    if sorted(sigma) != list(range(n)):
        raise ValueError(f"{sigma!r} is not a permutation")
    idx = indexer(Kind.TENSOR, r, n)
    size = len(idx)
    cols = []
    for word in idx.indices:
        c = [0] * size
        c[idx.index(tuple(word[sigma[k]] for k in range(n)))] = 1
        cols.append(c)
    return IntMatrix.from_columns(cols, size)


def _linear_power(M: IntMatrix, a: Sequence[int]) -> dict[tuple[int, ...], int]:
    """Expand ``∏_i (M e_i)^{a_i}`` as a polynomial in the target basis."""
    s = M.rows
    poly = {(0,) * s: 1}
    cols = M.to_columns()
    for i, ai in enumerate(a):
        form = [(j, c) for j, c in enumerate(cols[i]) if c]
        for _ in range(ai):
            nxt: dict[tuple[int, ...], int] = {}
            for mono, coeff in poly.items():
                for j, c in form:
                    m = list(mono)
                    m[j] += 1
                    m = tuple(m)
                    nxt[m] = nxt.get(m, 0) + coeff * c
            poly = {k: v for k, v in nxt.items() if v}
    return poly


def sp_map(M: IntMatrix, n: int) -> IntMatrix:
    src = indexer(Kind.SYM, M.cols, n)
    tgt = indexer(Kind.SYM, M.rows, n)
    cols = []
    for a in src.indices:
        c = [0] * len(tgt)
        for mono, coeff in _linear_power(M, a).items():
            c[tgt.index(mono)] += coeff
        cols.append(c)
    return IntMatrix.from_columns(cols, len(tgt))


def lambda_map(M: IntMatrix, n: int) -> IntMatrix:
    """Compound matrix: entry ``(J, I)`` is the minor on rows ``J``, columns ``I``."""
    src = indexer(Kind.EXT, M.cols, n)
    tgt = indexer(Kind.EXT, M.rows, n)
    return IntMatrix(len(tgt), len(src),
                     (determinant(M.submatrix(J, I)) for J in tgt.indices for I in src.indices))


def _contingency(a: Sequence[int], s: int):
    """All ``s x len(a)`` nonnegative matrices with column sums ``a`` (as column lists)."""
    if not a:
        yield []
        return
    for rest in _contingency(a[1:], s):
        for col in _compositions(s, a[0]):
            yield [col] + rest


def gamma_map(M: IntMatrix, n: int) -> IntMatrix:
    """Induced map on divided powers.

    ``γ_a = ∏ γ_{a_i}(e_i)`` goes to the sum over contingency tables ``C``
    with column sums ``a`` of ``∏_j (b_j! / ∏_i c_ji!) ∏ M_ji^{c_ji} γ_b``,
    ``b`` being the row sums of ``C``.
    """
    r, s = M.cols, M.rows
    src = indexer(Kind.GAMMA, r, n)
    tgt = indexer(Kind.GAMMA, s, n)
    cols = []
    for a in src.indices:
        c = [0] * len(tgt)
        for C in _contingency(a, s):
            w = 1
            for i, col in enumerate(C):
                for j, cji in enumerate(col):
                    if cji:
                        w *= M[j, i] ** cji
                if not w:
                    break
            if not w:
                continue
            b = tuple(sum(C[i][j] for i in range(r)) for j in range(s))
            mult = 1
            for j in range(s):
                mult *= factorial(b[j]) // prod(factorial(C[i][j]) for i in range(r))
            c[tgt.index(b)] += mult * w
        cols.append(c)
    return IntMatrix.from_columns(cols, len(tgt))


def kind_map(kind: Kind, M: IntMatrix, n: int) -> IntMatrix:
    if kind is Kind.TENSOR:
        return tensor_power_map(M, n)
    if kind is Kind.SYM:
        return sp_map(M, n)
    if kind is Kind.EXT:
        return lambda_map(M, n)
    return gamma_map(M, n)


# ---------------------------------------------------------------------------
# divided powers as symmetric tensors


def _distinct_words(a: Sequence[int]):
    word = [i for i, ai in enumerate(a) for _ in range(ai)]
    return sorted(set(itertools.permutations(word)))


def gamma_to_invariants(r: int, n: int) -> IntMatrix:
    """``γ_a ↦`` sum of the distinct rearrangements of the word of ``a``."""
    src = indexer(Kind.GAMMA, r, n)
    tgt = indexer(Kind.TENSOR, r, n)
    cols = []
    for a in src.indices:
        c = [0] * len(tgt)
        for w in _distinct_words(a):
            c[tgt.index(w)] = 1
        cols.append(c)
    return IntMatrix.from_columns(cols, len(tgt))


def invariants_subgroup(r: int, n: int) -> HermiteBasis:
    """Σ_n-invariant tensors, as the kernel of ``(s_i - 1)`` over adjacent transpositions."""
    size = r ** n
    if n < 2:
        return hnf(IntMatrix.identity(size))
    blocks = []
    for i in range(n - 1):
        s = list(range(n))
        s[i], s[i + 1] = s[i + 1], s[i]
        blocks.append(sigma_action(s, r) - IntMatrix.identity(size))
    return kernel_basis(vstack(*blocks))


# ---------------------------------------------------------------------------


def functor_on_inclusion(pres, kind: Kind, n: int) -> tuple[AbHom, FgAbGroup]:
    """Apply ``kind`` to ``H ↪ F``; return the induced map and ``T(F)/T(H)``."""
    B = pres.inclusion
    K = kind_map(kind, B, n)
    incl = AbHom(free_group(K.cols), free_group(K.rows), K, check=False)
    return incl, FgAbGroup(K.rows, K)
