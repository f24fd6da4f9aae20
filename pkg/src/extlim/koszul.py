"""Koszul models for the derived functors of ``SP^n`` and ``Λ^n``.

For a free presentation ``0 -> H --f--> F -> A -> 0`` the complexes

    Λ^n(H) -> Λ^{n-1}(H)⊗F -> ... -> H⊗SP^{n-1}(F) -> SP^n(F)
    Γ_n(H) -> Γ_{n-1}(H)⊗F -> ... -> H⊗Λ^{n-1}(F)  -> Λ^n(F)

are placed so that the term involving only ``F`` sits in degree 0; their
homology in degree ``i`` is ``L_i SP^n(A)`` and ``L_i Λ^n(A)``.
The basis of ``T(H) ⊗ S(F)`` is the product order with the ``H``-factor
index major.
"""

from __future__ import annotations

from .fgab import AbHom, ChainComplexZ, FgAbGroup, homology_at, kernel
from .polyfunctors import Kind, gamma_map, indexer, lambda_map
from .presentation import FreePresentation, acyclic_presentation
from .zmat import IntMatrix, kronecker


def _wedge_left(m: int, q: tuple[int, ...]):
    """``e_m ∧ e_q`` as ``(sign, sorted subset)``, or None when it vanishes."""
    if m in q:
        return None
    pos = sum(1 for x in q if x < m)
    return (-1 if pos % 2 else 1), tuple(sorted(q + (m,)))


def _sp_differential(B: IntMatrix, n: int, k: int) -> IntMatrix:
    """``κ_k : Λ^k(H)⊗SP^{n-k}(F) -> Λ^{k-1}(H)⊗SP^{n-k+1}(F)``."""
    N, h = B.rows, B.cols
    src_l, src_s = indexer(Kind.EXT, h, k), indexer(Kind.SYM, N, n - k)
    tgt_l, tgt_s = indexer(Kind.EXT, h, k - 1), indexer(Kind.SYM, N, n - k + 1)
    ncols = len(src_l) * len(src_s)
    nrows = len(tgt_l) * len(tgt_s)
    out = [[0] * ncols for _ in range(nrows)]
    for a, P in enumerate(src_l.indices):
        for b, q in enumerate(src_s.indices):
            col = a * len(src_s) + b
            for i, pi in enumerate(P):
                # 1-based slot index: sign (-1)^{k - (i+1)}
                sign = -1 if (k - 1 - i) % 2 else 1
                rest = P[:i] + P[i + 1:]
                row0 = tgt_l.index(rest) * len(tgt_s)
                for m in range(N):
                    c = B[m, pi]
                    if c:
                        mono = list(q)
                        mono[m] += 1
                        out[row0 + tgt_s.index(mono)][col] += sign * c
    return IntMatrix(nrows, ncols, (x for row in out for x in row))


def _lambda_differential(B: IntMatrix, n: int, k: int) -> IntMatrix:
    """``κ^k : Γ_k(H)⊗Λ^{n-k}(F) -> Γ_{k-1}(H)⊗Λ^{n-k+1}(F)``.

    Lowers one divided-power exponent by one and wedges the image of that
    basis vector of ``H`` on the left.
    """
    N, h = B.rows, B.cols
    src_g, src_e = indexer(Kind.GAMMA, h, k), indexer(Kind.EXT, N, n - k)
    tgt_g, tgt_e = indexer(Kind.GAMMA, h, k - 1), indexer(Kind.EXT, N, n - k + 1)
    ncols = len(src_g) * len(src_e)
    nrows = len(tgt_g) * len(tgt_e)
    out = [[0] * ncols for _ in range(nrows)]
    for a, r in enumerate(src_g.indices):
        for b, q in enumerate(src_e.indices):
            col = a * len(src_e) + b
            for j, rj in enumerate(r):
                if not rj:
                    continue
                lowered = list(r)
                lowered[j] -= 1
                row0 = tgt_g.index(lowered) * len(tgt_e)
                for m in range(N):
                    c = B[m, j]
                    if not c:
                        continue
                    w = _wedge_left(m, q)
                    if w is None:
                        continue
                    sign, subset = w
                    out[row0 + tgt_e.index(subset)][col] += sign * c
    return IntMatrix(nrows, ncols, (x for row in out for x in row))


def _complex(p: FreePresentation, n: int, first: Kind, second: Kind, differential) -> ChainComplexZ:
    if n < 1:
        raise ValueError("degree must be at least 1")
    B = p.inclusion
    ranks = [len(indexer(first, B.cols, k)) * len(indexer(second, B.rows, n - k)) for k in range(n + 1)]
    diffs = [differential(B, n, k) for k in range(1, n + 1)]
    return ChainComplexZ(ranks, diffs, check=False)


def koszul_sp(p: FreePresentation, n: int) -> ChainComplexZ:
    """Degree ``k`` term ``Λ^k(H) ⊗ SP^{n-k}(F)``."""
    return _complex(p, n, Kind.EXT, Kind.SYM, _sp_differential)


def koszul_lambda(p: FreePresentation, n: int) -> ChainComplexZ:
    """Degree ``k`` term ``Γ_k(H) ⊗ Λ^{n-k}(F)``."""
    return _complex(p, n, Kind.GAMMA, Kind.EXT, _lambda_differential)


def derived_sp(p: FreePresentation, n: int, i: int) -> FgAbGroup:
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    return homology_at(koszul_sp(p, n), i)


def derived_lambda(p: FreePresentation, n: int, i: int) -> FgAbGroup:
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    return homology_at(koszul_lambda(p, n), i)


def _top_kernel(p: FreePresentation, n: int, kind: Kind, differential) -> tuple[FgAbGroup, AbHom]:
    """Kernel of ``T^n(F)/T^n(H) -> (T^{n-1}(F)/T^{n-1}(H)) ⊗ F``.

    The map is the top differential of the ``H = F`` complex; it descends to
    the quotients, which ``AbHom`` checks.
    """
    if n < 2:
        raise ValueError("top-degree kernel formula needs n >= 2")
    B = p.inclusion
    N = p.rank
    lift = lambda_map if kind is Kind.EXT else gamma_map
    src = FgAbGroup(len(indexer(kind, N, n)), lift(B, n))
    below = lift(B, n - 1)
    tgt = FgAbGroup(below.rows * N, kronecker(below, IntMatrix.identity(N)))
    d = differential(IntMatrix.identity(N), n, n)
    phi = AbHom(src, tgt, d)
    return kernel(phi)[0], phi


def top_derived_sp_via_kernel(p: FreePresentation, n: int) -> FgAbGroup:
    """``L_{n-1} SP^n(A)`` as the kernel of ``Λ^n(F)/Λ^n(H) -> Λ^{n-1}(F)/Λ^{n-1}(H) ⊗ F``."""
    return _top_kernel(p, n, Kind.EXT, _sp_differential)[0]


def top_derived_lambda_via_kernel(p: FreePresentation, n: int) -> FgAbGroup:
    """``L_{n-1} Λ^n(A)`` as the kernel of ``Γ_n(F)/Γ_n(H) -> Γ_{n-1}(F)/Γ_{n-1}(H) ⊗ F``."""
    return _top_kernel(p, n, Kind.GAMMA, _lambda_differential)[0]


def kernel_map_sp(p: FreePresentation, n: int) -> AbHom:
    return _top_kernel(p, n, Kind.EXT, _sp_differential)[1]


def kernel_map_lambda(p: FreePresentation, n: int) -> AbHom:
    return _top_kernel(p, n, Kind.GAMMA, _lambda_differential)[1]


def identity_koszul(N: int, n: int, which: str = "sp") -> ChainComplexZ:
    """The ``H = F`` complex on ``Z^N``, used for acyclicity checks."""
    p = acyclic_presentation(N)
    return koszul_sp(p, n) if which == "sp" else koszul_lambda(p, n)
