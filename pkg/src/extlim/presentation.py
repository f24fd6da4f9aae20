"""Free presentations ``H ↪ F ↠ A`` of a fixed abelian group ``A``.

A presentation remembers the projection ``F = Z^N -> A`` as a matrix on the
generators of ``A``; ``H`` is the kernel of that projection.  Keeping the
projection (rather than only ``H``) is what lets two different presentations
be compared over the identity of ``A``.
"""

from __future__ import annotations

from .fgab import AbHom, FgAbGroup, free_group, kernel_lattice
from .zmat import HermiteBasis, IntMatrix, hstack, inverse_unimodular, snf


class FreePresentation:
    def __init__(self, base: FgAbGroup, projection: IntMatrix):
        if projection.rows != base.ngens:
            raise ValueError("projection must land in the generators of the base group")
        self.base = base
        self.projection = projection
        self.rank = projection.cols
        self._pi = AbHom(free_group(self.rank), base, projection, check=False)
        if not self._pi.is_surjective():
            raise ValueError("projection is not surjective")
        self.H: HermiteBasis = kernel_lattice(self._pi)

    @property
    def inclusion(self) -> IntMatrix:
        """Basis of ``H`` as an ``N x rank(H)`` matrix."""
        return self.H.basis

    @property
    def h_rank(self) -> int:
        return self.H.rank

    def quotient(self) -> FgAbGroup:
        """``Z^N / H`` presented on the basis of ``F``."""
        return FgAbGroup(self.rank, self.inclusion)

    def pi(self) -> AbHom:
        return self._pi

    def __repr__(self) -> str:
        return f"FreePresentation(N={self.rank}, H={self.inclusion.to_rows()}, A={self.base})"


def canonical_presentation(A: FgAbGroup) -> FreePresentation:
    """``F = Z^{r+k}`` with ``H`` spanned by ``f_i e_{r+i}``.

    The generators of ``F`` are sent to the cyclic generators read off from
    a Smith decomposition of the relations of ``A``.
    """
    dec = snf(A.relations)
    diag = dec.diagonal()
    g = A.ngens
    d = [diag[i] if i < len(diag) else 0 for i in range(g)]
    free_idx = [i for i in range(g) if d[i] == 0]
    tors_idx = [i for i in range(g) if d[i] > 1]
    Uinv = inverse_unimodular(dec.U)
    P = Uinv.select_columns(free_idx + tors_idx)
    p = FreePresentation(A, P)
    return p


def stabilize(p: FreePresentation, k: int) -> FreePresentation:
    """``F ⊕ Z^k`` with the new summand sent to zero (so ``H ⊕ Z^k``)."""
    if k < 1:
        raise ValueError("stabilization needs k >= 1")
    P = hstack(p.projection, IntMatrix.zeros(p.base.ngens, k))
    return FreePresentation(p.base, P)


def presentation_of_subgroup(N: int, H: IntMatrix) -> FreePresentation:
    """``Z^N ↠ Z^N/H`` with the quotient itself as the base group."""
    base = FgAbGroup(N, H)
    return FreePresentation(base, IntMatrix.identity(N))


def acyclic_presentation(N: int) -> FreePresentation:
    """``H = F = Z^N`` presenting the zero group."""
    return FreePresentation(FgAbGroup(0), IntMatrix.zeros(0, N))


def same_base(p1: FreePresentation, p2: FreePresentation) -> bool:
    return p1.base is p2.base or (
        p1.base.ngens == p2.base.ngens and p1.base.lattice == p2.base.lattice
    )
