"""Multi-argument Tor and four independent computations of ``Tor^[n](A)``.

``Tor^[n](A) = Tor_{n-1}(A, ..., A)`` (``n`` copies) is computed

* from the tensor product of free resolutions,
* by iterating the two-variable Künneth step ``Tor(Tor^[n-1](A), A)``,
* as ``∩_i (H^{⊗i-1} ⊗ F ⊗ H^{⊗n-i}) / H^{⊗n}`` inside ``F^{⊗n}``,
* as the equalizer of the two maps ``F^{⊗n}/H^{⊗n} -> (F⊕F)^{⊗n}/(F⊕H)^{⊗n}``
  induced by ``g ↦ (0, g)`` and ``g ↦ (g, g)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from . import fgab
from .fgab import AbHom, ChainComplexZ, FgAbGroup, homology_at, tensor_complexes
from .polyfunctors import tensor_power_map
from .presentation import FreePresentation, canonical_presentation
from .zmat import HermiteBasis, IntMatrix, hnf, hstack, image_intersection, kronecker, vstack

DEFAULT_SIZE_GUARD = 20000


class SizeGuardError(RuntimeError):
    """A computation would exceed the basis-size cap."""


def size_guard() -> int:
    raw = os.environ.get("EXTLIM_SIZE_GUARD")
    return int(raw) if raw else DEFAULT_SIZE_GUARD


def check_size(n_basis: int, what: str = "tensor power") -> None:
    cap = size_guard()
    if n_basis > cap:
        raise SizeGuardError(f"{what} needs {n_basis} basis elements, cap is {cap}")


@dataclass(frozen=True)
class FreeResolution:
    group: FgAbGroup
    complex: ChainComplexZ


def free_resolution(G: FgAbGroup) -> FreeResolution:
    """``0 -> Z^k --R--> Z^g -> G -> 0`` with ``R`` the Hermite basis of the relations."""
    R = G.lattice.basis
    return FreeResolution(G, ChainComplexZ([G.ngens, R.cols], [R]))


def _small(G: FgAbGroup) -> FgAbGroup:
    return fgab.from_invariants(G.free_rank, G.torsion)


def tor_multi(groups: Sequence[FgAbGroup], i: int) -> FgAbGroup:
    """``Tor_i(B_1, ..., B_n)``: homology of the tensor product of resolutions."""
    groups = list(groups)
    if not groups:
        raise ValueError("need at least one group")
    if i < 0:
        raise ValueError("negative degree")
    if i >= len(groups):
        return FgAbGroup(0)
    res = [free_resolution(_small(G)).complex for G in groups]
    total = 1
    for C in res:
        total *= sum(C.ranks)
    check_size(total, "tensor product of resolutions")
    C = res[0]
    for D in res[1:]:
        C = tensor_complexes(C, D)
    return homology_at(C, i)


def tor_bracket(A: FgAbGroup, n: int) -> FgAbGroup:
    if n < 2:
        raise ValueError("Tor^[n] needs n >= 2")
    return tor_multi([A] * n, n - 1)


def kunneth_iterate(A: FgAbGroup, n: int) -> FgAbGroup:
    if n < 2:
        raise ValueError("Tor^[n] needs n >= 2")
    T = tor_multi([A, A], 1)
    for _ in range(n - 2):
        T = tor_multi([T, A], 1)
    return T


# ---------------------------------------------------------------------------
# lattice formulas


def tor_pair_intersection(p1: FreePresentation, p2: FreePresentation) -> FgAbGroup:
    """``((H1⊗F2) ∩ (F1⊗H2)) / (H1⊗H2)`` inside ``F1⊗F2``."""
    B1, B2 = p1.inclusion, p2.inclusion
    check_size(p1.rank * p2.rank)
    num = image_intersection(
        kronecker(B1, IntMatrix.identity(p2.rank)),
        kronecker(IntMatrix.identity(p1.rank), B2),
    )
    return fgab.subquotient(p1.rank * p2.rank, num.basis, kronecker(B1, B2))


def slot_lattice(p: FreePresentation, n: int, i: int) -> IntMatrix:
    """``H^{⊗i} ⊗ F ⊗ H^{⊗n-i-1}`` (0-based slot ``i``) as a spanning matrix."""
    B = p.inclusion
    out = IntMatrix.identity(1)
    for k in range(n):
        out = kronecker(out, IntMatrix.identity(p.rank) if k == i else B)
    return out


def bracket_numerator(p: FreePresentation, n: int) -> HermiteBasis:
    check_size(p.rank ** n)
    num = hnf(slot_lattice(p, n, 0))
    for i in range(1, n):
        num = image_intersection(num.basis, slot_lattice(p, n, i))
    return num


def tor_bracket_intersection(p: FreePresentation, n: int) -> tuple[FgAbGroup, HermiteBasis]:
    if n < 2:
        raise ValueError("Tor^[n] needs n >= 2")
    num = bracket_numerator(p, n)
    den = tensor_power_map(p.inclusion, n)
    return fgab.subquotient(p.rank ** n, num.basis, den), num


# ---------------------------------------------------------------------------
# equalizer


def doubled(p: FreePresentation) -> tuple[FreePresentation, IntMatrix, IntMatrix]:
    """``F⊕F ↠ A`` through the second summand, with ``f1 = (0, g)`` and ``f2 = (g, g)``."""
    N = p.rank
    P = hstack(IntMatrix.zeros(p.base.ngens, N), p.projection)
    target = FreePresentation(p.base, P)
    I, Z = IntMatrix.identity(N), IntMatrix.zeros(N, N)
    return target, vstack(Z, I), vstack(I, I)


def tensor_quotient(p: FreePresentation, n: int) -> FgAbGroup:
    """``F^{⊗n} / H^{⊗n}``."""
    check_size(p.rank ** n)
    return FgAbGroup(p.rank ** n, tensor_power_map(p.inclusion, n))


def equalizer_realization(p: FreePresentation, n: int) -> tuple[FgAbGroup, AbHom]:
    """Equalizer of ``f1*, f2*`` as a subgroup of ``F^{⊗n}/H^{⊗n}``."""
    if n < 2:
        raise ValueError("Tor^[n] needs n >= 2")
    target, f1, f2 = doubled(p)
    check_size(target.rank ** n)
    src = tensor_quotient(p, n)
    tgt = tensor_quotient(target, n)
    h1 = AbHom(src, tgt, tensor_power_map(f1, n))
    h2 = AbHom(src, tgt, tensor_power_map(f2, n))
    return fgab.equalizer(h1, h2)


def equalizer_preimage(p: FreePresentation, n: int) -> HermiteBasis:
    """Preimage in ``F^{⊗n}`` of the equalizer subgroup."""
    _, incl = equalizer_realization(p, n)
    return fgab.image_lattice(incl)


METHODS = ("resolution", "intersection", "equalizer", "kunneth")


def tor_bracket_by(method: str, A: FgAbGroup, n: int, p: FreePresentation | None = None) -> FgAbGroup:
    if method == "resolution":
        return tor_bracket(A, n)
    if method == "kunneth":
        return kunneth_iterate(A, n)
    p = p or canonical_presentation(A)
    if method == "intersection":
        return tor_bracket_intersection(p, n)[0]
    if method == "equalizer":
        return equalizer_realization(p, n)[0]
    raise ValueError(f"unknown method {method!r}")
