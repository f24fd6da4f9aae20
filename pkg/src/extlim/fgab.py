"""Finitely generated abelian groups given by presentations.

A group is ``Z^g / colspan(R)``.  Homomorphisms carry a matrix on
generators and are checked to respect relations.  Subgroups are handled
through their preimage lattices in ``Z^g``, which makes subgroup equality a
Hermite-basis comparison.
"""

from __future__ import annotations

import re
from typing import Optional, Sequence

from .zmat import (
    HermiteBasis,
    IntMatrix,
    block_diag,
    hnf,
    hstack,
    kernel_basis,
    invariant_diagonal,
    kronecker,
    solve,
)


class IllDefinedMap(ValueError):
    """A matrix does not send relations into relations."""

    def __init__(self, relator: int, message: str = ""):
        self.relator = relator
        super().__init__(message or f"relator {relator} of the source is not sent to a relation")


class NotASubgroup(ValueError):
    def __init__(self, column: int):
        self.column = column
        super().__init__(f"column {column} of the denominator is not in the numerator lattice")


class FgAbGroup:
    """``Z^ngens`` modulo the column span of ``relations``."""

    def __init__(self, ngens: int, relations: Optional[IntMatrix] = None):
        if relations is None:
            relations = IntMatrix.zeros(ngens, 0)
        if relations.rows != ngens:
            raise ValueError(f"relation matrix has {relations.rows} rows, expected {ngens}")
        self.ngens = ngens
        self.relations = relations
        self.lattice: HermiteBasis = hnf(relations)
        diag = invariant_diagonal(self.lattice.basis)
        self.free_rank = ngens - len(diag)
        self.torsion = tuple(d for d in diag if d > 1)

    # invariants -------------------------------------------------------------

    def invariant_factors(self) -> tuple[int, list[int]]:
        return self.free_rank, list(self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> Optional[int]:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        out = 1
        for f in self.torsion:
            out *= f
        return out

    def __repr__(self) -> str:
        return f"FgAbGroup<{format_group(self)}>"

    def __str__(self) -> str:
        return format_group(self)

    # elements ---------------------------------------------------------------

    def normal_form(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ngens:
            raise ValueError(f"vector of length {len(v)} in a group with {self.ngens} generators")
        return tuple(self.lattice.reduce(v))

    def element(self, v: Sequence[int]) -> "Element":
        return Element(self, v)

    def zero(self) -> "Element":
        return Element(self, [0] * self.ngens)

    def gens(self) -> list["Element"]:
        return [Element(self, _unit(self.ngens, i)) for i in range(self.ngens)]

    def is_zero_vector(self, v: Sequence[int]) -> bool:
        return self.lattice.contains(v)


class Element:
    """An element of a presented group stored in normal form."""

    __slots__ = ("group", "coordinates")

    def __init__(self, group: FgAbGroup, v: Sequence[int]):
        self.group = group
        self.coordinates = group.normal_form(v)

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.group, [a + b for a, b in zip(self.coordinates, other.coordinates)])

    def __sub__(self, other: "Element") -> "Element":
        self._same(other)
        return Element(self.group, [a - b for a, b in zip(self.coordinates, other.coordinates)])

    def __neg__(self) -> "Element":
        return Element(self.group, [-a for a in self.coordinates])

    def __rmul__(self, c: int) -> "Element":
        return Element(self.group, [c * a for a in self.coordinates])

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Element) and other.group is self.group
                and other.coordinates == self.coordinates)

    def __hash__(self) -> int:
        return hash((id(self.group), self.coordinates))

    def __repr__(self) -> str:
        return f"Element({list(self.coordinates)})"

    def _same(self, other: "Element") -> None:
        if other.group is not self.group:
            raise ValueError("elements of different groups")


def _unit(n: int, i: int) -> list[int]:
    v = [0] * n
    v[i] = 1
    return v


def group_from_relations(g: int, R: IntMatrix) -> FgAbGroup:
    return FgAbGroup(g, R)


def free_group(n: int) -> FgAbGroup:
    return FgAbGroup(n)


def cyclic(order: int) -> FgAbGroup:
    """``Z/order``; order 0 gives ``Z``."""
    return FgAbGroup(1, IntMatrix(1, 1, [order]))


def invariant_factors(G: FgAbGroup) -> tuple[int, list[int]]:
    return G.invariant_factors()


def is_isomorphic(G1: FgAbGroup, G2: FgAbGroup) -> bool:
    return G1.free_rank == G2.free_rank and G1.torsion == G2.torsion


def from_invariants(free_rank: int, torsion: Sequence[int]) -> FgAbGroup:
    """The canonical presentation ``Z^r + Z/f1 + ... + Z/fk``."""
    n = free_rank + len(torsion)
    cols = []
    for i, f in enumerate(torsion):
        c = [0] * n
        c[free_rank + i] = f
        cols.append(c)
    return FgAbGroup(n, IntMatrix.from_columns(cols, n))


# ---------------------------------------------------------------------------
# homomorphisms


class AbHom:
    """A homomorphism given by its matrix on generators."""

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix, check: bool = True):
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match {target.ngens}x{source.ngens}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            images = matrix @ source.relations
            for j, col in enumerate(images.to_columns()):
                if not target.lattice.contains(col):
                    raise IllDefinedMap(j)

    def __call__(self, x: "Element | Sequence[int]") -> Element:
        v = x.coordinates if isinstance(x, Element) else x
        return Element(self.target, self.matrix.apply(list(v)))

    def __add__(self, other: "AbHom") -> "AbHom":
        self._parallel(other)
        return AbHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "AbHom") -> "AbHom":
        self._parallel(other)
        return AbHom(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self) -> "AbHom":
        return AbHom(self.source, self.target, -self.matrix, check=False)

    def _parallel(self, other: "AbHom") -> None:
        if other.source is not self.source or other.target is not self.target:
            if not (other.source.ngens == self.source.ngens and other.target.ngens == self.target.ngens):
                raise ValueError("homomorphisms are not parallel")

    def is_zero(self) -> bool:
        return all(self.target.lattice.contains(c) for c in self.matrix.to_columns())

    def equals(self, other: "AbHom") -> bool:
        return (self - other).is_zero()

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def preimage(self, y: "Element | Sequence[int]") -> Optional[list[int]]:
        """Canonical preimage of ``y`` as a source vector, or None."""
        v = list(y.coordinates if isinstance(y, Element) else y)
        x = solve(hstack(self.matrix, self.target.relations), v)
        if x is None:
            return None
        return list(self.source.normal_form(x[: self.source.ngens]))

    def __repr__(self) -> str:
        return f"AbHom({self.source} -> {self.target}, {self.matrix!r})"


def hom(G1: FgAbGroup, G2: FgAbGroup, matrix: IntMatrix) -> AbHom:
    return AbHom(G1, G2, matrix)


def compose(h2: AbHom, h1: AbHom) -> AbHom:
    """``h2 ∘ h1``."""
    if h1.target.ngens != h2.source.ngens:
        raise ValueError("homomorphisms are not composable")
    return AbHom(h1.source, h2.target, h2.matrix @ h1.matrix, check=False)


def identity(G: FgAbGroup) -> AbHom:
    return AbHom(G, G, IntMatrix.identity(G.ngens), check=False)


def zero_hom(G1: FgAbGroup, G2: FgAbGroup) -> AbHom:
    return AbHom(G1, G2, IntMatrix.zeros(G2.ngens, G1.ngens), check=False)


# ---------------------------------------------------------------------------
# subquotients, kernels, images


def subquotient_with_basis(U: IntMatrix, V: IntMatrix) -> tuple[FgAbGroup, IntMatrix]:
    """``colspan(U) / colspan(V)`` together with the Hermite basis of ``U``.

    The returned group has one generator per basis column.
    """
    if U.rows != V.rows:
        raise ValueError("numerator and denominator live in different ambients")
    hU = hnf(U)
    rel_cols = []
    for j, col in enumerate(V.to_columns()):
        c = hU.coordinates(col)
        if c is None:
            raise NotASubgroup(j)
        rel_cols.append(c)
    G = FgAbGroup(hU.rank, IntMatrix.from_columns(rel_cols, hU.rank))
    return G, hU.basis


def subquotient(N: int, U: IntMatrix, V: IntMatrix) -> FgAbGroup:
    if U.rows != N or V.rows != N:
        raise ValueError(f"matrices must have {N} rows")
    return subquotient_with_basis(U, V)[0]


def kernel_lattice(h: AbHom) -> HermiteBasis:
    """Preimage in ``Z^{source gens}`` of the target relation lattice."""
    g = h.source.ngens
    K = kernel_basis(hstack(h.matrix, -h.target.relations))
    top = K.basis.submatrix(range(g), range(K.basis.cols))
    return hnf(hstack(top, h.source.relations))


def image_lattice(h: AbHom) -> HermiteBasis:
    """Preimage in ``Z^{target gens}`` of the image subgroup."""
    return hnf(hstack(h.matrix, h.target.relations))


def kernel(h: AbHom) -> tuple[FgAbGroup, AbHom]:
    K = kernel_lattice(h)
    G, basis = subquotient_with_basis(K.basis, h.source.relations)
    return G, AbHom(G, h.source, basis, check=False)


def image(h: AbHom) -> tuple[FgAbGroup, AbHom]:
    G, basis = subquotient_with_basis(hstack(h.matrix, h.target.relations), h.target.relations)
    return G, AbHom(G, h.target, basis, check=False)


def corestriction(h: AbHom) -> AbHom:
    """``h`` viewed as a surjection onto ``image(h)[0]``."""
    G, incl = image(h)
    hb = hnf(incl.matrix)
    cols = [hb.coordinates(c) for c in h.matrix.to_columns()]
    return AbHom(h.source, G, IntMatrix.from_columns(cols, G.ngens), check=False)


def cokernel(h: AbHom) -> tuple[FgAbGroup, AbHom]:
    T = h.target
    Q = FgAbGroup(T.ngens, hstack(T.relations, h.matrix))
    return Q, AbHom(T, Q, IntMatrix.identity(T.ngens), check=False)


def equalizer(h1: AbHom, h2: AbHom) -> tuple[FgAbGroup, AbHom]:
    if h1.matrix.shape != h2.matrix.shape or h1.source.ngens != h2.source.ngens:
        raise ValueError("equalizer of maps with different shapes")
    return kernel(h1 - h2)


def same_subgroup(i1: AbHom, i2: AbHom) -> bool:
    """Whether two maps into the same group have the same image."""
    return image_lattice(i1).basis == image_lattice(i2).basis


def restrict_section(h: AbHom) -> list[list[int]]:
    """Canonical preimages of the target generators (surjective ``h`` only)."""
    out = []
    for v in IntMatrix.identity(h.target.ngens).to_columns():
        x = h.preimage(v)
        if x is None:
            raise ValueError("map is not surjective")
        out.append(x)
    return out


# ---------------------------------------------------------------------------
# sums and tensor products


def direct_sum(groups: Sequence[FgAbGroup]) -> tuple[FgAbGroup, list[AbHom], list[AbHom]]:
    groups = list(groups)
    n = sum(G.ngens for G in groups)
    S = FgAbGroup(n, block_diag(*[G.relations for G in groups]) if groups else IntMatrix.zeros(0, 0))
    inj, proj = [], []
    off = 0
    for G in groups:
        cols = []
        for i in range(G.ngens):
            cols.append(_unit(n, off + i))
        m = IntMatrix.from_columns(cols, n)
        inj.append(AbHom(G, S, m, check=False))
        proj.append(AbHom(S, G, m.transpose(), check=False))
        off += G.ngens
    return S, inj, proj


def tensor(G1: FgAbGroup, G2: FgAbGroup) -> FgAbGroup:
    R = hstack(
        kronecker(G1.relations, IntMatrix.identity(G2.ngens)),
        kronecker(IntMatrix.identity(G1.ngens), G2.relations),
    )
    return FgAbGroup(G1.ngens * G2.ngens, R)


def tensor_hom(h1: AbHom, h2: AbHom, source: Optional[FgAbGroup] = None,
               target: Optional[FgAbGroup] = None) -> AbHom:
    source = source or tensor(h1.source, h2.source)
    target = target or tensor(h1.target, h2.target)
    return AbHom(source, target, kronecker(h1.matrix, h2.matrix))


# ---------------------------------------------------------------------------
# chain complexes


class ChainComplexZ:
    """Free chain complex ``C_m -> ... -> C_1 -> C_0``.

    ``differentials[i-1]`` is ``d_i : C_i -> C_{i-1}``, a matrix of shape
    ``ranks[i-1] x ranks[i]``.
    """

    def __init__(self, ranks: Sequence[int], differentials: Sequence[IntMatrix], check: bool = True):
        ranks = list(ranks)
        differentials = list(differentials)
        if len(differentials) != max(len(ranks) - 1, 0):
            raise ValueError("need one differential per positive degree")
        for i, d in enumerate(differentials, start=1):
            if d.shape != (ranks[i - 1], ranks[i]):
                raise ValueError(f"d_{i} has shape {d.shape}, expected {(ranks[i - 1], ranks[i])}")
        self.ranks = ranks
        self.differentials = differentials
        if check and not self.is_complex():
            raise ValueError("d∘d is not zero")

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def d(self, i: int) -> IntMatrix:
        """``d_i``; zero outside the stored range."""
        if 1 <= i <= self.top:
            return self.differentials[i - 1]
        src = self.ranks[i] if 0 <= i <= self.top else 0
        tgt = self.ranks[i - 1] if 0 <= i - 1 <= self.top else 0
        return IntMatrix.zeros(tgt, src)

    def is_complex(self) -> bool:
        for i in range(1, self.top):
            if not (self.differentials[i - 1] @ self.differentials[i]).is_zero():
                return False
        return True

    def homology(self) -> list[FgAbGroup]:
        return [homology_at(self, i) for i in range(self.top + 1)]


def homology_at(C: ChainComplexZ, i: int) -> FgAbGroup:
    if not 0 <= i <= C.top:
        raise ValueError(f"degree {i} outside 0..{C.top}")
    r = C.ranks[i]
    Z = IntMatrix.identity(r) if i == 0 else kernel_basis(C.d(i)).basis
    B = C.d(i + 1)
    return subquotient(r, Z, B)


def concentrated(rank: int) -> ChainComplexZ:
    """``Z^rank`` in degree 0."""
    return ChainComplexZ([rank], [])


def tensor_complexes(C1: ChainComplexZ, C2: ChainComplexZ) -> ChainComplexZ:
    """Total complex of ``C1 ⊗ C2`` with ``d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy``.

    Degree ``k`` is the sum over ``p + q = k`` ordered by increasing ``p``;
    within a summand the basis is the Kronecker order.
    """
    m1, m2 = C1.top, C2.top
    top = m1 + m2
    blocks: list[list[tuple[int, int]]] = []
    ranks = []
    for k in range(top + 1):
        pieces = [(p, k - p) for p in range(max(0, k - m2), min(k, m1) + 1)]
        blocks.append(pieces)
        ranks.append(sum(C1.ranks[p] * C2.ranks[q] for p, q in pieces))

    def offsets(k):
        out, off = {}, 0
        for p, q in blocks[k]:
            out[(p, q)] = off
            off += C1.ranks[p] * C2.ranks[q]
        return out

    diffs = []
    for k in range(1, top + 1):
        src, tgt = offsets(k), offsets(k - 1)
        out = [[0] * ranks[k] for _ in range(ranks[k - 1])]
        for (p, q), c0 in src.items():
            if p >= 1:
                blk = kronecker(C1.d(p), IntMatrix.identity(C2.ranks[q]))
                r0 = tgt[(p - 1, q)]
                for i in range(blk.rows):
                    for j in range(blk.cols):
                        out[r0 + i][c0 + j] += blk[i, j]
            if q >= 1:
                sign = -1 if p % 2 else 1
                blk = kronecker(IntMatrix.identity(C1.ranks[p]), C2.d(q))
                r0 = tgt[(p, q - 1)]
                for i in range(blk.rows):
                    for j in range(blk.cols):
                        out[r0 + i][c0 + j] += sign * blk[i, j]
        diffs.append(IntMatrix(ranks[k - 1], ranks[k], (x for row in out for x in row)))
    return ChainComplexZ(ranks, diffs)


# ---------------------------------------------------------------------------
# text form

_TERM = re.compile(r"Z(?:\^(\d+)|/(\d+))?")


class GroupParseError(ValueError):
    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"{message} at position {position}")


def parse_group(expr: str) -> FgAbGroup:
    """Parse ``Z``, ``Z^n``, ``Z/n`` terms joined by ``+``; ``0`` is the trivial group."""
    s = expr
    pos = 0
    n = len(s)

    def skip_ws(p):
        while p < n and s[p].isspace():
            p += 1
        return p

    pos = skip_ws(pos)
    if s[pos:].strip() == "0":
        return FgAbGroup(0)
    free = 0
    torsion: list[int] = []
    while True:
        pos = skip_ws(pos)
        m = _TERM.match(s, pos)
        if not m:
            raise GroupParseError(pos, "expected 'Z', 'Z^n' or 'Z/n'")
        if m.group(1) is not None:
            k = int(m.group(1))
            if k == 0:
                raise GroupParseError(m.start(1), "exponent must be positive")
            free += k
        elif m.group(2) is not None:
            k = int(m.group(2))
            if k == 0:
                raise GroupParseError(m.start(2), "cyclic order must be positive")
            torsion.append(k)
        else:
            free += 1
        pos = skip_ws(m.end())
        if pos == n:
            break
        if s[pos] != "+":
            raise GroupParseError(pos, "expected '+'")
        pos += 1
    # free summands first, torsion after, each in written order
    return from_invariants(free, torsion)


def format_group(G: FgAbGroup) -> str:
    if G.is_trivial():
        return "0"
    parts = []
    if G.free_rank == 1:
        parts.append("Z")
    elif G.free_rank > 1:
        parts.append(f"Z^{G.free_rank}")
    parts.extend(f"Z/{f}" for f in G.torsion)
    return "+".join(parts)


def group_json(G: FgAbGroup) -> dict:
    return {"free_rank": G.free_rank, "torsion": list(G.torsion)}
