"""Derived inverse limits of abelian-group-valued functors on finite categories.

``lim^n F`` is the cohomology of the cosimplicial-replacement cochain
complex.  An ``m``-chain is a composable string ``i_0 <-α_1- i_1 <- ... <-α_m- i_m``
stored as the tuple ``(α_1, ..., α_m)``; its cochain entry lives in
``F(i_0)`` and

    δa(α_1..α_{m+1}) = F(α_1) a(α_2..α_{m+1})
                       + Σ_{j=1}^{m} (-1)^j a(.., α_j∘α_{j+1}, ..)
                       + (-1)^{m+1} a(α_1..α_m).

By default only non-degenerate chains (no identities) are used; the full
complex is available for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import fgab
from .fgab import AbHom, FgAbGroup, direct_sum, format_group, parse_group
from .torlab import check_size
from .zmat import HermiteBasis, IntMatrix, block_diag, hnf, hstack, image_intersection, solve


class CategoryError(ValueError):
    pass


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    id: str
    src: str
    dst: str


class FinCategory:
    """A finite category given by an explicit composition table.

    ``compose(g, f)`` is ``g∘f`` for ``f: a -> b``, ``g: b -> c``.
    """

    def __init__(self, objects: Sequence[str], morphisms: Sequence[Morphism],
                 identities: dict[str, str], table: dict[tuple[str, str], str], check: bool = True):
        self.objects = list(objects)
        self.morphisms = {m.id: m for m in morphisms}
        if len(self.morphisms) != len(morphisms):
            raise CategoryError("duplicate morphism id")
        self.identities = dict(identities)
        self.table = dict(table)
        self.order = sorted(self.morphisms)
        self._identity_ids = set(self.identities.values())
        if check:
            self.validate()

    def __len__(self) -> int:
        return len(self.morphisms)

    def src(self, m: str) -> str:
        return self.morphisms[m].src

    def dst(self, m: str) -> str:
        return self.morphisms[m].dst

    def is_identity(self, m: str) -> bool:
        return m in self._identity_ids

    def compose(self, g: str, f: str) -> str:
        if self.dst(f) != self.src(g):
            raise CategoryError(f"{g} ∘ {f} is not composable")
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        try:
            return self.table[(g, f)]
        except KeyError:
            raise CategoryError(f"composition table has no entry for ({g}, {f})") from None

    def hom(self, a: str, b: str) -> list[str]:
        return [m for m in self.order if self.src(m) == a and self.dst(m) == b]

    def non_identity(self) -> list[str]:
        return [m for m in self.order if not self.is_identity(m)]

    def validate(self) -> None:
        objs = set(self.objects)
        for m in self.morphisms.values():
            if m.src not in objs or m.dst not in objs:
                raise CategoryError(f"morphism {m.id} has an unknown endpoint")
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or i not in self.morphisms:
                raise CategoryError(f"object {x} has no identity")
            if self.src(i) != x or self.dst(i) != x:
                raise CategoryError(f"identity {i} is not an endomorphism of {x}")
        ms = self.order
        for f in ms:
            for g in ms:
                if self.dst(f) != self.src(g):
                    continue
                gf = self.compose(g, f)
                if gf not in self.morphisms:
                    raise CategoryError(f"composite {g}∘{f} = {gf} is not a morphism")
                if self.src(gf) != self.src(f) or self.dst(gf) != self.dst(g):
                    raise CategoryError(f"composite {g}∘{f} = {gf} has wrong endpoints")
        for f in ms:
            for g in ms:
                if self.dst(f) != self.src(g):
                    continue
                gf = self.compose(g, f)
                for h in ms:
                    if self.dst(g) != self.src(h):
                        continue
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        raise CategoryError(f"associativity fails for ({h}, {g}, {f})")

    def quasi_initial_objects(self) -> list[str]:
        return [c for c in self.objects if all(self.hom(c, d) for d in self.objects)]


def fincat_build(objects: Sequence[str], generators: Sequence[tuple[str, str, str]],
                 relations: Sequence[tuple[Sequence[str], Sequence[str]]] = (),
                 bound: int = 200) -> FinCategory:
    """Close generating arrows under composition.

    A word is a list of generator ids in composition order (``["g", "f"]``
    means ``g∘f``).  Each relation is used as a rewrite rule from its
    shortlex-larger side to the smaller one; composite ids join the word
    with ``*``.
    """
    gens = {gid: (s, t) for gid, s, t in generators}
    if len(gens) != len(generators):
        raise CategoryError("duplicate generator id")
    rules = []
    for lhs, rhs in relations:
        lhs, rhs = tuple(lhs), tuple(rhs)
        big, small = (lhs, rhs) if (len(lhs), lhs) > (len(rhs), rhs) else (rhs, lhs)
        rules.append((big, small))

    def normalize(word: tuple[str, ...]) -> tuple[str, ...]:
        changed = True
        while changed:
            changed = False
            for big, small in rules:
                k = len(big)
                for i in range(len(word) - k + 1):
                    if word[i:i + k] == big:
                        word = word[:i] + small + word[i + k:]
                        changed = True
                        break
                if changed:
                    break
        return word

    def ends(word, default):
        if not word:
            return default, default
        return gens[word[-1]][0], gens[word[0]][1]

    # a morphism is (src, dst, word); empty words are identities
    found: dict[tuple[str, str, tuple[str, ...]], None] = {}
    for x in objects:
        found[(x, x, ())] = None
    queue = []
    for gid, (s, t) in gens.items():
        key = (s, t, normalize((gid,)))
        if key not in found:
            found[key] = None
            queue.append(key)
    while queue:
        s, t, w = queue.pop(0)
        for gid, (gs, gt) in gens.items():
            if gs != t:
                continue
            nw = normalize((gid,) + w)
            key = (s, gt, nw)
            if key not in found:
                found[key] = None
                queue.append(key)
                if len(found) > bound:
                    raise CategoryError(f"closure exceeds {bound} morphisms; category may be infinite")

    def name(s, w):
        return f"id_{s}" if not w else "*".join(w)

    morphisms = [Morphism(name(s, w), s, t) for (s, t, w) in found]
    identities = {x: f"id_{x}" for x in objects}
    by_key = {(s, w): name(s, w) for (s, t, w) in found}
    table = {}
    for (s1, t1, w1) in found:
        for (s2, t2, w2) in found:
            if t1 == s2 and w1 and w2:
                key = (s1, normalize(w2 + w1))
                if key not in by_key:
                    raise CategoryError("rewriting did not close up; relations are not confluent")
                table[(name(s2, w2), name(s1, w1))] = by_key[key]
    return FinCategory(objects, morphisms, identities, table)


def category_from_table(objects: Sequence[str], arrows: Sequence[tuple[str, str, str]],
                        compositions: Iterable[tuple[str, str, str]]) -> FinCategory:
    """Category with implicit identities ``id_<obj>`` plus the listed arrows."""
    morphisms = [Morphism(f"id_{x}", x, x) for x in objects]
    morphisms += [Morphism(a, s, t) for a, s, t in arrows]
    identities = {x: f"id_{x}" for x in objects}
    table = {(g, f): gf for g, f, gf in compositions}
    return FinCategory(objects, morphisms, identities, table)


# ---------------------------------------------------------------------------
# diagrams


class AbDiagram:
    def __init__(self, category: FinCategory, objects: dict[str, FgAbGroup],
                 morphisms: dict[str, AbHom], check: bool = True):
        self.category = category
        self.objects = dict(objects)
        self.morphisms = dict(morphisms)
        for x, i in category.identities.items():
            self.morphisms.setdefault(i, fgab.identity(self.objects[x]))
        if check:
            self.validate()

    def __call__(self, m_or_obj: str):
        if m_or_obj in self.category.morphisms:
            return self.morphisms[m_or_obj]
        return self.objects[m_or_obj]

    def validate(self) -> None:
        C = self.category
        for x in C.objects:
            if x not in self.objects:
                raise DiagramError(f"object {x} has no group")
        for m in C.order:
            h = self.morphisms.get(m)
            if h is None:
                raise DiagramError(f"morphism {m} has no homomorphism")
            s, t = self.objects[C.src(m)], self.objects[C.dst(m)]
            if h.matrix.shape != (t.ngens, s.ngens):
                raise DiagramError(f"morphism {m} has a matrix of the wrong shape")
        for x, i in C.identities.items():
            if not self.morphisms[i].equals(fgab.identity(self.objects[x])):
                raise DiagramError(f"identity {i} is not sent to the identity")
        for f in C.order:
            for g in C.order:
                if C.dst(f) != C.src(g):
                    continue
                gf = C.compose(g, f)
                if not self.morphisms[gf].equals(fgab.compose(self.morphisms[g], self.morphisms[f])):
                    raise DiagramError(f"functoriality fails for {g}∘{f} = {gf}")


def constant_diagram(category: FinCategory, G: FgAbGroup) -> AbDiagram:
    idG = fgab.identity(G)
    return AbDiagram(category, {x: G for x in category.objects},
                     {m: idG for m in category.order}, check=False)


# ---------------------------------------------------------------------------
# cochains


def chains(C: FinCategory, m: int, normalized: bool = True) -> list[tuple]:
    """Depth-first enumeration of ``m``-chains in sorted morphism order.

    Degree 0 chains are 1-tuples holding an object id.
    """
    if m == 0:
        return [(x,) for x in C.objects]
    pool = C.non_identity() if normalized else list(C.order)
    out = []

    def extend(prefix):
        if len(prefix) == m:
            out.append(tuple(prefix))
            return
        need = C.src(prefix[-1])
        for a in pool:
            if C.dst(a) == need:
                prefix.append(a)
                extend(prefix)
                prefix.pop()

    for a in pool:
        extend([a])
    return out


def _base(C: FinCategory, chain: tuple) -> str:
    if len(chain) == 1 and chain[0] in C.objects and chain[0] not in C.morphisms:
        return chain[0]
    return C.dst(chain[0])


@dataclass
class CochainData:
    diagram: AbDiagram
    normalized: bool
    chains: list[list[tuple]]
    groups: list[FgAbGroup]
    offsets: list[dict[tuple, int]]
    coboundaries: list[AbHom] = field(default_factory=list)

    def cohomology(self, n: int) -> tuple[FgAbGroup, HermiteBasis]:
        """``H^n`` with the Hermite basis of the cocycle lattice (its generators)."""
        d = self.coboundaries[n]
        K = fgab.kernel_lattice(d)
        Cn = self.groups[n]
        if n == 0:
            B = Cn.relations
        else:
            B = hstack(self.coboundaries[n - 1].matrix, Cn.relations)
        G, _ = fgab.subquotient_with_basis(K.basis, B)
        return G, K


def cochain_data(D: AbDiagram, top: int, normalized: bool = True) -> CochainData:
    """Cochain groups in degrees ``0..top+1`` and ``δ^0..δ^top``."""
    C = D.category
    all_chains, groups, offsets = [], [], []
    for m in range(top + 2):
        ch = chains(C, m, normalized)
        all_chains.append(ch)
        gs = [D.objects[_base(C, c)] for c in ch]
        total = sum(g.ngens for g in gs)
        check_size(total, f"degree-{m} cochains")
        offs, o = {}, 0
        for c, g in zip(ch, gs):
            offs[c] = o
            o += g.ngens
        offsets.append(offs)
        groups.append(FgAbGroup(total, block_diag(*[g.relations for g in gs]) if gs
                                else IntMatrix.zeros(0, 0)))
    data = CochainData(D, normalized, all_chains, groups, offsets)
    for m in range(top + 1):
        data.coboundaries.append(_coboundary(data, m))
    return data


def _faces(C: FinCategory, u: tuple):
    """``(sign, face, use_F)`` for the coboundary of an ``(m+1)``-chain ``u``."""
    m1 = len(u)
    if m1 == 1:
        a = u[0]
        yield 1, (C.src(a),), True
        yield -1, (C.dst(a),), False
        return
    yield 1, u[1:], True
    for j in range(1, m1):
        comp = C.compose(u[j - 1], u[j])
        yield (-1) ** j, u[:j - 1] + (comp,) + u[j + 1:], False
    yield (-1) ** m1, u[:-1], False


def _coboundary(data: CochainData, m: int) -> AbHom:
    D = data.diagram
    C = D.category
    src, tgt = data.groups[m], data.groups[m + 1]
    out = [[0] * src.ngens for _ in range(tgt.ngens)]
    for u in data.chains[m + 1]:
        r0 = data.offsets[m + 1][u]
        base = D.objects[_base(C, u)]
        for sign, face, use_f in _faces(C, u):
            if data.normalized and m > 0 and any(C.is_identity(a) for a in face):
                continue
            c0 = data.offsets[m][face]
            if use_f:
                blk = D.morphisms[u[0]].matrix
            else:
                blk = IntMatrix.identity(base.ngens)
            for i in range(blk.rows):
                row = out[r0 + i]
                for j in range(blk.cols):
                    v = blk[i, j]
                    if v:
                        row[c0 + j] += sign * v
    M = IntMatrix(tgt.ngens, src.ngens, (x for row in out for x in row))
    return AbHom(src, tgt, M, check=False)


def lim_n(D: AbDiagram, n: int, normalized: bool = True) -> FgAbGroup:
    if n not in (0, 1, 2):
        raise ValueError("only lim^0, lim^1 and lim^2 are supported")
    return cochain_data(D, n, normalized).cohomology(n)[0]


def lim(D: AbDiagram) -> tuple[FgAbGroup, dict[str, AbHom]]:
    """The compatible families, with the projection to each object."""
    data = cochain_data(D, 0)
    K, incl = fgab.kernel(data.coboundaries[0])
    _, _, projs = direct_sum([D.objects[x] for x in D.category.objects])
    # direct_sum builds its own group object; reuse only the matrices
    out = {}
    for x, pr in zip(D.category.objects, projs):
        out[x] = AbHom(K, D.objects[x], pr.matrix @ incl.matrix, check=False)
    return K, out


def compatible_families_lattice(D: AbDiagram) -> HermiteBasis:
    """Preimage in ``⊕ Z^{gens F(c)}`` of the compatible families, by direct equations."""
    C = D.category
    objs = C.objects
    offs, o = {}, 0
    for x in objs:
        offs[x] = o
        o += D.objects[x].ngens
    total = o
    rows_blocks = []
    rel_blocks = []
    for a in C.non_identity():
        s, t = C.src(a), C.dst(a)
        F = D.morphisms[a].matrix
        gt = D.objects[t].ngens
        M = [[0] * total for _ in range(gt)]
        for i in range(gt):
            for j in range(F.cols):
                M[i][offs[s] + j] += F[i, j]
            M[i][offs[t] + i] -= 1
        rows_blocks.append(IntMatrix.from_rows(M, total))
        rel_blocks.append(D.objects[t].relations)
    ambient_rel = block_diag(*[D.objects[x].relations for x in objs])
    if not rows_blocks:
        return hnf(IntMatrix.identity(total))
    S = FgAbGroup(total, ambient_rel)
    T = FgAbGroup(sum(b.rows for b in rows_blocks), block_diag(*rel_blocks))
    big = rows_blocks[0].vstack(*rows_blocks[1:]) if len(rows_blocks) > 1 else rows_blocks[0]
    return fgab.kernel_lattice(AbHom(S, T, big, check=False))


# ---------------------------------------------------------------------------
# exact sequences


@dataclass
class SixTermReport:
    groups: list[FgAbGroup]
    maps: list[AbHom]
    exact: list[bool]
    labels: list[str]

    @property
    def ok(self) -> bool:
        return all(self.exact)

    def describe(self) -> list[str]:
        return [f"{lab}: {format_group(g)}" for lab, g in zip(self.labels, self.groups)]


def _cochain_map(data_s: CochainData, data_t: CochainData, eta: dict[str, AbHom], m: int) -> AbHom:
    C = data_s.diagram.category
    blocks = [eta[_base(C, c)].matrix for c in data_s.chains[m]]
    M = block_diag(*blocks) if blocks else IntMatrix.zeros(0, 0)
    return AbHom(data_s.groups[m], data_t.groups[m], M, check=False)


def _induced(phi: AbHom, K_src: HermiteBasis, G_src: FgAbGroup,
             K_tgt: HermiteBasis, G_tgt: FgAbGroup) -> AbHom:
    cols = []
    for c in K_src.basis.to_columns():
        coords = K_tgt.coordinates(phi.matrix.apply(c))
        if coords is None:
            raise AssertionError("cochain map does not preserve cocycles")
        cols.append(coords)
    return AbHom(G_src, G_tgt, IntMatrix.from_columns(cols, G_tgt.ngens))


def _exact_at(f: AbHom, g: AbHom) -> bool:
    return fgab.image_lattice(f).basis == fgab.kernel_lattice(g).basis


def check_objectwise_exact(D1: AbDiagram, D2: AbDiagram, D3: AbDiagram,
                           eta: dict[str, AbHom], eps: dict[str, AbHom]) -> None:
    C = D1.category
    for x in C.objects:
        e, p = eta[x], eps[x]
        if not e.is_injective():
            raise ValueError(f"first map is not injective at {x}")
        if not p.is_surjective():
            raise ValueError(f"second map is not surjective at {x}")
        if not _exact_at(e, p):
            raise ValueError(f"sequence is not exact in the middle at {x}")
    for a in C.order:
        s, t = C.src(a), C.dst(a)
        if not fgab.compose(D2.morphisms[a], eta[s]).equals(fgab.compose(eta[t], D1.morphisms[a])):
            raise ValueError(f"first map is not natural along {a}")
        if not fgab.compose(D3.morphisms[a], eps[s]).equals(fgab.compose(eps[t], D2.morphisms[a])):
            raise ValueError(f"second map is not natural along {a}")


def connecting_map(data1, data2, data3, eta, eps):
    """``lim D3 -> lim^1 D1`` by lift, coboundary, pull back."""
    H0_3, K0_3 = data3.cohomology(0)
    H1_1, K1_1 = data1.cohomology(1)
    eps0 = _cochain_map(data2, data3, eps, 0)
    eta1 = _cochain_map(data1, data2, eta, 1)
    d0 = data2.coboundaries[0]
    cols = []
    for z in K0_3.basis.to_columns():
        x = eps0.preimage(z)
        y = d0.matrix.apply(x)
        w = eta1.preimage(y)
        if w is None:
            raise AssertionError("coboundary of the lift is not in the image")
        coords = K1_1.coordinates(w)
        if coords is None:
            raise AssertionError("pulled-back cochain is not a cocycle")
        cols.append(coords)
    return AbHom(H0_3, H1_1, IntMatrix.from_columns(cols, H1_1.ngens))


def six_term_check(D1: AbDiagram, D2: AbDiagram, D3: AbDiagram,
                   eta: dict[str, AbHom], eps: dict[str, AbHom]) -> SixTermReport:
    """``0 -> lim D1 -> lim D2 -> lim D3 -> lim^1 D1 -> lim^1 D2 -> lim^1 D3``."""
    check_objectwise_exact(D1, D2, D3, eta, eps)
    data = [cochain_data(D, 1) for D in (D1, D2, D3)]
    H0 = [d.cohomology(0) for d in data]
    H1 = [d.cohomology(1) for d in data]
    maps = []
    for deg, H in ((0, H0),):
        for (a, b, nat) in ((0, 1, eta), (1, 2, eps)):
            phi = _cochain_map(data[a], data[b], nat, deg)
            maps.append(_induced(phi, H[a][1], H[a][0], H[b][1], H[b][0]))
    maps.append(connecting_map(*data, eta, eps))
    for (a, b, nat) in ((0, 1, eta), (1, 2, eps)):
        phi = _cochain_map(data[a], data[b], nat, 1)
        maps.append(_induced(phi, H1[a][1], H1[a][0], H1[b][1], H1[b][0]))
    groups = [H0[0][0], H0[1][0], H0[2][0], H1[0][0], H1[1][0], H1[2][0]]
    exact = [maps[0].is_injective()]
    for f, g in zip(maps, maps[1:]):
        exact.append(_exact_at(f, g))
    labels = ["lim D1", "lim D2", "lim D3", "lim1 D1", "lim1 D2", "lim1 D3"]
    return SixTermReport(groups, maps, exact, labels)


# ---------------------------------------------------------------------------
# quasi-initial objects and coequalizers


@dataclass
class EmbeddingReport:
    base: str
    projection: AbHom
    injective: bool
    image_is_equalizer: bool
    equalizer_lattice: HermiteBasis


def quasi_initial_embedding(D: AbDiagram) -> EmbeddingReport:
    C = D.category
    qi = C.quasi_initial_objects()
    if not qi:
        raise ValueError("category has no quasi-initial object")
    c0 = qi[0]
    K, projs = lim(D)
    proj = projs[c0]
    G0 = D.objects[c0]
    lat = hnf(IntMatrix.identity(G0.ngens))
    for c in C.objects:
        arrows = C.hom(c0, c)
        for i, f1 in enumerate(arrows):
            for f2 in arrows[i + 1:]:
                eq = fgab.kernel_lattice(D.morphisms[f1] - D.morphisms[f2])
                lat = image_intersection(lat.basis, eq.basis)
    return EmbeddingReport(
        c0, proj, proj.is_injective(), fgab.image_lattice(proj).basis == lat.basis, lat
    )


def coequalizer_vanishing_check(D: AbDiagram) -> bool:
    """Check the coequalizer hypothesis; when it holds, confirm ``lim^1 = 0``."""
    C = D.category
    if not C.quasi_initial_objects():
        return False
    ms = C.order
    for e1 in ms:
        for e2 in ms:
            if e1 >= e2 or C.src(e1) != C.src(e2) or C.dst(e1) != C.dst(e2):
                continue
            I0 = C.dst(e1)
            ok = False
            for e in ms:
                if C.src(e) != I0:
                    continue
                if C.compose(e, e1) == C.compose(e, e2) and D.morphisms[e].is_injective():
                    ok = True
                    break
            if not ok:
                return False
    if not lim_n(D, 1).is_trivial():
        raise AssertionError("coequalizer hypothesis holds but lim^1 is nonzero")
    return True


# ---------------------------------------------------------------------------
# obstruction cocycle


@dataclass
class FourTermWitness:
    """``0 -> H2 --i--> F1(α) --phi--> F2(α) --p--> H1 -> 0`` at one object."""

    i: AbHom
    phi: AbHom
    p: AbHom


@dataclass
class ObstructionResult:
    cocycles: list[list[int]]        # one C^2(H2) vector per generator of H1
    is_cocycle: list[bool]
    class_is_zero: list[bool]
    data: CochainData


def _check_witnesses(C: FinCategory, H2: FgAbGroup, F1: AbDiagram, F2: AbDiagram,
                     H1: FgAbGroup, w: dict[str, FourTermWitness]) -> None:
    for x in C.objects:
        wx = w[x]
        if not wx.i.is_injective():
            raise ValueError(f"H2 -> F1 is not injective at {x}")
        if not _exact_at(wx.i, wx.phi):
            raise ValueError(f"not exact at F1({x})")
        if not _exact_at(wx.phi, wx.p):
            raise ValueError(f"not exact at F2({x})")
        if not wx.p.is_surjective():
            raise ValueError(f"F2 -> H1 is not surjective at {x}")
    for a in C.non_identity():
        s, t = C.src(a), C.dst(a)
        if not fgab.compose(F1.morphisms[a], w[s].i).equals(w[t].i):
            raise ValueError(f"naturality square for H2 -> F1 fails along {a}")
        if not fgab.compose(F2.morphisms[a], w[s].phi).equals(fgab.compose(w[t].phi, F1.morphisms[a])):
            raise ValueError(f"naturality square for F1 -> F2 fails along {a}")
        if not fgab.compose(w[t].p, F2.morphisms[a]).equals(w[s].p):
            raise ValueError(f"naturality square for F2 -> H1 fails along {a}")


def obstruction_cocycle(category: FinCategory, H2: FgAbGroup, F1: AbDiagram, F2: AbDiagram,
                        H1: FgAbGroup, witnesses: dict[str, FourTermWitness],
                        s_shift: Optional[Callable[[str], Sequence[int]]] = None,
                        t_shift=None, formula: str = "connecting") -> ObstructionResult:
    """Evaluate the 2-cocycle ``a²`` on every generator ``a`` of ``H1``.

    For ``γ -w-> β -v-> α`` with ``b = F2(w) s_γ(a) - s_β(a)``:

        a²(v, w) = F1(v) t_β(b) - t_α(F2(v) b)          (formula="two-term")

    That expression is a cocycle only when ``t`` is additive on the values
    it meets.  The default ``formula="connecting"`` replaces the second term
    by ``t_α(b(v∘w)) - t_α(b(v))``, which agrees with it for additive ``t``
    and is always a cocycle: it is ``δ(t∘b)`` computed in ``F1``.

    Sections are canonical preimages.  ``s_shift(x)`` (a vector in ``F1(x)``)
    and ``t_shift`` (a vector in ``H2``, or a function of the object and the
    normalized argument) perturb them, for checking that the
    class does not depend on the choice.
    """
    if formula not in ("connecting", "two-term"):
        raise ValueError(f"unknown formula {formula!r}")
    C = category
    _check_witnesses(C, H2, F1, F2, H1, witnesses)
    const = constant_diagram(C, H2)
    data = cochain_data(const, 2)

    def s(x, a):
        v = witnesses[x].p.preimage(a)
        if s_shift is not None:
            shift = witnesses[x].phi.matrix.apply(list(s_shift(x)))
            v = [p + q for p, q in zip(v, shift)]
        return F2.objects[x].normal_form(v)

    def t(x, y):
        y = F2.objects[x].normal_form(y)
        v = witnesses[x].phi.preimage(y)
        if v is None:
            raise AssertionError(f"element outside the image of F1 -> F2 at {x}")
        if t_shift is not None:
            h = t_shift(x, y) if callable(t_shift) else t_shift
            v = [p + q for p, q in zip(v, witnesses[x].i.matrix.apply(list(h)))]
        return list(F1.objects[x].normal_form(v))

    def sub(u, v):
        return [a - b for a, b in zip(u, v)]

    cocycles, is_cocycle, zero = [], [], []
    d1, d2 = data.coboundaries[1], data.coboundaries[2]
    for a in IntMatrix.identity(H1.ngens).to_columns():
        vec = [0] * data.groups[2].ngens
        for (v, w) in data.chains[2]:
            alpha, beta, gamma = C.dst(v), C.src(v), C.src(w)
            b = sub(F2.morphisms[w].matrix.apply(list(s(gamma, a))), list(s(beta, a)))
            first = F1.morphisms[v].matrix.apply(t(beta, b))
            if formula == "two-term":
                second = t(alpha, F2.morphisms[v].matrix.apply(b))
            else:
                vw = C.compose(v, w)
                b_vw = sub(F2.morphisms[vw].matrix.apply(list(s(gamma, a))), list(s(alpha, a)))
                b_v = sub(F2.morphisms[v].matrix.apply(list(s(beta, a))), list(s(alpha, a)))
                second = sub(t(alpha, b_vw), t(alpha, b_v))
            val = witnesses[alpha].i.preimage(sub(first, second))
            if val is None:
                raise AssertionError("a² value is not in H2")
            off = data.offsets[2][(v, w)]
            vec[off:off + H2.ngens] = H2.normal_form(val)
        cocycles.append(vec)
        is_cocycle.append(data.groups[3].is_zero_vector(d2.matrix.apply(vec)))
        zero.append(solve(hstack(d1.matrix, data.groups[2].relations), vec) is not None)
    return ObstructionResult(cocycles, is_cocycle, zero, data)


def is_coboundary(data: CochainData, vec: Sequence[int], degree: int = 2) -> bool:
    d = data.coboundaries[degree - 1]
    return solve(hstack(d.matrix, data.groups[degree].relations), list(vec)) is not None


# ---------------------------------------------------------------------------
# file format


def load_diagram(spec: dict) -> AbDiagram:
    try:
        objs = spec["objects"]
        mors = spec.get("morphisms", [])
        comps = spec.get("compositions", [])
    except (KeyError, TypeError):
        raise DiagramError("diagram needs 'objects', 'morphisms', 'compositions'") from None
    groups = {}
    order = []
    for o in objs:
        oid = str(o["id"])
        if oid in groups:
            raise DiagramError(f"duplicate object id {oid}")
        try:
            groups[oid] = parse_group(o["group"])
        except ValueError as e:
            raise DiagramError(f"object {oid}: {e}") from None
        order.append(oid)
    arrows, homs = [], {}
    for m in mors:
        mid, s, t = str(m["id"]), str(m["src"]), str(m["dst"])
        if s not in groups or t not in groups:
            raise DiagramError(f"morphism {mid} has an unknown endpoint")
        G, H = groups[s], groups[t]
        rows = m.get("matrix", [])
        M = IntMatrix.from_rows(rows, G.ngens) if rows else IntMatrix.zeros(H.ngens, G.ngens)
        if M.shape != (H.ngens, G.ngens):
            raise DiagramError(f"morphism {mid}: matrix shape {M.shape}, expected {(H.ngens, G.ngens)}")
        try:
            homs[mid] = AbHom(G, H, M)
        except fgab.IllDefinedMap as e:
            raise DiagramError(f"morphism {mid}: {e}") from None
        arrows.append((mid, s, t))
    try:
        C = category_from_table(order, arrows, [tuple(c) for c in comps])
    except CategoryError as e:
        raise DiagramError(str(e)) from None
    return AbDiagram(C, groups, homs)
