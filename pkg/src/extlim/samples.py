"""Deterministic sample generators: groups, homomorphisms, small categories,
diagrams, exact sequences of diagrams and 4-term witnesses.

Shared by the acceptance runner and the test suite.  Every generator takes
a ``random.Random`` so results are reproducible from a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from . import fgab
from .dlim import AbDiagram, FinCategory, FourTermWitness, fincat_build
from .fextcat import build_truncation
from .fgab import AbHom, FgAbGroup, direct_sum, from_invariants, parse_group, tensor
from .zmat import IntMatrix, block_diag, hstack, kronecker, vstack

TOR_SAMPLES = ["Z/2", "Z/4", "Z/6", "Z/2+Z/3", "Z+Z/2"]


def tor_sample_set() -> list[tuple[str, int]]:
    out = [(a, n) for a in TOR_SAMPLES for n in (2, 3)]
    out.append(("Z/2", 4))
    return out


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 10) -> IntMatrix:
    return IntMatrix(rows, cols, (rng.randint(-bound, bound) for _ in range(rows * cols)))


def random_unimodular(rng: random.Random, n: int, steps: int = 8) -> IntMatrix:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-2, 2)
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    if n and rng.random() < 0.5:
        k = rng.randrange(n)
        rows[k] = [-a for a in rows[k]]
    return IntMatrix.from_rows(rows, n)


def random_group(rng: random.Random, max_gens: int = 2, allow_free: bool = True) -> FgAbGroup:
    k = rng.randint(1, max_gens)
    free = rng.randint(0, 1) if allow_free else 0
    free = min(free, k)
    tors = sorted(rng.choice([2, 3, 4, 6]) for _ in range(k - free))
    # invariant-factor form is not needed; from_invariants accepts any orders
    return from_invariants(free, tors)


def random_free_group(rng: random.Random, max_rank: int = 2) -> FgAbGroup:
    return fgab.free_group(rng.randint(1, max_rank))


def hom_lattice(G: FgAbGroup, H: FgAbGroup):
    """All homomorphisms ``G -> H`` as a lattice of column-major matrix vectors."""
    h, g = H.ngens, G.ngens
    R = G.relations
    k = R.cols
    src = fgab.free_group(h * g)
    tgt = FgAbGroup(h * k, block_diag(*([H.relations] * k)) if k else IntMatrix.zeros(0, 0))
    # vec(M R) = (R^T ⊗ I_h) vec(M) for column-major vec
    lin = kronecker(R.transpose(), IntMatrix.identity(h))
    return fgab.kernel_lattice(AbHom(src, tgt, lin, check=False))


def random_hom(rng: random.Random, G: FgAbGroup, H: FgAbGroup, bound: int = 3) -> AbHom:
    h, g = H.ngens, G.ngens
    if h == 0 or g == 0:
        return fgab.zero_hom(G, H)
    L = hom_lattice(G, H)
    vec = [0] * (h * g)
    for col in L.basis.to_columns():
        c = rng.randint(-bound, bound)
        vec = [a + c * b for a, b in zip(vec, col)]
    M = IntMatrix(h, g, (vec[j * h + i] for i in range(h) for j in range(g)))
    return AbHom(G, H, M)


def random_injective_free(rng: random.Random, G: FgAbGroup, extra: int = 1) -> tuple[FgAbGroup, AbHom]:
    """A free target with an injective map from a free ``G``."""
    n = G.ngens
    H = fgab.free_group(n + rng.randint(0, extra))
    while True:
        M = random_matrix(rng, H.ngens, n, 3)
        f = AbHom(G, H, M)
        if f.is_injective():
            return H, f


# ---------------------------------------------------------------------------
# categories


@dataclass
class CategorySpec:
    name: str
    objects: list[str]
    generators: list[tuple[str, str, str]]
    relations: list[tuple[list[str], list[str]]]

    def build(self) -> FinCategory:
        return fincat_build(self.objects, self.generators, self.relations)


def category_zoo() -> list[CategorySpec]:
    """Small categories with at most 8 morphisms."""
    return [
        CategorySpec("point", ["a"], [], []),
        CategorySpec("arrow", ["a", "b"], [("f", "a", "b")], []),
        CategorySpec("parallel", ["a", "b"], [("f", "a", "b"), ("g", "a", "b")], []),
        CategorySpec("chain3", ["a", "b", "c"], [("f", "a", "b"), ("g", "b", "c")], []),
        CategorySpec("span", ["a", "b", "c"], [("f", "a", "b"), ("g", "a", "c")], []),
        CategorySpec("cospan", ["a", "b", "c"], [("f", "a", "c"), ("g", "b", "c")], []),
        CategorySpec("fork", ["a", "b", "c"],
                     [("f", "a", "b"), ("g", "a", "b"), ("e", "b", "c")], []),
        CategorySpec("coequalized", ["a", "b", "c"],
                     [("f", "a", "b"), ("g", "a", "b"), ("e", "b", "c")],
                     [(["e", "f"], ["e", "g"])]),
        CategorySpec("involution", ["a"], [("s", "a", "a")], [(["s", "s"], [])]),
        CategorySpec("idempotent", ["a"], [("e", "a", "a")], [(["e", "e"], ["e"])]),
        CategorySpec("arrow_idem", ["a", "b"], [("f", "a", "b"), ("e", "b", "b")],
                     [(["e", "e"], ["e"])]),
    ]


def zoo_by_name(name: str) -> CategorySpec:
    for c in category_zoo():
        if c.name == name:
            return c
    raise KeyError(name)


def _word(C: FinCategory, m: str) -> list[str]:
    if C.is_identity(m):
        return []
    return m.split("*")


def extend_functor(C: FinCategory, groups: dict[str, FgAbGroup],
                   gen_homs: dict[str, AbHom]) -> AbDiagram:
    """Extend generator values to all morphisms (validated)."""
    homs = {}
    for m in C.order:
        if C.is_identity(m):
            continue
        h = None
        for gname in reversed(_word(C, m)):
            h = gen_homs[gname] if h is None else fgab.compose(gen_homs[gname], h)
        homs[m] = h
    return AbDiagram(C, groups, homs)


def _involution(rng: random.Random, G: FgAbGroup) -> AbHom:
    n = G.ngens
    choices = [IntMatrix.identity(n), -IntMatrix.identity(n)]
    if n >= 2 and G.relations == IntMatrix.zeros(n, 0):
        P = [[0] * n for _ in range(n)]
        P[0][1] = P[1][0] = 1
        for i in range(2, n):
            P[i][i] = 1
        choices.append(IntMatrix.from_rows(P, n))
    return AbHom(G, G, rng.choice(choices))


def _idempotent(rng: random.Random, n: int) -> IntMatrix:
    # U diag(1..1,0..0) U^{-1} for a random unimodular U
    from .zmat import inverse_unimodular
    r = rng.randint(0, n)
    U = random_unimodular(rng, n, 3)
    D = IntMatrix.diag([1] * r + [0] * (n - r))
    return U @ D @ inverse_unimodular(U)


def random_diagram(rng: random.Random, spec: CategorySpec, free_only: bool = False) -> AbDiagram:
    C = spec.build()
    pick = (lambda: random_free_group(rng)) if free_only else (lambda: random_group(rng))
    name = spec.name
    if name == "involution":
        G = pick()
        return extend_functor(C, {"a": G}, {"s": _involution(rng, G)})
    if name in ("idempotent", "arrow_idem"):
        n = rng.randint(1, 3)
        G = fgab.free_group(n)
        e = AbHom(G, G, _idempotent(rng, n))
        if name == "idempotent":
            return extend_functor(C, {"a": G}, {"e": e})
        A0 = pick()
        f = random_hom(rng, A0, G)
        return extend_functor(C, {"a": A0, "b": G}, {"f": fgab.compose(e, f), "e": e})
    if name == "coequalized":
        A0, B0 = pick(), random_free_group(rng)
        f = random_hom(rng, A0, B0)
        C0, eps = random_injective_free(rng, B0)
        return extend_functor(C, {"a": A0, "b": B0, "c": C0}, {"f": f, "g": f, "e": eps})
    groups = {x: pick() for x in C.objects}
    gens = {g: random_hom(rng, groups[s], groups[t]) for g, s, t in spec.generators}
    return extend_functor(C, groups, gens)


def free_category_specs() -> list[CategorySpec]:
    return [c for c in category_zoo() if not c.relations]


# ---------------------------------------------------------------------------
# short exact sequences of diagrams


@dataclass
class SESample:
    D1: AbDiagram
    D2: AbDiagram
    D3: AbDiagram
    eta: dict[str, AbHom]
    eps: dict[str, AbHom]
    kind: str


def split_sequence(D1: AbDiagram, D3: AbDiagram) -> SESample:
    C = D1.category
    groups, eta, eps = {}, {}, {}
    for x in C.objects:
        S, inj, proj = direct_sum([D1.objects[x], D3.objects[x]])
        groups[x] = S
        eta[x] = inj[0]
        eps[x] = proj[1]
    homs = {}
    for m in C.order:
        s, t = C.src(m), C.dst(m)
        M = block_diag(D1.morphisms[m].matrix, D3.morphisms[m].matrix)
        homs[m] = AbHom(groups[s], groups[t], M)
    D2 = AbDiagram(C, groups, homs)
    return SESample(D1, D2, D3, eta, eps, "split")


def _reduce_mod(D: AbDiagram, k: int) -> AbDiagram:
    """A free-valued diagram with every value taken mod ``k`` (``k = 0`` keeps it)."""
    C = D.category
    groups = {}
    for x in C.objects:
        n = D.objects[x].ngens
        groups[x] = FgAbGroup(n, IntMatrix.diag([k] * n)) if k else D.objects[x]
    homs = {m: AbHom(groups[C.src(m)], groups[C.dst(m)], D.morphisms[m].matrix)
            for m in C.order}
    return AbDiagram(C, groups, homs)


def multiplication_sequence(D: AbDiagram, k: int, m: int) -> SESample:
    """``0 -> D/k --×m--> D/km -> D/m -> 0`` for a free-valued diagram (``k = 0``: ``D``)."""
    C = D.category
    D1, D2, D3 = _reduce_mod(D, k), _reduce_mod(D, k * m), _reduce_mod(D, m)
    eta, eps = {}, {}
    for x in C.objects:
        n = D.objects[x].ngens
        eta[x] = AbHom(D1.objects[x], D2.objects[x], IntMatrix.identity(n).scale(m))
        eps[x] = AbHom(D2.objects[x], D3.objects[x], IntMatrix.identity(n))
    return SESample(D1, D2, D3, eta, eps, f"mult(k={k}, m={m})")


def random_ses(rng: random.Random) -> SESample:
    specs = [c for c in category_zoo() if len(c.build()) <= 8]
    spec = rng.choice(specs)
    if rng.random() < 0.4:
        return split_sequence(random_diagram(rng, spec), random_diagram(rng, spec))
    D = random_diagram(rng, spec, free_only=True)
    return multiplication_sequence(D, rng.choice([0, 2, 3]), rng.choice([2, 3, 4]))


# ---------------------------------------------------------------------------
# coequalizer-hypothesis instances


def coequalizer_instances(rng: random.Random, count: int = 20) -> list[AbDiagram]:
    """Diagrams over categories with a quasi-initial object where every parallel
    pair is coequalized by an arrow with injective image."""
    out = []
    posets = [zoo_by_name("chain3"), zoo_by_name("span"), zoo_by_name("arrow"), zoo_by_name("point")]
    while len(out) < count:
        if len(out) % 2 == 0:
            out.append(random_diagram(rng, zoo_by_name("coequalized")))
        else:
            out.append(random_diagram(rng, rng.choice(posets)))
    return out


# ---------------------------------------------------------------------------
# 4-term witnesses over truncations


DEFAULT_WITNESS_RECIPE = {
    "objects": ["canonical", {"stabilize": 1}, "coproduct(0,0)", "double(0)"],
    "morphisms": ["lift(0,1)", "lift(1,0)", "iota1", "iota2", "f1(0)", "f2(0)"],
}


@dataclass
class WitnessData:
    category: FinCategory
    H2: FgAbGroup
    F1: AbDiagram
    F2: AbDiagram
    H1: FgAbGroup
    witnesses: dict[str, FourTermWitness]

    def args(self):
        return self.category, self.H2, self.F1, self.F2, self.H1, self.witnesses


def _h_tensor(A: FgAbGroup, B: FgAbGroup, recipe: dict):
    """``α ↦ H⊗B`` and ``α ↦ F⊗B`` over the truncation, with ``H⊗B -> F⊗B``."""
    T = build_truncation(A, recipe)
    C = T.category
    gB, RB = B.ngens, B.relations
    IB = IntMatrix.identity(gB)
    F1v, F2v, phis = {}, {}, {}
    for n_, p in zip(T.names, T.presentations):
        h = p.h_rank
        F1v[n_] = FgAbGroup(h * gB, kronecker(IntMatrix.identity(h), RB))
        F2v[n_] = FgAbGroup(p.rank * gB, kronecker(IntMatrix.identity(p.rank), RB))
        phis[n_] = AbHom(F1v[n_], F2v[n_], kronecker(p.inclusion, IB))
    F1h, F2h = {}, {}
    for name, m in T.morphisms.items():
        s, t = C.src(name), C.dst(name)
        ps, pt = m.source, m.target
        cols = [pt.H.coordinates(c) for c in (m.matrix @ ps.inclusion).to_columns()]
        Mh = IntMatrix.from_columns(cols, pt.h_rank)
        F1h[name] = AbHom(F1v[s], F1v[t], kronecker(Mh, IB))
        F2h[name] = AbHom(F2v[s], F2v[t], kronecker(m.matrix, IB))
    return T, AbDiagram(C, F1v, F1h), AbDiagram(C, F2v, F2h), phis


def _spread(C: FinCategory, base_map: AbHom, F: AbDiagram, root: str) -> dict[str, AbHom]:
    """Push a map into ``F(root)`` to every object along the first arrow out of ``root``."""
    return {x: fgab.compose(F.morphisms[C.hom(root, x)[0]], base_map) for x in C.objects}


def tor_witness(A: FgAbGroup, B: FgAbGroup, recipe: Optional[dict] = None) -> WitnessData:
    """``0 -> Tor(A,B) -> H⊗B -> F⊗B -> A⊗B -> 0`` over a truncation."""
    recipe = recipe or DEFAULT_WITNESS_RECIPE
    T, F1, F2, phis = _h_tensor(A, B, recipe)
    C = T.category
    root = T.names[0]
    H2, inc0 = fgab.kernel(phis[root])
    AB = tensor(A, B)
    incs = _spread(C, inc0, F1, root)
    W = {}
    for n_, p in zip(T.names, T.presentations):
        pr = AbHom(F2.objects[n_], AB, kronecker(p.projection, IntMatrix.identity(B.ngens)))
        W[n_] = FourTermWitness(incs[n_], phis[n_], pr)
    return WitnessData(C, H2, F1, F2, AB, W)


def split_witness(A: FgAbGroup, B: FgAbGroup, H1: FgAbGroup, rng: random.Random,
                  recipe: Optional[dict] = None) -> WitnessData:
    """``0 -> H2 -> F1 -> F3 ⊕ H1 -> H1 -> 0`` with projection ``(0, id)``.

    ``F1 = H⊗B``, ``H2 = Tor(A,B)`` and ``F3 = F1/H2``.  Each object's copy
    of ``F3 ⊕ H1`` is written in coordinates twisted by its own unimodular
    change of basis, so the solver's sections are not the natural ones.
    """
    from .zmat import inverse_unimodular
    recipe = recipe or DEFAULT_WITNESS_RECIPE
    T, F1, _, phis = _h_tensor(A, B, recipe)
    C = T.category
    root = T.names[0]
    H2, inc0 = fgab.kernel(phis[root])
    incs = _spread(C, inc0, F1, root)
    F2v, twist = {}, {}
    g1 = H1.ngens
    for x in C.objects:
        G1 = F1.objects[x]
        n3 = G1.ngens
        R3 = hstack(G1.relations, incs[x].matrix)
        K = random_matrix(rng, n3, g1, 2)
        U = vstack(hstack(IntMatrix.identity(n3), K),
                   hstack(IntMatrix.zeros(g1, n3), IntMatrix.identity(g1)))
        twist[x] = (U, inverse_unimodular(U))
        F2v[x] = FgAbGroup(n3 + g1, U @ block_diag(R3, H1.relations))
    F2h = {}
    for m in C.order:
        s, t = C.src(m), C.dst(m)
        M = twist[t][0] @ block_diag(F1.morphisms[m].matrix, IntMatrix.identity(g1)) @ twist[s][1]
        F2h[m] = AbHom(F2v[s], F2v[t], M)
    F2 = AbDiagram(C, F2v, F2h)
    W = {}
    for x in C.objects:
        n3 = F1.objects[x].ngens
        U, Uinv = twist[x]
        phi = AbHom(F1.objects[x], F2v[x], U @ vstack(IntMatrix.identity(n3), IntMatrix.zeros(g1, n3)))
        proj = hstack(IntMatrix.zeros(g1, n3), IntMatrix.identity(g1)) @ Uinv
        W[x] = FourTermWitness(incs[x], phi, AbHom(F2v[x], H1, proj))
    return WitnessData(C, H2, F1, F2, H1, W)


def witness_samples() -> list[tuple[str, str]]:
    return [("Z/2", "Z/2"), ("Z/4", "Z/2"), ("Z/2+Z/2", "Z/4"), ("Z/6", "Z/4"),
            ("Z/4+Z/2", "Z/2+Z/4"), ("Z+Z/3", "Z/6"), ("Z/3", "Z")]


def parse_pair(a: str, b: str) -> tuple[FgAbGroup, FgAbGroup]:
    return parse_group(a), parse_group(b)
