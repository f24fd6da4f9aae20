"""Finite truncations of the category of free presentations of a fixed group.

Objects are ``FreePresentation``s of one base group ``A``; a morphism is a
matrix ``F -> F'`` sending ``H`` into ``H'`` and inducing the identity on
``A``.  Functors on this category are the quotients ``T(F)/T(H)`` for
``T`` a tensor, exterior or divided power, and ``A_0 ⊗ F^{⊗k}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import fgab
from .dlim import AbDiagram, CategoryError, FinCategory, Morphism, lim
from .fgab import AbHom, FgAbGroup, free_group, parse_group
from .polyfunctors import Kind, kind_map, tensor_power_map
from .presentation import FreePresentation, canonical_presentation, same_base, stabilize
from .torlab import check_size, doubled
from .zmat import IntMatrix, hstack, kronecker, vstack

__all__ = [
    "ExtMorphism", "FunctorTag", "canonical_presentation", "stabilize", "lift",
    "coproduct", "mediating", "f1f2_pair", "evaluate", "evaluate_on",
    "Truncation", "build_truncation", "truncated_diagram", "coproduct_vanishing_probe",
    "coproduct_monomorphism",
]


class QuotientMismatch(ValueError):
    pass


class ExtMorphism:
    def __init__(self, source: FreePresentation, target: FreePresentation, matrix: IntMatrix,
                 check: bool = True):
        if matrix.shape != (target.rank, source.rank):
            raise ValueError(f"matrix shape {matrix.shape}, expected {(target.rank, source.rank)}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            self.validate()

    def validate(self) -> None:
        if not same_base(self.source, self.target):
            raise QuotientMismatch("source and target present different groups")
        image = self.matrix @ self.source.inclusion
        for j, col in enumerate(image.to_columns()):
            if not self.target.H.contains(col):
                raise ValueError(f"basis vector {j} of H is not sent into H'")
        A = self.source.base
        diff = self.target.projection @ self.matrix - self.source.projection
        for j, col in enumerate(diff.to_columns()):
            if not A.is_zero_vector(col):
                raise ValueError(f"induced map on the base group moves generator {j}")

    def __matmul__(self, other: "ExtMorphism") -> "ExtMorphism":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtMorphism) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"ExtMorphism({self.matrix.to_rows()})"


def compose(g: ExtMorphism, f: ExtMorphism) -> ExtMorphism:
    if f.target is not g.source:
        raise ValueError("morphisms are not composable")
    return ExtMorphism(f.source, g.target, g.matrix @ f.matrix, check=False)


def identity(p: FreePresentation) -> ExtMorphism:
    return ExtMorphism(p, p, IntMatrix.identity(p.rank), check=False)


def _require_same(p1: FreePresentation, p2: FreePresentation) -> None:
    if not same_base(p1, p2):
        raise QuotientMismatch("presentations have different quotient groups")


def lift(p1: FreePresentation, p2: FreePresentation) -> ExtMorphism:
    """Send each basis vector of ``F1`` to the canonical preimage of its image in ``A``."""
    _require_same(p1, p2)
    pi2 = p2.pi()
    cols = []
    for col in p1.projection.to_columns():
        pre = pi2.preimage(col)
        if pre is None:
            raise QuotientMismatch("target projection does not reach an element of A")
        cols.append(pre)
    return ExtMorphism(p1, p2, IntMatrix.from_columns(cols, p2.rank))


def coproduct(p1: FreePresentation, p2: FreePresentation):
    """``F1 ⊕ F2`` with projection ``(x, y) ↦ π1 x + π2 y`` and the block inclusions."""
    _require_same(p1, p2)
    P = FreePresentation(p1.base, hstack(p1.projection, p2.projection))
    n1, n2 = p1.rank, p2.rank
    i1 = vstack(IntMatrix.identity(n1), IntMatrix.zeros(n2, n1))
    i2 = vstack(IntMatrix.zeros(n1, n2), IntMatrix.identity(n2))
    return P, ExtMorphism(p1, P, i1), ExtMorphism(p2, P, i2)


def mediating(cop: FreePresentation, g1: ExtMorphism, g2: ExtMorphism) -> ExtMorphism:
    """The unique ``h`` out of a coproduct with ``h∘ι1 = g1`` and ``h∘ι2 = g2``.

    Uniqueness holds on matrices: the columns of ``h`` are forced.
    """
    if g1.target is not g2.target:
        raise ValueError("cone legs have different targets")
    return ExtMorphism(cop, g1.target, hstack(g1.matrix, g2.matrix))


def f1f2_pair(p: FreePresentation):
    """Target ``F⊕F`` (projection through the second summand) with ``f1 = (0, g)``, ``f2 = (g, g)``."""
    target, m1, m2 = doubled(p)
    return target, ExtMorphism(p, target, m1), ExtMorphism(p, target, m2)


# ---------------------------------------------------------------------------
# functors


_KINDS = {
    "tensor_quot": Kind.TENSOR,
    "ext_quot": Kind.EXT,
    "gamma_quot": Kind.GAMMA,
}


@dataclass(frozen=True)
class FunctorTag:
    kind: str
    n: int
    base: Optional[FgAbGroup] = None  # A_0 for tensor_with_free; n is then k

    def __post_init__(self):
        if self.kind == "tensor_with_free":
            if self.n < 0:
                raise ValueError("k must be >= 0")
            if self.base is None:
                raise ValueError("tensor_with_free needs a coefficient group")
        elif self.kind in _KINDS:
            if self.n < 1:
                raise ValueError("n must be >= 1")
        else:
            raise ValueError(f"unknown functor kind {self.kind!r}")

    @classmethod
    def from_json(cls, obj: dict, default_base: Optional[FgAbGroup] = None) -> "FunctorTag":
        kind = obj["kind"]
        if kind == "tensor_with_free":
            base = parse_group(obj["base"]) if "base" in obj else default_base
            return cls(kind, int(obj.get("k", obj.get("n", 1))), base)
        return cls(kind, int(obj["n"]))

    def label(self) -> str:
        if self.kind == "tensor_with_free":
            return f"{fgab.format_group(self.base)} ⊗ F^{self.n}"
        return f"{self.kind}({self.n})"


def _numerator_map(tag: FunctorTag, M: IntMatrix) -> IntMatrix:
    return kind_map(_KINDS[tag.kind], M, tag.n)


def evaluate(tag: FunctorTag, p: FreePresentation) -> FgAbGroup:
    N = p.rank
    if tag.kind == "tensor_with_free":
        size = N ** tag.n
        check_size(tag.base.ngens * size)
        return fgab.tensor(tag.base, free_group(size))
    if tag.kind == "tensor_quot":
        check_size(N ** tag.n)
    B = p.inclusion
    K = _numerator_map(tag, B)
    return FgAbGroup(K.rows, K)


def evaluate_on(tag: FunctorTag, m: ExtMorphism, source: Optional[FgAbGroup] = None,
                target: Optional[FgAbGroup] = None) -> AbHom:
    """Induced map on functor values; ``AbHom`` checks that it descends to the quotients."""
    src = source or evaluate(tag, m.source)
    tgt = target or evaluate(tag, m.target)
    if tag.kind == "tensor_with_free":
        M = kronecker(IntMatrix.identity(tag.base.ngens), tensor_power_map(m.matrix, tag.n))
    else:
        M = _numerator_map(tag, m.matrix)
    return AbHom(src, tgt, M)


# ---------------------------------------------------------------------------
# truncations


@dataclass
class Truncation:
    base: FgAbGroup
    presentations: list[FreePresentation]
    names: list[str]
    category: FinCategory
    morphisms: dict[str, ExtMorphism]
    aliases: dict[str, str]

    def obj(self, i: int) -> str:
        return self.names[i]


_CALL = re.compile(r"^\s*(\w+)\s*(?:\(\s*([\d\s,]*)\))?\s*$")


def _parse_call(text: str):
    m = _CALL.match(text)
    if not m:
        raise ValueError(f"cannot parse recipe entry {text!r}")
    args = [int(x) for x in m.group(2).split(",")] if m.group(2) else []
    return m.group(1), args


def build_truncation(A: FgAbGroup, recipe: dict, bound: int = 200) -> Truncation:
    """Objects and named morphisms from a recipe, closed under composition.

    Composites are identified when their matrices agree, so the result is a
    genuine subcategory of the extension category.
    """
    pres: list[FreePresentation] = []
    coprods: dict[int, tuple[int, int, ExtMorphism, ExtMorphism]] = {}
    doubles: dict[int, tuple[int, ExtMorphism, ExtMorphism]] = {}
    for entry in recipe.get("objects", ["canonical"]):
        if entry == "canonical":
            pres.append(canonical_presentation(A))
        elif isinstance(entry, dict) and "stabilize" in entry:
            src = pres[entry["of"]] if "of" in entry else canonical_presentation(A)
            pres.append(stabilize(src, int(entry["stabilize"])))
        elif isinstance(entry, str):
            name, args = _parse_call(entry)
            if name == "coproduct" and len(args) == 2:
                P, i1, i2 = coproduct(pres[args[0]], pres[args[1]])
                coprods[len(pres)] = (args[0], args[1], i1, i2)
                pres.append(P)
            elif name == "double" and len(args) == 1:
                T, f1, f2 = f1f2_pair(pres[args[0]])
                doubles[len(pres)] = (args[0], f1, f2)
                pres.append(T)
            else:
                raise ValueError(f"unknown object recipe {entry!r}")
        else:
            raise ValueError(f"unknown object recipe {entry!r}")
    names = [f"o{i}" for i in range(len(pres))]
    where = {id(p): i for i, p in enumerate(pres)}

    def first(kind_map_, src=None):
        for k, v in kind_map_.items():
            if src is None or v[0] == src:
                return k, v
        raise ValueError("recipe names a morphism whose object is missing")

    gens: list[tuple[str, ExtMorphism]] = []
    for entry in recipe.get("morphisms", []):
        name, args = _parse_call(entry)
        if name == "lift" and len(args) == 2:
            gens.append((entry, lift(pres[args[0]], pres[args[1]])))
        elif name in ("iota1", "iota2"):
            if args:
                c = args[0]
                if c not in coprods:
                    raise ValueError(f"object {c} is not a coproduct")
                data = coprods[c]
            else:
                _, data = first(coprods)
            gens.append((entry, data[2] if name == "iota1" else data[3]))
        elif name in ("f1", "f2") and len(args) == 1:
            _, data = first(doubles, args[0])
            gens.append((entry, data[1] if name == "f1" else data[2]))
        else:
            raise ValueError(f"unknown morphism recipe {entry!r}")

    def key(m: ExtMorphism):
        return (where[id(m.source)], where[id(m.target)], m.matrix)

    found: dict = {}
    mors: dict[str, ExtMorphism] = {}
    aliases = {}
    for i, p in enumerate(pres):
        found[key(identity(p))] = f"id_{names[i]}"
        mors[f"id_{names[i]}"] = identity(p)
    queue = []
    for name, m in gens:
        k = key(m)
        if k in found:
            aliases[name] = found[k]
            continue
        found[k] = name
        mors[name] = m
        queue.append(name)
    while queue:
        fname = queue.pop(0)
        f = mors[fname]
        for gname, g in gens:
            if g.source is not f.target:
                continue
            h = compose(g, f)
            k = key(h)
            if k not in found:
                hname = f"{gname}*{fname}"
                found[k] = hname
                mors[hname] = h
                queue.append(hname)
                if len(mors) > bound:
                    raise CategoryError(f"truncation exceeds {bound} morphisms")
    table = {}
    for fname, f in mors.items():
        for gname, g in mors.items():
            if g.source is f.target:
                table[(gname, fname)] = found[key(compose(g, f))]
    morphisms = [Morphism(n, names[where[id(m.source)]], names[where[id(m.target)]])
                 for n, m in mors.items()]
    C = FinCategory(names, morphisms, {names[i]: f"id_{names[i]}" for i in range(len(pres))}, table)
    return Truncation(A, pres, names, C, mors, aliases)


def truncated_diagram(A: FgAbGroup, tag: FunctorTag, recipe: dict, bound: int = 200,
                      truncation: Optional[Truncation] = None) -> AbDiagram:
    T = truncation or build_truncation(A, recipe, bound)
    values = {n: evaluate(tag, p) for n, p in zip(T.names, T.presentations)}
    homs = {}
    for name, m in T.morphisms.items():
        s = T.names[T.presentations.index(m.source)]
        t = T.names[T.presentations.index(m.target)]
        homs[name] = evaluate_on(tag, m, values[s], values[t])
    return AbDiagram(T.category, values, homs)


def recipe_functor(recipe: dict, A: FgAbGroup) -> FunctorTag:
    return FunctorTag.from_json(recipe["functor"], A)


# ---------------------------------------------------------------------------
# coproduct vanishing probe


@dataclass
class ProbeReport:
    applicable: bool
    hypothesis_holds: bool
    component_vanishes: Optional[bool]
    object: Optional[str]

    @property
    def status(self) -> str:
        if not self.applicable:
            return "not applicable"
        if not self.hypothesis_holds:
            return "not applicable"
        return "vanishes" if self.component_vanishes else "does not vanish"


def coproduct_vanishing_probe(A: FgAbGroup, tag: FunctorTag, recipe: dict) -> ProbeReport:
    """Check that ``(F(ι1), F(ι2)) : F(p)⊕F(p) -> F(p⋆p)`` is injective, then that ``x_p = 0``."""
    T = build_truncation(A, recipe)
    D = truncated_diagram(A, tag, recipe, truncation=T)
    # find a self-coproduct with both inclusions present
    cand = None
    for name, m in T.morphisms.items():
        if T.category.is_identity(name):
            continue
        for name2, m2 in T.morphisms.items():
            if name2 <= name or m2.source is not m.source or m2.target is not m.target:
                continue
            p, c = m.source, m.target
            n = p.rank
            ia = vstack(IntMatrix.identity(n), IntMatrix.zeros(n, n))
            ib = vstack(IntMatrix.zeros(n, n), IntMatrix.identity(n))
            if c.rank == 2 * n and {m.matrix, m2.matrix} == {ia, ib}:
                cand = (name, name2, m.source)
                break
        if cand:
            break
    if cand is None:
        return ProbeReport(False, False, None, None)
    a, b, p = cand
    obj = T.names[T.presentations.index(p)]
    Fp = D.objects[obj]
    cobj = D.category.dst(a)
    S, _, projs = fgab.direct_sum([Fp, Fp])
    block = AbHom(S, D.objects[cobj], hstack(D.morphisms[a].matrix, D.morphisms[b].matrix))
    if not block.is_injective():
        return ProbeReport(True, False, None, obj)
    _, proj = lim(D)
    return ProbeReport(True, True, proj[obj].is_zero(), obj)


def coproduct_monomorphism(tag: FunctorTag, p1: FreePresentation, p2: FreePresentation) -> bool:
    """Is ``(F(ι1), F(ι2)) : F(p1)⊕F(p2) -> F(p1⋆p2)`` injective?"""
    P, i1, i2 = coproduct(p1, p2)
    G1, G2, T = evaluate(tag, p1), evaluate(tag, p2), evaluate(tag, P)
    S, _, _ = fgab.direct_sum([G1, G2])
    M = hstack(evaluate_on(tag, i1, G1, T).matrix, evaluate_on(tag, i2, G2, T).matrix)
    return AbHom(S, T, M).is_injective()
