import pytest

from extlim import dlim, fextcat, fgab, torlab
from extlim.fextcat import ExtMorphism, FunctorTag, QuotientMismatch
from extlim.fgab import format_group, is_isomorphic, parse_group
from extlim.presentation import canonical_presentation, stabilize
from extlim.samples import TOR_SAMPLES
from extlim.zmat import IntMatrix, same_lattice

M = IntMatrix.from_rows


def pres(expr):
    return canonical_presentation(parse_group(expr))


# presentations and morphisms

def test_canonical_and_stabilized_presentations():
    p = pres("Z/2")
    assert p.rank == 1 and p.inclusion == M([[2]])
    q = stabilize(p, 1)
    assert q.rank == 2 and same_lattice(q.H, M([[2, 0], [0, 1]]))
    z = pres("Z")
    assert z.rank == 1 and z.h_rank == 0


def test_lift_examples():
    p = pres("Z/6")
    assert fextcat.lift(p, p).matrix == IntMatrix.identity(1)
    q = stabilize(p, 2)
    assert fextcat.lift(p, q).matrix == M([[1], [0], [0]])
    r = stabilize(p, 1)
    m = fextcat.lift(q, r)
    assert fextcat.compose(fextcat.lift(r, q), m).source is q


def test_lift_rejects_different_groups():
    with pytest.raises(QuotientMismatch):
        fextcat.lift(pres("Z/2"), pres("Z/3"))


def test_morphism_validation():
    p = pres("Z/4")
    with pytest.raises(ValueError):
        ExtMorphism(p, p, M([[2]]))   # induces ×2 on A, not the identity
    ExtMorphism(p, p, M([[5]]))       # 5 ≡ 1 mod 4


def test_coproduct_examples():
    p = pres("Z/2")
    P, i1, i2 = fextcat.coproduct(p, p)
    assert P.rank == 2 and same_lattice(P.H, M([[2, 1], [0, -1]]))
    z = pres("Z")
    Pz, _, _ = fextcat.coproduct(z, z)
    assert same_lattice(Pz.H, M([[1], [-1]]))
    for i in (i1, i2):
        assert i.matrix.shape == (2, 1)
    h = fextcat.mediating(P, fextcat.identity(p), fextcat.identity(p))
    assert fextcat.compose(h, i1) == fextcat.identity(p)
    assert fextcat.compose(h, i2) == fextcat.identity(p)


def test_doubling_maps():
    p = pres("Z/2")
    target, f1, f2 = fextcat.f1f2_pair(p)
    assert f1.matrix == M([[0], [1]]) and f2.matrix == M([[1], [1]])
    # both induce the identity on A: ExtMorphism validation already checked it
    assert target.rank == 2 and same_lattice(target.H, M([[1, 0], [0, 2]]))


# functor evaluation

def test_evaluate_examples():
    p = pres("Z/2")
    assert format_group(fextcat.evaluate(FunctorTag("tensor_quot", 2), p)) == "Z/4"
    assert format_group(fextcat.evaluate(FunctorTag("gamma_quot", 2), p)) == "Z/4"
    assert fextcat.evaluate(FunctorTag("ext_quot", 2), p).is_trivial()
    Z3 = parse_group("Z/3")
    assert format_group(fextcat.evaluate(FunctorTag("tensor_with_free", 1, Z3), pres("Z"))) == "Z/3"


def test_functor_tags():
    with pytest.raises(ValueError):
        FunctorTag("tensor_quot", 0)
    with pytest.raises(ValueError):
        FunctorTag("nope", 2)
    with pytest.raises(ValueError):
        FunctorTag("tensor_with_free", 1)
    t = FunctorTag.from_json({"kind": "tensor_with_free", "k": 2, "base": "Z/4"})
    assert t.n == 2 and format_group(t.base) == "Z/4"


@pytest.mark.parametrize("kind", ["tensor_quot", "gamma_quot", "ext_quot"])
def test_induced_maps_descend(kind):
    p = pres("Z/2+Z/4")
    q = stabilize(p, 1)
    tag = FunctorTag(kind, 2)
    for m in (fextcat.lift(p, q), fextcat.lift(q, p)):
        fextcat.evaluate_on(tag, m)


# truncations

def test_equalizer_truncation_gives_tor():
    recipe = {"objects": ["canonical", "double(0)"], "morphisms": ["f1(0)", "f2(0)"]}
    for expr in TOR_SAMPLES:
        A = parse_group(expr)
        for n in (2, 3):
            D = fextcat.truncated_diagram(A, FunctorTag("tensor_quot", n), recipe)
            L, proj = dlim.lim(D)
            assert is_isomorphic(L, torlab.tor_bracket(A, n))
            num = torlab.bracket_numerator(canonical_presentation(A), n)
            assert fgab.image_lattice(proj["o0"]).basis == num.basis
            rep = dlim.quasi_initial_embedding(D)
            assert rep.injective and is_isomorphic(
                fgab.image(rep.projection)[0], torlab.tor_bracket(A, n))


def test_truncation_closure():
    A = parse_group("Z/4")
    recipe = {"objects": ["canonical", {"stabilize": 1}], "morphisms": ["lift(0,1)", "lift(1,0)"]}
    T = fextcat.build_truncation(A, recipe)
    T.category.validate()
    assert T.names == ["o0", "o1"]
    # lift(1,0)∘lift(0,1) is the identity of o0; the other composite is a new idempotent
    assert len(T.category) == 5


def test_truncation_bad_entries():
    A = parse_group("Z/2")
    with pytest.raises(ValueError):
        fextcat.build_truncation(A, {"objects": ["canonical"], "morphisms": ["frobnicate(0)"]})
    with pytest.raises((ValueError, IndexError)):
        fextcat.build_truncation(A, {"objects": ["canonical"], "morphisms": ["lift(0,3)"]})


@pytest.mark.parametrize("expr", TOR_SAMPLES)
def test_coproduct_monomorphism(expr):
    A = parse_group(expr)
    p = canonical_presentation(A)
    q = stabilize(p, 1)
    for k in (0, 1, 2):
        tag = FunctorTag("tensor_with_free", k, A)
        for x, y in ((p, p), (p, q)):
            assert fextcat.coproduct_monomorphism(tag, x, y) == (k >= 1)


def test_probe_examples():
    recipe = {"objects": ["canonical", "coproduct(0,0)"], "morphisms": ["iota1", "iota2"]}
    A = parse_group("Z/4")
    rep = fextcat.coproduct_vanishing_probe(A, FunctorTag("tensor_with_free", 1, A), recipe)
    assert rep.hypothesis_holds and rep.component_vanishes and rep.status == "vanishes"
    rep = fextcat.coproduct_vanishing_probe(A, FunctorTag("tensor_with_free", 0, A), recipe)
    assert not rep.hypothesis_holds and rep.status == "not applicable"
    O = parse_group("0")
    D = fextcat.truncated_diagram(O, FunctorTag("tensor_with_free", 1, O), recipe)
    assert all(D.objects[x].is_trivial() for x in D.category.objects)
    assert dlim.lim(D)[0].is_trivial()


def test_probe_without_coproduct():
    A = parse_group("Z/2")
    rep = fextcat.coproduct_vanishing_probe(
        A, FunctorTag("tensor_with_free", 1, A), {"objects": ["canonical"], "morphisms": []})
    assert not rep.applicable and rep.status == "not applicable"
