import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from extlim import dlim, fgab, samples
from extlim.acceptance import parallel_pair_fixture
from extlim.fgab import AbHom, format_group, free_group, is_isomorphic, parse_group
from extlim.zmat import IntMatrix

M = IntMatrix.from_rows
FINITE_ZOO = ["point", "arrow", "parallel", "chain3", "span", "cospan", "fork",
              "coequalized", "involution", "idempotent", "arrow_idem"]


def elements(G):
    """All elements of a finite group as normal forms."""
    n = G.order()
    return sorted({G.normal_form(v) for v in itertools.product(range(n), repeat=G.ngens)})


def brute_force_lim_order(D):
    C = D.category
    objs = list(C.objects)
    count = 0
    for xs in itertools.product(*(elements(D.objects[o]) for o in objs)):
        val = dict(zip(objs, xs))
        if all(D.objects[C.dst(a)].normal_form(D.morphisms[a].matrix.apply(list(val[C.src(a)])))
               == val[C.dst(a)] for a in C.non_identity()):
            count += 1
    return count


def involution_diagram(matrix):
    C = samples.zoo_by_name("involution").build()
    G = free_group(matrix.rows)
    return dlim.AbDiagram(C, {"a": G}, {"s": AbHom(G, G, matrix)})


# categories

def test_category_sizes():
    assert len(dlim.fincat_build(["a"], [])) == 1
    assert len(dlim.fincat_build(["a", "b"], [("f", "a", "b"), ("g", "a", "b")])) == 4
    sq = dlim.fincat_build(["a", "b", "c", "d"],
                           [("f", "a", "b"), ("g", "a", "c"), ("h", "b", "d"), ("k", "c", "d")],
                           [(["h", "f"], ["k", "g"])])
    assert len(sq) == 9
    sq.validate()


def test_relations_and_composites():
    C = samples.zoo_by_name("involution").build()
    assert len(C) == 2
    assert C.compose("s", "s") == "id_a"
    E = samples.zoo_by_name("idempotent").build()
    assert E.compose("e", "e") == "e"
    ch = samples.zoo_by_name("chain3").build()
    assert ch.compose("g", "f") == "g*f"
    assert ch.quasi_initial_objects() == ["a"]


def test_infinite_category_rejected():
    with pytest.raises(dlim.CategoryError):
        dlim.fincat_build(["a"], [("s", "a", "a")], bound=20)


@pytest.mark.parametrize("name", FINITE_ZOO)
def test_zoo_categories_are_valid(name):
    samples.zoo_by_name(name).build().validate()


def test_chain_enumeration():
    C = samples.zoo_by_name("chain3").build()
    assert dlim.chains(C, 0) == [("a",), ("b",), ("c",)]
    assert dlim.chains(C, 2) == [("g", "f")]
    assert len(dlim.chains(C, 2, normalized=False)) > 1
    P = samples.zoo_by_name("parallel").build()
    assert dlim.chains(P, 2) == []


# diagrams and limits

def test_functoriality_enforced():
    C = samples.zoo_by_name("involution").build()
    Z = free_group(1)
    with pytest.raises(dlim.DiagramError, match="functoriality"):
        dlim.AbDiagram(C, {"a": Z}, {"s": AbHom(Z, Z, M([[2]]))})


def test_lim_examples():
    C = samples.zoo_by_name("fork").build()
    G = parse_group("Z+Z/6")
    assert is_isomorphic(dlim.lim(dlim.constant_diagram(C, G))[0], G)
    D = parallel_pair_fixture()
    assert dlim.lim(D)[0].is_trivial()
    assert format_group(dlim.lim_n(D, 1)) == "Z/2"
    assert dlim.lim_n(D, 2).is_trivial()


@pytest.mark.parametrize("name", ["arrow", "chain3", "span", "arrow_idem"])
@pytest.mark.parametrize("seed", range(4))
def test_initial_object_kills_higher_limits(name, seed):
    D = samples.random_diagram(random.Random(seed), samples.zoo_by_name(name))
    C = D.category
    c0 = C.quasi_initial_objects()[0]
    L, proj = dlim.lim(D)
    if all(len(C.hom(c0, c)) == 1 for c in C.objects):
        assert is_isomorphic(L, D.objects[c0])
        assert dlim.lim_n(D, 1).is_trivial() and dlim.lim_n(D, 2).is_trivial()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_parallel_pair_is_kernel_and_cokernel_of_difference(seed):
    rng = random.Random(seed)
    G, H = samples.random_group(rng), samples.random_group(rng)
    f, g = samples.random_hom(rng, G, H), samples.random_hom(rng, G, H)
    C = samples.zoo_by_name("parallel").build()
    D = dlim.AbDiagram(C, {"a": G, "b": H}, {"f": f, "g": g})
    assert is_isomorphic(dlim.lim_n(D, 0), fgab.kernel(f - g)[0])
    assert is_isomorphic(dlim.lim_n(D, 1), fgab.cokernel(f - g)[0])
    assert dlim.lim_n(D, 2).is_trivial()


def finite_diagrams(count=25, max_tuples=5000):
    out, seed = [], 0
    while len(out) < count:
        rng = random.Random(seed)
        D = samples.random_diagram(rng, samples.zoo_by_name(FINITE_ZOO[seed % len(FINITE_ZOO)]))
        seed += 1
        orders = [D.objects[x].order() for x in D.category.objects]
        if None in orders:
            continue
        total = 1
        for o in orders:
            total *= o
        if total <= max_tuples:
            out.append(D)
    return out


@pytest.mark.parametrize("D", finite_diagrams())
def test_lim_matches_brute_force_on_finite_diagrams(D):
    assert dlim.lim(D)[0].order() == brute_force_lim_order(D)


def test_group_cohomology_of_order_two():
    triv = involution_diagram(M([[1]]))
    assert [format_group(dlim.lim_n(triv, n)) for n in range(3)] == ["Z", "0", "Z/2"]
    sign = involution_diagram(M([[-1]]))
    assert [format_group(dlim.lim_n(sign, n)) for n in range(3)] == ["0", "Z/2", "0"]
    regular = involution_diagram(M([[0, 1], [1, 0]]))
    assert [format_group(dlim.lim_n(regular, n)) for n in range(3)] == ["Z", "0", "0"]


@pytest.mark.parametrize("seed", range(10))
def test_normalized_and_full_complexes_agree(seed):
    zoo = samples.category_zoo()
    D = samples.random_diagram(random.Random(seed), zoo[seed % len(zoo)])
    for n in range(3):
        assert is_isomorphic(dlim.lim_n(D, n), dlim.lim_n(D, n, normalized=False))


def test_degree_out_of_range():
    with pytest.raises(ValueError):
        dlim.lim_n(parallel_pair_fixture(), 3)


# exact sequences

def test_six_term_on_constant_coefficients():
    C = samples.zoo_by_name("parallel").build()
    Z, Z2 = free_group(1), parse_group("Z/2")
    D1, D2, D3 = (dlim.constant_diagram(C, G) for G in (Z, Z, Z2))
    eta = {x: AbHom(Z, Z, M([[2]])) for x in C.objects}
    eps = {x: AbHom(Z, Z2, M([[1]])) for x in C.objects}
    rep = dlim.six_term_check(D1, D2, D3, eta, eps)
    assert rep.ok
    assert [format_group(G) for G in rep.groups] == ["Z", "Z", "Z/2", "Z", "Z", "Z/2"]


def test_split_sequence_has_zero_connecting_map():
    rng = random.Random(3)
    spec = samples.zoo_by_name("fork")
    s = samples.split_sequence(samples.random_diagram(rng, spec), samples.random_diagram(rng, spec))
    rep = dlim.six_term_check(s.D1, s.D2, s.D3, s.eta, s.eps)
    assert rep.ok and rep.maps[2].is_zero()


def test_identity_sequence():
    D = parallel_pair_fixture()
    C = D.category
    O = fgab.FgAbGroup(0)
    D3 = dlim.constant_diagram(C, O)
    eta = {x: fgab.identity(D.objects[x]) for x in C.objects}
    eps = {x: fgab.zero_hom(D.objects[x], O) for x in C.objects}
    rep = dlim.six_term_check(D, D, D3, eta, eps)
    assert rep.ok
    assert rep.maps[0].is_injective() and rep.maps[0].is_surjective()
    assert rep.maps[3].is_injective() and rep.maps[3].is_surjective()


@pytest.mark.parametrize("seed", range(15))
def test_random_six_term_sequences(seed):
    s = samples.random_ses(random.Random(seed))
    assert dlim.six_term_check(s.D1, s.D2, s.D3, s.eta, s.eps).ok


def test_non_exact_input_rejected():
    D = parallel_pair_fixture()
    C = D.category
    zero = {x: fgab.zero_hom(D.objects[x], D.objects[x]) for x in C.objects}
    with pytest.raises(ValueError):
        dlim.six_term_check(D, D, D, zero, zero)


# quasi-initial objects and coequalizers

def test_embedding_examples():
    D = samples.random_diagram(random.Random(1), samples.zoo_by_name("chain3"))
    rep = dlim.quasi_initial_embedding(D)
    assert rep.injective and rep.image_is_equalizer
    assert rep.equalizer_lattice.rank == D.objects[rep.base].ngens
    rep = dlim.quasi_initial_embedding(parallel_pair_fixture())
    assert rep.injective and rep.image_is_equalizer and rep.equalizer_lattice.rank == 0
    with pytest.raises(ValueError):
        dlim.quasi_initial_embedding(samples.random_diagram(random.Random(0), samples.zoo_by_name("cospan")))


def test_coequalizer_hypothesis():
    assert not dlim.coequalizer_vanishing_check(parallel_pair_fixture())
    C = samples.zoo_by_name("point").build()
    assert dlim.coequalizer_vanishing_check(dlim.constant_diagram(C, parse_group("Z/3")))
    for D in samples.coequalizer_instances(random.Random(5), 6):
        assert dlim.coequalizer_vanishing_check(D)
        assert dlim.lim_n(D, 1).is_trivial()


# obstruction cocycle

@pytest.mark.parametrize("a, b", samples.witness_samples())
def test_obstruction_is_cocycle(a, b):
    A, B = samples.parse_pair(a, b)
    w = samples.tor_witness(A, B)
    r = dlim.obstruction_cocycle(*w.args())
    assert all(r.is_cocycle)
    if w.H2.ngens == 0:
        assert all(not any(v) for v in r.cocycles)
    two = dlim.obstruction_cocycle(*w.args(), formula="two-term")
    assert two.cocycles == r.cocycles


def test_obstruction_section_independence():
    A, B = samples.parse_pair("Z/2", "Z/2")
    w = samples.tor_witness(A, B)
    r = dlim.obstruction_cocycle(*w.args())

    def shift(x):
        n = w.F1.objects[x].ngens
        return [1] + [0] * (n - 1) if n else []

    r2 = dlim.obstruction_cocycle(*w.args(), s_shift=shift)
    for u, v in zip(r.cocycles, r2.cocycles):
        assert dlim.is_coboundary(r.data, [x - y for x, y in zip(u, v)])


@pytest.mark.parametrize("H1", ["Z/2", "Z+Z/4"])
@pytest.mark.parametrize("seed", range(3))
def test_split_witness_class_vanishes(H1, seed):
    A, B = samples.parse_pair("Z+Z/3", "Z/6")
    ws = samples.split_witness(A, B, parse_group(H1), random.Random(seed))
    r = dlim.obstruction_cocycle(*ws.args())
    assert all(r.is_cocycle) and all(r.class_is_zero)


def test_bad_witness_rejected():
    A, B = samples.parse_pair("Z/2", "Z/2")
    C, H2, F1, F2, H1, wit = samples.tor_witness(A, B).args()
    x = next(o for o in C.objects if not wit[o].phi.is_zero())
    broken = dict(wit)
    broken[x] = dlim.FourTermWitness(wit[x].i, fgab.zero_hom(wit[x].phi.source, wit[x].phi.target), wit[x].p)
    with pytest.raises(ValueError):
        dlim.obstruction_cocycle(C, H2, F1, F2, H1, broken)
    with pytest.raises(ValueError):
        dlim.obstruction_cocycle(C, H2, F1, F2, H1, wit, formula="other")


# file format

def test_load_diagram():
    spec = {"objects": [{"id": "a", "group": "Z"}, {"id": "b", "group": "Z"}],
            "morphisms": [{"id": "f", "src": "a", "dst": "b", "matrix": [[1]]},
                          {"id": "g", "src": "a", "dst": "b", "matrix": [[-1]]}]}
    D = dlim.load_diagram(spec)
    assert format_group(dlim.lim_n(D, 1)) == "Z/2"
    bad = {"objects": [{"id": "a", "group": "Z"}],
           "morphisms": [{"id": "s", "src": "a", "dst": "a", "matrix": [[2]]}],
           "compositions": [["s", "s", "id_a"]]}
    with pytest.raises(dlim.DiagramError, match="functoriality"):
        dlim.load_diagram(bad)
    with pytest.raises(dlim.DiagramError):
        dlim.load_diagram({"objects": [{"id": "a", "group": "Z"}],
                           "morphisms": [{"id": "f", "src": "a", "dst": "z"}]})
