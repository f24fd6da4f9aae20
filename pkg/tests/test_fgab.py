import random

import pytest
from hypothesis import given, settings, strategies as st

from extlim.fgab import (
    AbHom, ChainComplexZ, GroupParseError, IllDefinedMap, NotASubgroup, concentrated,
    cokernel, compose, cyclic, direct_sum, equalizer, format_group, free_group, from_invariants,
    group_from_relations, group_json, homology_at, identity, image, invariant_factors,
    is_isomorphic, kernel, parse_group, subquotient, tensor, tensor_complexes,
)
from extlim.samples import random_group, random_hom
from extlim.zmat import IntMatrix

M = IntMatrix.from_rows


def mult(G, k):
    return AbHom(G, G, IntMatrix.identity(G.ngens).scale(k))


def gcd_oracle_tensor(G1, G2):
    """Invariants of G1 ⊗ G2 from bilinearity and Z/a ⊗ Z/b = Z/gcd(a,b)."""
    from math import gcd
    r1, t1 = invariant_factors(G1)
    r2, t2 = invariant_factors(G2)
    tors = [gcd(a, b) for a in t1 for b in t2] + t1 * r2 + t2 * r1
    return from_invariants(r1 * r2, [t for t in tors if t > 1])


# construction and invariants

def test_group_from_relations_examples():
    assert invariant_factors(group_from_relations(2, IntMatrix.diag([0, 4]))) == (1, [4])
    assert invariant_factors(group_from_relations(1, IntMatrix.zeros(1, 0))) == (1, [])
    assert invariant_factors(group_from_relations(2, IntMatrix.diag([2, 3]))) == (0, [6])


def test_invariant_factor_examples():
    assert invariant_factors(parse_group("Z/4+Z/6")) == (0, [2, 12])
    assert invariant_factors(parse_group("Z+Z")) == (2, [])
    assert is_isomorphic(parse_group("Z/2+Z/12"), parse_group("Z/4+Z/6"))
    assert not is_isomorphic(parse_group("Z/4"), parse_group("Z/2+Z/2"))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 3), st.lists(st.integers(2, 30), max_size=4))
def test_invariants_divisibility_chain(r, tors):
    G = from_invariants(r, tors)
    fr, f = invariant_factors(G)
    assert fr == r
    assert all(b % a == 0 for a, b in zip(f, f[1:]))
    prod = 1
    for t in tors:
        prod *= t
    assert G.order() == (prod if r == 0 else None)


# homomorphisms

def test_hom_well_definedness():
    Z4, Z2 = cyclic(4), cyclic(2)
    AbHom(Z4, Z4, M([[2]]))
    AbHom(Z4, Z2, M([[1]]))
    with pytest.raises(IllDefinedMap) as exc:
        AbHom(Z2, Z4, M([[1]]))
    assert exc.value.relator == 0


def test_kernel_image_cokernel_examples():
    Z4 = cyclic(4)
    assert format_group(kernel(mult(Z4, 2))[0]) == "Z/2"
    assert format_group(image(mult(Z4, 2))[0]) == "Z/2"
    assert format_group(cokernel(mult(free_group(1), 2))[0]) == "Z/2"


def test_equalizer_examples():
    Z, Z4 = free_group(1), cyclic(4)
    assert is_isomorphic(equalizer(identity(Z4), identity(Z4))[0], Z4)
    assert equalizer(identity(Z), mult(Z, -1))[0].is_trivial()
    assert format_group(equalizer(identity(Z4), mult(Z4, -1))[0]) == "Z/2"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_first_isomorphism_theorem(seed):
    rng = random.Random(seed)
    G, H = random_group(rng), random_group(rng)
    h = random_hom(rng, G, H)
    K, inc = kernel(h)
    Im, _ = image(h)
    Q, q = cokernel(inc)
    assert is_isomorphic(Q, Im)
    assert compose(h, inc).is_zero()
    C, c = cokernel(h)
    assert compose(c, h).is_zero()


def test_direct_sum_and_tensor():
    S, inj, proj = direct_sum([cyclic(2), cyclic(3)])
    assert format_group(S) == "Z/6"
    for i, p in zip(inj, proj):
        assert compose(p, i).equals(identity(p.target))
    assert format_group(tensor(cyclic(4), cyclic(6))) == "Z/2"
    G = parse_group("Z/2+Z/3")
    assert is_isomorphic(tensor(free_group(1), G), G)
    assert is_isomorphic(tensor(parse_group("Z+Z/2"), cyclic(4)), parse_group("Z/4+Z/2"))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_tensor_matches_gcd_oracle(seed):
    rng = random.Random(seed)
    G1, G2 = random_group(rng), random_group(rng)
    assert is_isomorphic(tensor(G1, G2), gcd_oracle_tensor(G1, G2))


def test_subquotient_examples():
    assert format_group(subquotient(2, IntMatrix.identity(2), IntMatrix.diag([2, 3]))) == "Z/6"
    U = M([[2, 0], [0, 1]])
    assert subquotient(2, U, U).is_trivial()
    assert format_group(subquotient(2, U, M([[4, 0], [0, 1]]))) == "Z/2"
    with pytest.raises(NotASubgroup) as exc:
        subquotient(2, U, M([[1], [0]]))
    assert exc.value.column == 0


# chain complexes

def test_homology_examples():
    C = ChainComplexZ([1, 1], [M([[2]])])
    assert [format_group(G) for G in C.homology()] == ["Z/2", "0"]
    E = ChainComplexZ([1, 1], [M([[1]])])
    assert all(G.is_trivial() for G in E.homology())
    Z = ChainComplexZ([1, 1], [M([[0]])])
    assert [format_group(G) for G in Z.homology()] == ["Z", "Z"]


def test_non_complex_rejected():
    with pytest.raises(ValueError):
        ChainComplexZ([1, 1, 1], [M([[1]]), M([[1]])])


def test_tensor_complex_examples():
    C = ChainComplexZ([1, 1], [M([[2]])])
    U = tensor_complexes(C, concentrated(1))
    assert [format_group(G) for G in U.homology()] == ["Z/2", "0"]
    T = tensor_complexes(C, C)
    assert format_group(homology_at(T, 1)) == "Z/2"
    Zc = ChainComplexZ([1, 1], [M([[0]])])
    # Zc is Z in degrees 0 and 1, so the product is C plus a shifted copy
    ZC = tensor_complexes(Zc, C)
    assert ZC.ranks == [1, 2, 1]
    assert [format_group(G) for G in ZC.homology()] == ["Z/2", "Z/2", "0"]


# parsing and formatting

def test_parse_and_format():
    assert format_group(parse_group("Z^2+Z/4+Z/6")) == "Z^2+Z/2+Z/12"
    assert group_json(parse_group("Z/4+Z/6")) == {"free_rank": 0, "torsion": [2, 12]}
    assert parse_group("0").is_trivial()
    assert format_group(parse_group(" Z + Z/1 ")) == "Z"


@pytest.mark.parametrize("bad, pos", [("Z/0", 2), ("Q", 0), ("Z+", 2), ("Z^0", 2), ("Z Z", 2)])
def test_parse_errors_report_position(bad, pos):
    with pytest.raises(GroupParseError) as exc:
        parse_group(bad)
    assert exc.value.position == pos


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 3), st.lists(st.integers(2, 40), max_size=3))
def test_format_parse_roundtrip(r, tors):
    G = from_invariants(r, tors)
    assert is_isomorphic(parse_group(format_group(G)), G)


def test_elements():
    G = parse_group("Z/4")
    x = G.element([3])
    assert (x + x).coordinates == (2,)
    assert (4 * x).is_zero()
    assert (-x).coordinates == (1,)
