from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatholo.characters import (
    CyclotomicValue,
    character_table,
    class_algebra,
    dixon_prime,
    galois_orbits,
    lift_to_cyclotomic,
    multiplicities,
    principal_block_test,
    restrict_character,
)
from flatholo.exceptions import EmbeddingInvalid, InvalidPrime, NonCharacter
from flatholo.groups import NAMED_GROUPS, cyclic_group, sylow_subgroup, symmetric_group, trivial_group

from helpers import degree_oracle

ALL = sorted(NAMED_GROUPS)


def regular_character(G):
    return [G.order if c == 0 else 0 for c in range(len(G.classes))]


@pytest.mark.parametrize("name", ALL)
def test_table_validity(name):
    G = NAMED_GROUPS[name]()
    T = character_table(G)
    assert T.row_orthogonality() and T.column_orthogonality()
    assert sum(d * d for d in T.degrees) == G.order
    assert all(G.order % d == 0 for d in T.degrees)
    assert len(T.values) == len(G.classes)
    assert all(v == 1 for v in T.values[0])
    assert [sorted(T.degrees)] == degree_oracle(G)


def test_known_degree_multisets():
    assert sorted(character_table(symmetric_group(3)).degrees) == [1, 1, 2]
    assert sorted(character_table(NAMED_GROUPS["Q8"]()).degrees) == [1, 1, 1, 1, 2]
    assert sorted(character_table(NAMED_GROUPS["A4"]()).degrees) == [1, 1, 1, 3]
    for n in (1, 2, 5, 6):
        T = character_table(cyclic_group(n))
        assert T.degrees == (1,) * n


def test_class_algebra_structure_constants():
    for name in ("S3", "Q8", "A4"):
        assert class_algebra(NAMED_GROUPS[name]()).check()


def test_dixon_prime():
    assert dixon_prime(6, 6, floor=0) == 13
    assert dixon_prime(8, 4, floor=0) == 17
    assert dixon_prime(6, 6) == 67
    assert dixon_prime(1, 1, floor=0) == 3


def test_determinism_and_seed_independence():
    G = NAMED_GROUPS["S4"]()
    a, b = character_table(G, seed=3), character_table(G, seed=3)
    assert a.values == b.values and a.degrees == b.degrees
    c = character_table(G, seed=99)
    assert set(c.values) == set(a.values)


def test_galois_orbits_examples():
    assert galois_orbits(character_table(cyclic_group(3))) == [(0,), (1, 2)]
    assert sorted(len(o) for o in galois_orbits(character_table(cyclic_group(5)))) == [1, 4]
    assert all(len(o) == 1 for o in galois_orbits(character_table(symmetric_group(3))))


@pytest.mark.parametrize("name", ALL)
def test_galois_orbits_partition(name):
    T = character_table(NAMED_GROUPS[name]())
    orbits = galois_orbits(T)
    flat = sorted(r for o in orbits for r in o)
    assert flat == list(range(len(T.values)))
    assert (0,) in orbits


def test_multiplicities_examples():
    C2 = cyclic_group(2)
    T = character_table(C2)
    assert multiplicities(T, [2, 0]) == [(0, 1), (1, 1)]
    assert multiplicities(character_table(trivial_group()), [5]) == [(0, 5)]
    S3 = symmetric_group(3)
    T = character_table(S3)
    assert [m for _, m in multiplicities(T, regular_character(S3))] == list(T.degrees)


def test_multiplicities_rejects_non_characters():
    T = character_table(cyclic_group(2))
    with pytest.raises(NonCharacter):
        multiplicities(T, [1, 0])
    with pytest.raises(NonCharacter):
        multiplicities(T, [3, 2])
    with pytest.raises(NonCharacter):
        multiplicities(T, [T.prime, T.prime])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["S3", "Q8", "A4", "D4"]), st.lists(st.integers(0, 3), min_size=10, max_size=10),
       st.lists(st.integers(0, 3), min_size=10, max_size=10))
def test_multiplicities_additive(name, m1, m2):
    G = NAMED_GROUPS[name]()
    T = character_table(G)
    r = len(T.values)

    def combo(ms):
        xi = [sum(m * T.values[i][c] for i, m in enumerate(ms[:r])) % T.prime for c in range(r)]
        xi[0] = sum(m * d for m, d in zip(ms, T.degrees))
        return xi

    xi1, xi2 = combo(m1), combo(m2)
    both = [a + b for a, b in zip(xi1, xi2)]
    total = Counter(dict(multiplicities(T, xi1))) + Counter(dict(multiplicities(T, xi2)))
    assert dict(multiplicities(T, both)) == dict(total)


def _subgroup_tables(G, H_elems):
    T_G = character_table(G)
    H = G.subgroup(H_elems)
    T_H = character_table(H, prime=T_G.prime)
    return T_G, H, T_H


def test_restrict_character_examples():
    S3 = symmetric_group(3)
    T_G, H, T_H = _subgroup_tables(S3, sylow_subgroup(S3, 3))
    emb = H.parent_indices
    sign = next(i for i, d in enumerate(T_G.degrees) if d == 1 and i != 0)
    assert restrict_character(T_G, T_H, emb, sign) == [(0, 1)]
    two = T_G.degrees.index(2)
    assert restrict_character(T_G, T_H, emb, two) == [(1, 1), (2, 1)]
    T_1 = character_table(S3.subgroup((0,)), prime=T_G.prime)
    assert restrict_character(T_G, T_1, (0,), two) == [(0, 2)]


def test_restrict_character_degree_balance():
    for name in ("S4", "A4", "D4", "Q8"):
        G = NAMED_GROUPS[name]()
        for p in (2, 3):
            if G.order % p:
                continue
            T_G, H, T_H = _subgroup_tables(G, sylow_subgroup(G, p))
            for r in range(len(T_G.values)):
                res = restrict_character(T_G, T_H, H.parent_indices, r)
                assert sum(m * T_H.degrees[i] for i, m in res) == T_G.degrees[r]


def test_restrict_character_rejects_bad_embedding():
    S3 = symmetric_group(3)
    T_G, H, T_H = _subgroup_tables(S3, sylow_subgroup(S3, 3))
    bad = (0, H.parent_indices[2], H.parent_indices[2])
    with pytest.raises(EmbeddingInvalid):
        restrict_character(T_G, T_H, bad, 0)


def test_lift_examples():
    S3 = symmetric_group(3)
    T = character_table(S3)
    assert all(v.is_rational() and v.coeffs[0] == 1 for v in lift_to_cyclotomic(T, 0))
    sign = lift_to_cyclotomic(T, 1)
    involution = next(c for c, g in enumerate(S3.class_reps) if S3.orders[g] == 2)
    assert sign[involution].coeffs[0] == -1 and sign[involution].is_rational()
    C3 = cyclic_group(3)
    T3 = character_table(C3)
    for r in (1, 2):
        vals = lift_to_cyclotomic(T3, r)
        assert {v.coeffs for v in vals[1:]} == {(0, 1), (-1, -1)}


@pytest.mark.parametrize("name", ALL)
def test_lift_reduces_to_table(name):
    G = NAMED_GROUPS[name]()
    T = character_table(G)
    z = T.root_of_order(G.exponent)
    for r in range(len(T.values)):
        vals = lift_to_cyclotomic(T, r)
        assert tuple(v.reduce_mod(T.prime, z) for v in vals) == T.values[r]


def test_cyclotomic_value_reduction():
    v = CyclotomicValue.from_exponents(4, {0: 1, 2: 1})  # 1 + i^2 = 0
    assert v.coeffs == (0, 0)


def test_block_examples():
    S3 = symmetric_group(3)
    T = character_table(S3)
    assert [principal_block_test(S3, T, r, 2) for r in range(3)] == [True, True, False]
    assert all(principal_block_test(S3, T, r, 3) for r in range(3))
    with pytest.raises(InvalidPrime):
        principal_block_test(S3, T, 0, 5)


@pytest.mark.parametrize("name", [n for n in ALL if n != "trivial"])
def test_trivial_character_in_principal_block(name):
    G = NAMED_GROUPS[name]()
    T = character_table(G)
    for p in (2, 3, 5):
        if G.order % p == 0:
            assert principal_block_test(G, T, 0, p)


def test_p_groups_have_one_block():
    for name in ("C2", "C4", "C2xC2", "D4", "Q8"):
        G = NAMED_GROUPS[name]()
        T = character_table(G)
        assert all(principal_block_test(G, T, r, 2) for r in range(len(T.values)))
