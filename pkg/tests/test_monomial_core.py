from itertools import product

import pytest
from hypothesis import given, strategies as st

from speccalc.errors import DomainError, InputError
from speccalc.monomial_core import (
    Monomial,
    MonomialIdeal,
    MonomialPrime,
    PrimeSet,
    associated_primes,
    colon,
    dimension,
    height,
    irreducible_decomposition,
    minimal_generators,
    minimal_primes,
    radical,
)


def ideal(*exps):
    return MonomialIdeal.from_exponents(len(exps[0]), exps)


def mono(*e):
    return Monomial(tuple(e))


def box(n, top):
    return [Monomial(e) for e in product(range(top + 1), repeat=n)]


def member_oracle(gens, m):
    return any(all(a <= b for a, b in zip(g, m.exps)) for g in gens)


def colon_ass_oracle(I, top=3):
    """Primes among the colon ideals (I : u) for monomials u in a box."""
    out = set()
    for u in box(I.n, top):
        if u in I:
            continue
        J = colon(I, u)
        if all(g.degree == 1 for g in J.gens):
            out.add(sum(1 << g.exps.index(1) for g in J.gens))
    return out


small_ideals2 = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4).map(
    lambda gens: MonomialIdeal.from_exponents(2, gens))
small_ideals3 = st.lists(st.tuples(*(st.integers(0, 2),) * 3), min_size=1, max_size=4).map(
    lambda gens: MonomialIdeal.from_exponents(3, gens))
proper2 = small_ideals2.filter(lambda I: not I.is_unit())
proper3 = small_ideals3.filter(lambda I: not I.is_unit())
monos2 = st.tuples(st.integers(0, 3), st.integers(0, 3)).map(Monomial)


def test_minimal_generators_examples():
    assert minimal_generators([mono(2, 0), mono(3, 0), mono(0, 1)]).gens == ideal((2, 0), (0, 1)).gens
    assert minimal_generators([], n=2).is_zero()
    assert minimal_generators([mono(0, 0), mono(1, 0)]).is_unit()
    with pytest.raises(InputError):
        minimal_generators([mono(1, 0), Monomial((1,))])


@pytest.mark.parametrize("m, expected", [((0, 1), [(1, 0)]), ((1, 0), [(1, 0), (0, 1)])])
def test_colon_against_membership_oracle(m, expected):
    I = ideal((2, 0), (1, 1))
    J = colon(I, Monomial(m))
    assert J == ideal(*expected)
    for u in box(2, 3):
        assert (u in J) == member_oracle([(2, 0), (1, 1)], u * Monomial(m))


def test_colon_by_one_is_identity():
    I = ideal((2, 0), (1, 1))
    assert colon(I, mono(0, 0)) == I


@pytest.mark.parametrize("gens, comps", [
    ([(2, 0), (1, 1)], [[(1, 0)], [(2, 0), (0, 1)]]),
    ([(1, 1)], [[(1, 0)], [(0, 1)]]),
    ([(2, 0)], [[(2, 0)]]),
])
def test_irreducible_decomposition_examples(gens, comps):
    I = ideal(*gens)
    got = set(irreducible_decomposition(I))
    assert got == {ideal(*c) for c in comps}
    top = max(max(g) for g in gens) + 1
    for u in box(2, top):
        assert (u in I) == all(u in c for c in got)


def test_decomposition_domain_errors():
    with pytest.raises(DomainError):
        irreducible_decomposition(MonomialIdeal.zero(2))
    with pytest.raises(DomainError):
        irreducible_decomposition(MonomialIdeal.unit(2))


@pytest.mark.parametrize("gens, primes", [
    ([(2, 0), (1, 1)], {0b01, 0b11}),
    ([(1, 1)], {0b01, 0b10}),
])
def test_associated_primes_examples(gens, primes):
    I = ideal(*gens)
    assert associated_primes(I).masks == primes
    assert colon_ass_oracle(I) == primes


def test_unit_ideal_has_no_associated_primes():
    assert len(associated_primes(MonomialIdeal.unit(2))) == 0


def test_dimension_examples():
    assert dimension(MonomialIdeal.zero(2)) == 2
    assert dimension(ideal((1, 1))) == 1
    assert dimension(ideal((1, 0), (0, 1))) == 0
    with pytest.raises(DomainError):
        dimension(MonomialIdeal.unit(2))


def test_radical_and_height():
    assert radical(ideal((2, 0), (0, 3))) == ideal((1, 0), (0, 1))
    r = radical(ideal((1, 1)))
    assert r == ideal((1, 1))
    for u in box(2, 3):
        assert (u in r) == member_oracle([(1, 1)], u)
    assert height(MonomialPrime(2, 0b11)) == 2


def test_ambient_mismatch_is_rejected():
    with pytest.raises(InputError):
        ideal((1, 0)) + MonomialIdeal.zero(3)
    with pytest.raises(InputError):
        PrimeSet.empty(2) | PrimeSet.empty(3)


def test_prime_order_is_inclusion():
    x, m = MonomialPrime(2, 1), MonomialPrime(2, 3)
    assert x <= m and x < m and not m <= x


@given(proper2, monos2, monos2)
def test_colon_properties(I, m, m2):
    assert colon(I, m).contains_ideal(I)
    assert colon(colon(I, m), m2) == colon(I, m * m2)


@given(proper3.filter(lambda I: not I.is_zero()))
def test_decomposition_intersects_to_ideal(I):
    comps = irreducible_decomposition(I)
    top = max(I.max_exponents()) + 1
    for u in box(3, top):
        assert (u in I) == all(u in c for c in comps)


@given(proper3)
def test_ass_contains_minimal_primes(I):
    ass = associated_primes(I)
    assert len(ass) > 0
    assert minimal_primes(I) <= ass
    assert minimal_primes(radical(I)) <= ass


@given(proper2.filter(lambda I: not I.is_zero()))
def test_ass_matches_colon_oracle(I):
    assert associated_primes(I).masks == colon_ass_oracle(I, top=4)


@given(proper2.filter(lambda I: not I.is_zero()), st.lists(monos2, min_size=1, max_size=3))
def test_ass_of_subquotient_inside_ass(I, extra):
    # J/I for J = I + (extra): its elements are the monomials of J outside I
    J = I + MonomialIdeal(2, tuple(extra))
    sub = set()
    for u in box(2, 4):
        if u in J and u not in I:
            C = colon(I, u)
            if all(g.degree == 1 for g in C.gens):
                sub.add(sum(1 << g.exps.index(1) for g in C.gens))
    assert sub <= associated_primes(I).masks


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=5))
def test_minimal_generators_idempotent(gens):
    I = minimal_generators([Monomial(g) for g in gens], n=2)
    assert minimal_generators(I.gens, n=2) == I
    for a in I.gens:
        for b in I.gens:
            assert a == b or not a.divides(b)
