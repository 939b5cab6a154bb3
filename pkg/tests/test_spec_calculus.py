from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from speccalc.errors import InputError
from speccalc.homological_invariants import bass_table
from speccalc.monomial_core import MonomialIdeal, MonomialPrime, PrimeSet
from speccalc.ring import Ring
from speccalc.spec_calculus import (
    Reason,
    Status,
    check_dimension_theorem,
    coherence_verdict,
    default_catalog,
    find_witness,
    is_interval_family,
    is_specialization_closed,
    lambda_set,
    restrict,
    revalidate,
    satisfies_union_condition,
    v_set,
    vlambda_family,
)

R2 = Ring.polynomial(2)
R3 = Ring.polynomial(3)
CAT2 = default_catalog(R2)
CAT3 = default_catalog(R3)
X, Y, M = 0b01, 0b10, 0b11


def ps(n, *masks):
    return PrimeSet(n, frozenset(masks))


def all_subsets(n):
    for m in range(1 << (1 << n)):
        yield PrimeSet(n, frozenset(k for k in range(1 << n) if (m >> k) & 1))


VERDICTS2 = {phi.masks: coherence_verdict(phi, CAT2) for phi in all_subsets(2)}


def test_example_triangle_is_not_coherent():
    v = VERDICTS2[frozenset({0, X, Y})]
    assert v.status is Status.NOT_COHERENT
    assert v.reason is Reason.WITNESS
    assert (v.witness.module, v.witness.prime, v.witness.level) == ("S", M, 2)
    assert v.format(R2.names) == "NOT COHERENT (witness: M=S, p={x,y}, d=2)"
    assert revalidate(v)


@pytest.mark.parametrize("masks, reason", [
    ({X, M}, Reason.SPECIALIZATION_CLOSED),
    ({X, Y}, Reason.VLAMBDA_FAMILY),
    ({0, X}, Reason.UNION_CONDITION),
    ({0, Y}, Reason.UNION_CONDITION),
    (set(), Reason.SPECIALIZATION_CLOSED),
])
def test_coherent_examples(masks, reason):
    v = VERDICTS2[frozenset(masks)]
    assert v.coherent and v.reason is reason


def test_verdict_counts_in_two_variables():
    counts = {s: sum(v.status is s for v in VERDICTS2.values()) for s in Status}
    assert counts == {Status.COHERENT: 12, Status.NOT_COHERENT: 1, Status.UNKNOWN: 3}


def test_up_closed_sets_are_coherent():
    for phi in all_subsets(2):
        if is_specialization_closed(phi):
            assert VERDICTS2[phi.masks].coherent


def test_intersections_of_coherent_sets_are_never_refuted():
    coherent = [k for k, v in VERDICTS2.items() if v.coherent]
    for a, b in combinations(coherent, 2):
        assert not VERDICTS2[a & b].not_coherent


def test_coherent_sets_have_no_witness():
    for masks, v in VERDICTS2.items():
        if v.coherent:
            assert find_witness(v.phi, CAT2) is None


def test_set_algebra():
    p = MonomialPrime(2, X)
    assert v_set(p).masks == {X, M}
    assert lambda_set(p).masks == {0, X}
    assert vlambda_family(ps(2, X), ps(2, M)).masks == {X, M}
    assert satisfies_union_condition(ps(2, 0, X))
    assert not satisfies_union_condition(ps(2, 0, X, Y))
    assert is_interval_family(ps(2, X, Y))
    assert not is_interval_family(ps(2, 0, M))


def test_union_of_basic_opens():
    # D(x) ∪ D(y): primes missing x or missing y
    phi = ps(2, 0, X, Y)
    assert VERDICTS2[phi.masks].not_coherent
    assert VERDICTS2[frozenset({0, X})].coherent


def test_restriction():
    phi = ps(2, 0, X, Y)
    r = restrict(phi, MonomialPrime(2, X))
    assert r.n == 1 and r.masks == {0, 1}
    assert coherence_verdict(r, default_catalog(Ring.polynomial(1))).coherent
    with pytest.raises(InputError):
        restrict(phi, MonomialPrime(3, 1))


def test_input_outside_universe():
    with pytest.raises(InputError):
        coherence_verdict(ps(2, X), CAT2, universe=[0, M])


phis3 = st.frozensets(st.integers(0, 7)).map(lambda s: PrimeSet(3, s))


@given(phis3)
@settings(max_examples=60)
def test_verdicts_in_three_variables_are_consistent(phi):
    v = coherence_verdict(phi, CAT3)
    if v.coherent:
        assert find_witness(phi, CAT3) is None
    if v.not_coherent:
        assert revalidate(v)
        assert v.witness.prime not in phi.masks
    if is_specialization_closed(phi):
        assert v.coherent


@given(phis3, st.integers(0, 7))
@settings(max_examples=60)
def test_restriction_is_sound(phi, p):
    # a coherent set stays non-refutable after localizing
    if not coherence_verdict(phi, CAT3).coherent:
        return
    prime = MonomialPrime(3, p)
    r = restrict(phi, prime)
    if r.n >= 2:
        assert not coherence_verdict(r, default_catalog(Ring.polynomial(r.n))).not_coherent


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dimension_theorem_for_polynomial_rings(n):
    rep = check_dimension_theorem(Ring.polynomial(n))
    assert rep.verified
    assert rep.dim == n
    if n == 1:
        assert rep.checked == 4
        assert rep.format(("x",)) == "all 4 subsets coherent; dim theorem verified"


def test_dimension_theorem_for_quotients():
    rep = check_dimension_theorem(R2, MonomialIdeal.from_exponents(2, [(1, 1)]))
    assert rep.dim == 1 and rep.verified
    rep = check_dimension_theorem(R3, MonomialIdeal.from_exponents(3, [(1, 0, 0)]))
    assert rep.dim == 2 and rep.verified
    assert all(m & 1 for m in rep.noncoherent.phi.masks)


def test_witness_levels_come_from_bass_table():
    v = VERDICTS2[frozenset({0, X, Y})]
    t = bass_table(v.witness.source)
    assert v.witness.lower_levels == t.level(0) | t.level(1)


def test_verdict_json():
    data = VERDICTS2[frozenset({0, X, Y})].to_json(R2.names)
    assert data["status"] == "NotCoherent"
    assert data["witness"]["d"] == 2
