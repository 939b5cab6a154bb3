"""Acceptance criteria.  Each test records one PASS/FAIL line in RESULTS,
printed in the terminal summary (and by running this file directly)."""

import random
import sys
import time
from itertools import combinations
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from catalogs import example_complex, line_catalog  # noqa: E402
from oracles import tor_with_residue_field  # noqa: E402
from speccalc.graded_modules import (  # noqa: E402
    Presented,
    euler_characteristic,
    free_resolution,
    homology_dim,
    minimalize,
    taylor_resolution,
)
from speccalc.homological_invariants import (  # noqa: E402
    bass_numbers,
    bass_table,
    depth_at_prime,
    depth_at_prime_report,
    depth_ideal,
    find_deep_module,
    find_depth_dim_prime,
    local_dimension,
)
from speccalc.monomial_core import (  # noqa: E402
    MonomialIdeal,
    MonomialPrime,
    PrimeSet,
    associated_primes,
    dimension,
    radical,
)
from speccalc.ring import Ring  # noqa: E402
from speccalc.spec_calculus import (  # noqa: E402
    Status,
    check_dimension_theorem,
    coherence_verdict,
    default_catalog,
    is_specialization_closed,
    restrict,
    revalidate,
    satisfies_union_condition,
)
from speccalc.support_theory import (  # noqa: E402
    ass_module,
    supp_cohomology,
    supp_complex,
    supp_module,
    theorem_main_check,
)

RESULTS: dict[int, str] = {}


def record(k, ok, detail):
    RESULTS[k] = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(RESULTS[k])
    return ok


def ideal(*exps):
    return MonomialIdeal.from_exponents(len(exps[0]), exps)


def subsets(n):
    for m in range(1 << (1 << n)):
        yield PrimeSet(n, frozenset(k for k in range(1 << n) if (m >> k) & 1))


def test_criterion_1_example_bass_table_and_verdict():
    r = Ring.polynomial(2)
    S = Presented.free(r, [(0, 0)])
    t = bass_table(S)
    rows = {m: tuple(list(t.row(m)) + [0] * (3 - len(t.row(m)))) for m in range(4)}
    want = {0: (1, 0, 0), 1: (0, 1, 0), 2: (0, 1, 0), 3: (0, 0, 1)}
    v = coherence_verdict(PrimeSet(2, frozenset({0, 1, 2})), default_catalog(r))
    w = v.witness
    ok = (rows == want and v.status is Status.NOT_COHERENT
          and (w.module, w.prime, w.level) == ("S", 3, 2) and revalidate(v))
    assert record(1, ok, f"Bass rows {rows}; verdict {v.format(r.names)}; exact")


def test_criterion_2_failure_witness_complex():
    r = Ring.polynomial(2)
    X = example_complex(r)
    sx, sh = supp_complex(X), supp_cohomology(X)
    rep = theorem_main_check(PrimeSet(2, frozenset({0, 1, 2})), X)
    ok = sx.masks == {0, 1, 2} and 3 in sh.masks and rep.relation == "violation"
    assert record(2, ok, f"Supp X = {sx.format(r.names)}; Supp H*X = {sh.format(r.names)}; "
                         f"relation = {rep.relation}; exact")


def test_criterion_3_dimension_theorem():
    r1 = Ring.polynomial(1)
    line_ok = all(coherence_verdict(phi, default_catalog(r1)).coherent for phi in subsets(1))
    cat = line_catalog()
    eq = all(supp_complex(X) == supp_cohomology(X) for X in cat)
    reps = [check_dimension_theorem(Ring.polynomial(n)) for n in (2, 3)]
    higher = all(rep.verified and rep.noncoherent.not_coherent for rep in reps)
    ok = line_ok and eq and len(cat) == 10 and higher
    assert record(3, ok, f"k[x]: 4/4 coherent={line_ok}, Supp X = Supp H*X on {len(cat)} complexes={eq}; "
                         f"n=2,3 NotCoherent found={higher}; exact")


DEPTH_PAIRS = [
    ((), 0b11), (((2, 0), (1, 1)), 0b11), (((2, 0), (1, 1)), 0b01), (((1, 1),), 0b11),
    (((1, 1),), 0b01), (((2, 0),), 0b11), (((3, 0), (0, 2)), 0b11), (((1, 0),), 0b01),
    (((1, 2), (2, 1)), 0b11),
]
NONRADICAL = [((2, 0),), ((2, 0), (1, 1)), ((2, 0), (0, 2)), ((2, 1),), ((1, 2), (2, 1)), ((3, 0), (1, 1))]


def test_criterion_4_depth_routes():
    r = Ring.polynomial(2)
    bad = []
    for gens, p in DEPTH_PAIRS:
        I = MonomialIdeal.from_exponents(2, gens)
        M = Presented.quotient(r, I)
        rep = depth_at_prime_report(M, p)
        row = bass_numbers(M, p)
        inf_bass = next(i for i, v in enumerate(row) if v)
        if len(rep.routes) < 3 or len(set(rep.routes.values())) != 1 or rep.value != inf_bass:
            bad.append((gens, p, rep.routes))
    S = Presented.free(r, [(0, 0)])
    for gens in NONRADICAL:
        a = MonomialIdeal.from_exponents(2, gens)
        for M in (S, Presented.quotient(r, ideal((1, 1)))):
            if depth_ideal(a, M).value != depth_ideal(radical(a), M).value:
                bad.append(("radical", gens))
    ok = not bad
    assert record(4, ok, f"{len(DEPTH_PAIRS)} (module, prime) pairs with >= 3 agreeing routes, "
                         f"{len(NONRADICAL)} nonradical ideals; mismatches {bad}; exact")


def test_criterion_5_coherence_closure():
    failures = []
    rng = random.Random(5)
    count = 0
    for n in (2, 3):
        cat = default_catalog(Ring.polynomial(n))
        if n == 2:
            family = list(subsets(2))
        else:
            family = [PrimeSet(3, frozenset(rng.sample(range(8), rng.randint(0, 8)))) for _ in range(40)]
        verdicts = {phi.masks: coherence_verdict(phi, cat) for phi in family}
        count += len(family)
        coherent = [m for m, v in verdicts.items() if v.coherent]
        for a, b in combinations(coherent, 2):
            if not coherence_verdict(PrimeSet(n, a & b), cat).coherent:
                failures.append(("intersection", n, sorted(a & b)))
    upclosed = 0
    for n in (1, 2, 3):
        cat = default_catalog(Ring.polynomial(n))
        for phi in subsets(n):
            if is_specialization_closed(phi):
                upclosed += 1
                if not coherence_verdict(phi, cat).coherent:
                    failures.append(("up-closed", n, sorted(phi.masks)))
            if satisfies_union_condition(phi) and not coherence_verdict(phi, cat).coherent:
                failures.append(("union", n, sorted(phi.masks)))
    r2 = Ring.polynomial(2)
    ex = PrimeSet(2, frozenset({0, 1, 2}))
    at_m = coherence_verdict(restrict(ex, MonomialPrime(2, 3)), default_catalog(r2))
    at_x = coherence_verdict(restrict(ex, MonomialPrime(2, 1)), default_catalog(Ring.polynomial(1)))
    if not (at_m.not_coherent and at_x.coherent):
        failures.append(("restriction", at_m.status, at_x.status))
    ok = not failures
    assert record(5, ok, f"{count} generated subsets, {upclosed} up-closed sets (n <= 3); "
                         f"restriction to m NotCoherent, to P{{x}} Coherent; failures {failures}; exact")


def test_criterion_6_basic_opens():
    r = Ring.polynomial(2)
    cat = default_catalog(r)
    dx = coherence_verdict(PrimeSet(2, frozenset({0, 0b10})), cat)
    dy = coherence_verdict(PrimeSet(2, frozenset({0, 0b01})), cat)
    both = coherence_verdict(PrimeSet(2, frozenset({0, 0b01, 0b10})), cat)
    ok = dx.coherent and dy.coherent and both.not_coherent
    assert record(6, ok, f"D(x) {dx.status.value}, D(y) {dy.status.value}, "
                         f"D(x) ∪ D(y) {both.status.value}; exact")


def test_criterion_7_support_routes():
    modules = []
    for n in (2, 3):
        modules += default_catalog(Ring.polynomial(n))
    bad = []
    for M in modules:
        rep = supp_module(M)
        ass = ass_module(M)
        if set(rep.routes) != {"bass", "ann", "tor"} or not ass <= rep.value:
            bad.append(M.describe())
        if ass != associated_primes(M.ideal):
            bad.append(M.describe())
    ok = not bad and len(modules) >= 15
    assert record(7, ok, f"{len(modules)} modules, three routes identical, Ass ⊆ Supp, "
                         f"Ass by mu_0 = Ass by decomposition; mismatches {bad}; exact")


def test_criterion_8_depth_dimension_primes():
    bad = []
    checked = 0
    for n in (2, 3):
        r = Ring.polynomial(n)
        for M in default_catalog(r):
            I = M.ideal
            d = dimension(I)
            if d < 1:
                continue
            p = find_depth_dim_prime(I, r)
            checked += 1
            if not (depth_at_prime(M, p) == local_dimension(I, p) == d - 1):
                bad.append((M.describe(), p))
    deep = {}
    for n in (2, 3, 4):
        r = Ring.polynomial(n)
        hit = find_deep_module(n, [Presented.free(r, [(0,) * n])])
        deep[n] = hit[2] if hit else None
        if hit is None or hit[2] != max(2, n - 1) or depth_at_prime(hit[0], hit[1]) != hit[2]:
            bad.append(("deep", n))
    ok = not bad
    assert record(8, ok, f"{checked} catalog quotients with depth = dim = dim - 1; "
                         f"deep module depths {deep}; failures {bad}; exact")


def test_criterion_9_resolution_engine():
    r = Ring.polynomial(2)
    b1 = [len(free_resolution(Presented.quotient(r, ideal((1, 0), (0, 1))))
              .shifts.get(-i, ())) for i in range(3)]
    b2 = [len(free_resolution(Presented.quotient(r, ideal((2, 0), (1, 1), (0, 2))))
              .shifts.get(-i, ())) for i in range(3)]
    oracle = tor_with_residue_field([(2, 0), (1, 1), (0, 2)], 2)
    bad = []
    ideals = [ideal((1, 0), (0, 1)), ideal((2, 0), (1, 1), (0, 2)), ideal((2, 0), (1, 1)),
              ideal((3, 0), (2, 1), (0, 2)), ideal((1, 1, 0), (0, 1, 1), (1, 0, 1)),
              ideal((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 1))]
    for I in ideals:
        ring = Ring.polynomial(I.n)
        T = taylor_resolution(ring, I)
        M = minimalize(T)
        for d in T.box().degrees():
            for i in T.indices:
                if homology_dim(T, i, d) != (homology_dim(M, i, d) if i in M.indices else 0):
                    bad.append(("homology", I, i, d))
            for C in (T, M):
                terms, hom = euler_characteristic(C, d)
                if terms != hom:
                    bad.append(("euler", I, d))
    ok = b1 == [1, 2, 1] and b2 == [1, 3, 2] == oracle and not bad
    assert record(9, ok, f"betti S/(x,y) = {b1}, S/(x^2,xy,y^2) = {b2} (Tor oracle {oracle}); "
                         f"{len(ideals)} minimalized Taylor complexes checked on full box; failures {len(bad)}; exact")


def _random_module(rng, ring):
    n = ring.n
    gens = [tuple(rng.randint(0, 2) for _ in range(n)) for _ in range(rng.randint(1, 3))]
    I = MonomialIdeal.from_exponents(n, gens)
    if I.is_unit():
        I = MonomialIdeal.zero(n)
    return Presented.quotient(ring, I, label="S/(" + ",".join(map(str, gens)) + ")")


def test_criterion_10_soundness_fuzzing():
    rng = random.Random(10)
    conflicts, invalid, seen = 0, 0, {}
    counts = {s: 0 for s in Status}
    pools = {}
    for n in (2, 3):
        ring = Ring.polynomial(n)
        pools[n] = (ring, default_catalog(ring) + [_random_module(rng, ring) for _ in range(6)])
    for k in range(500):
        n = 2 if k % 2 else 3
        ring, pool = pools[n]
        phi = PrimeSet(n, frozenset(m for m in range(1 << n) if rng.random() < 0.5))
        for _ in range(2):
            cat = rng.sample(pool, rng.randint(1, len(pool)))
            v = coherence_verdict(phi, cat)
            counts[v.status] += 1
            seen.setdefault(phi.masks, set()).add(v.status)
            if v.not_coherent and not revalidate(v):
                invalid += 1
    conflicts = sum(1 for s in seen.values() if {Status.COHERENT, Status.NOT_COHERENT} <= s)
    ok = conflicts == 0 and invalid == 0
    tally = ", ".join(f"{s.value} {c}" for s, c in counts.items())
    assert record(10, ok, f"500 subsets x 2 random catalogs ({tally}); conflicts {conflicts}; "
                          f"invalid witnesses {invalid}; exact")


if __name__ == "__main__":
    start = time.time()
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    print(f"{10 - failed}/10 criteria passed in {time.time() - start:.1f}s")
    sys.exit(1 if failed else 0)
