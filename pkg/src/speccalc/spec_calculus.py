"""Coherence of subsets of Spec*, the finite poset of monomial primes.

Masks stand for primes throughout; ``universe`` is the ambient poset a
subset lives in (all of Spec* by default, or V(I) for a quotient ring).

Sufficient conditions are tried before any homological work:

(a) up-closed sets;
(b) the union condition, in its homogeneous form: every P_G in the universe
    with G inside the union of the members of Phi lies in Phi;
(c) unions of intervals V(p) ∩ Λ(q) whose comparability-components each
    have a single top (components do not see each other because there are
    no graded maps between E(S/P_F) and E(S/P_G) for incomparable F, G);
(d) intersections of sets accepted by (a)-(c).

Failure is witnessed by a module M and prime p with depth M_p = d >= 2 whose
Bass levels d-2 and d-1 lie in Phi while p does not (directly, or after
localizing at a prime q ⊇ p).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InputError, InternalError
from .graded_modules import GradedModule, Presented
from .homological_invariants import bass_table
from .monomial_core import (
    Monomial,
    MonomialIdeal,
    MonomialPrime,
    PrimeSet,
    all_masks,
    dimension,
    indices_of,
    minimal_primes,
    popcount,
    variety,
)
from .ring import Ring

log = logging.getLogger(__name__)

MAX_INTERSECTION_SEARCH = 12


class Status(str, Enum):
    COHERENT = "Coherent"
    NOT_COHERENT = "NotCoherent"
    UNKNOWN = "Unknown"


class Reason(str, Enum):
    SPECIALIZATION_CLOSED = "SpecializationClosed"
    UNION_CONDITION = "UnionCondition"
    VLAMBDA_FAMILY = "VLambdaFamily"
    INTERSECTION_OF_COHERENT = "IntersectionOfCoherent"
    LOCALIZATION_REDUCTION = "LocalizationReduction"
    WITNESS = "Witness"


@dataclass(frozen=True)
class Witness:
    module: str
    prime: int
    level: int
    lower_levels: frozenset[int]
    top_level: frozenset[int]
    restricted_to: int | None = None
    source: GradedModule | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class CoherenceVerdict:
    status: Status
    phi: PrimeSet
    reason: Reason | None = None
    witness: Witness | None = None

    @property
    def coherent(self) -> bool:
        return self.status is Status.COHERENT

    @property
    def not_coherent(self) -> bool:
        return self.status is Status.NOT_COHERENT

    def to_json(self, names: Sequence[str]) -> dict:
        n = self.phi.n
        out: dict = {
            "phi": self.phi.labels(names),
            "status": self.status.value,
            "reason": self.reason.value if self.reason else None,
        }
        if self.witness:
            w = self.witness
            out["witness"] = {
                "module": w.module,
                "prime": MonomialPrime(n, w.prime).label(names),
                "d": w.level,
                "levels": PrimeSet(n, w.lower_levels).labels(names),
                "restricted_to": (MonomialPrime(n, w.restricted_to).label(names)
                                  if w.restricted_to is not None else None),
            }
        return out

    def format(self, names: Sequence[str]) -> str:
        if self.status is Status.COHERENT:
            return f"COHERENT ({self.reason.value})"
        if self.status is Status.UNKNOWN:
            return "UNKNOWN"
        w = self.witness
        text = f"NOT COHERENT (witness: M={w.module}, p={MonomialPrime(self.phi.n, w.prime).format(names)}, d={w.level}"
        if w.restricted_to is not None:
            text += f", localized at {MonomialPrime(self.phi.n, w.restricted_to).format(names)}"
        return text + ")"


# ---------------------------------------------------------------------------
# set algebra


def _universe(n: int, universe: Iterable[int] | PrimeSet | None) -> frozenset[int]:
    if universe is None:
        return frozenset(range(1 << n))
    if isinstance(universe, PrimeSet):
        return universe.masks
    return frozenset(universe)


def is_specialization_closed(phi: PrimeSet, universe=None) -> bool:
    uni = _universe(phi.n, universe)
    return all(q in phi.masks for p in phi.masks for q in uni if p & ~q == 0)


def v_set(p: MonomialPrime) -> PrimeSet:
    return PrimeSet(p.n, frozenset(q for q in range(1 << p.n) if p.mask & ~q == 0))


def lambda_set(p: MonomialPrime) -> PrimeSet:
    return PrimeSet(p.n, frozenset(q for q in range(1 << p.n) if q & ~p.mask == 0))


def vlambda_family(phi: PrimeSet, psi: PrimeSet) -> PrimeSet:
    """``⋃_{p ∈ Φ, q ∈ Ψ} V(p) ∩ Λ(q)``."""
    if phi.n != psi.n:
        raise InputError("prime sets over different rings")
    out = set()
    for p in phi.masks:
        for q in psi.masks:
            if p & ~q == 0:
                out.update(m for m in range(1 << phi.n) if p & ~m == 0 and m & ~q == 0)
    return PrimeSet(phi.n, frozenset(out))


def satisfies_union_condition(phi: PrimeSet, universe=None) -> bool:
    """Every P_G (in the universe) whose homogeneous elements lie in the
    union of the members of Φ belongs to Φ; for monomial primes that means
    ``G ⊆ ⋃ F``."""
    if not phi.masks:
        return True
    uni = _universe(phi.n, universe)
    top = 0
    for m in phi.masks:
        top |= m
    return all(g in phi.masks for g in uni if g & ~top == 0)


def _components(masks: frozenset[int]) -> list[frozenset[int]]:
    left = set(masks)
    comps = []
    while left:
        seed = left.pop()
        comp = {seed}
        stack = [seed]
        while stack:
            a = stack.pop()
            hits = [b for b in left if a & ~b == 0 or b & ~a == 0]
            for b in hits:
                left.discard(b)
                comp.add(b)
                stack.append(b)
        comps.append(frozenset(comp))
    return comps


def is_interval_family(phi: PrimeSet, universe=None) -> bool:
    """Each comparability-component of Φ is order-convex in the universe and has
    a largest element, i.e. Φ is a disjoint union of sets ``V(C) ∩ Λ(q)``."""
    uni = _universe(phi.n, universe)
    for comp in _components(phi.masks):
        top = next((q for q in comp if all(p & ~q == 0 for p in comp)), None)
        if top is None:
            return False
        for p in comp:
            for b in uni:
                if p & ~b == 0 and b & ~top == 0 and b not in comp:
                    return False
    return True


def restrict(phi: PrimeSet, p: MonomialPrime) -> PrimeSet:
    """``Φ ∩ Λ(p)`` as a subset of the spectrum of the localization, whose
    monomial primes are the subsets of the variables of p (re-indexed)."""
    if phi.n != p.n:
        raise InputError("prime set and prime over different rings")
    pos = {v: k for k, v in enumerate(p.variables)}
    out = set()
    for m in phi.masks:
        if m & ~p.mask == 0:
            out.add(sum(1 << pos[v] for v in indices_of(m)))
    return PrimeSet(p.height, frozenset(out))


def _sufficient_reason(masks: frozenset[int], n: int, uni: frozenset[int]) -> Reason | None:
    phi = PrimeSet(n, masks)
    if is_specialization_closed(phi, uni):
        return Reason.SPECIALIZATION_CLOSED
    if satisfies_union_condition(phi, uni):
        return Reason.UNION_CONDITION
    if is_interval_family(phi, uni):
        return Reason.VLAMBDA_FAMILY
    return None


def _intersection_reason(masks: frozenset[int], n: int, uni: frozenset[int]) -> bool:
    """Whether Φ is cut out by (a)-(c)-coherent supersets: every prime outside Φ
    is avoided by some such superset."""
    rest = sorted(uni - masks)
    if len(rest) > MAX_INTERSECTION_SEARCH:
        return False
    missing = set(rest)
    for size in range(len(rest)):
        for extra in combinations(rest, size):
            cand = masks | frozenset(extra)
            if _sufficient_reason(cand, n, uni) is not None:
                missing -= set(rest) - set(extra)
                if not missing:
                    return True
    return not missing


# ---------------------------------------------------------------------------
# witnesses


def _catalog_name(module: GradedModule, k: int) -> str:
    return module.label or f"M{k}"


def witness_condition(table, phi_masks: frozenset[int], p: int, scope: int) -> tuple[int, frozenset[int], frozenset[int]] | None:
    """Check the noncoherence condition for a Bass table at p inside Λ(scope)."""
    row = table.rows[p]
    d = next((i for i, v in enumerate(row) if v), None)
    if d is None or d < 2 or p in phi_masks:
        return None
    inside = {m for m in table.rows if m & ~scope == 0}
    lower = frozenset(m for m in inside for i in (d - 2, d - 1)
                      if i < len(table.rows[m]) and table.rows[m][i])
    if not lower <= phi_masks:
        return None
    top = frozenset(m for m in inside if d < len(table.rows[m]) and table.rows[m][d])
    return d, lower, top


def find_witness(phi: PrimeSet, catalog: Sequence[GradedModule]) -> tuple[Witness, bool] | None:
    """Search for a noncoherence witness; the flag tells whether it needed a
    proper localization."""
    n = phi.n
    full = (1 << n) - 1
    scopes = [full] + [m for m in sorted(range(full), key=lambda m: (-popcount(m), m))]
    for scope in scopes:
        for k, module in enumerate(catalog):
            if module.n != n:
                raise InputError("catalog module over the wrong ring")
            table = bass_table(module)
            for p in all_masks(n):
                if p & ~scope:
                    continue
                hit = witness_condition(table, phi.masks, p, scope)
                if hit is None:
                    continue
                d, lower, top = hit
                w = Witness(_catalog_name(module, k), p, d, lower, top,
                            None if scope == full else scope, module)
                return w, scope != full
    return None


def revalidate(verdict: CoherenceVerdict) -> bool:
    """Recompute the witness condition from the witness module's Bass table."""
    w = verdict.witness
    if w is None or w.source is None:
        return False
    scope = w.restricted_to if w.restricted_to is not None else (1 << verdict.phi.n) - 1
    hit = witness_condition(bass_table(w.source), verdict.phi.masks, w.prime, scope)
    return hit is not None and hit[0] == w.level and w.prime not in verdict.phi.masks


def coherence_verdict(phi: PrimeSet, catalog: Sequence[GradedModule], universe=None) -> CoherenceVerdict:
    uni = _universe(phi.n, universe)
    if not phi.masks <= uni:
        raise InputError("Φ contains primes outside the spectrum")
    reason = _sufficient_reason(phi.masks, phi.n, uni)
    if reason is not None:
        return CoherenceVerdict(Status.COHERENT, phi, reason)
    if _intersection_reason(phi.masks, phi.n, uni):
        return CoherenceVerdict(Status.COHERENT, phi, Reason.INTERSECTION_OF_COHERENT)
    if universe is None or uni == frozenset(range(1 << phi.n)):
        found = find_witness(phi, catalog)
        if found is not None:
            w, localized = found
            reason = Reason.LOCALIZATION_REDUCTION if localized else Reason.WITNESS
            return CoherenceVerdict(Status.NOT_COHERENT, phi, reason, w)
    log.info("coherence undecided for %r", phi)
    return CoherenceVerdict(Status.UNKNOWN, phi)


# ---------------------------------------------------------------------------
# catalogs and the dimension theorem


def default_catalog(ring: Ring) -> list[GradedModule]:
    """S, every S/P_F, S/(x_i x_j) and S/(x_i^2, x_i x_j)."""
    n = ring.n
    names = ring.names
    out: list[GradedModule] = [Presented.quotient(ring, MonomialIdeal.zero(n), label="S")]
    for m in all_masks(n):
        if not m:
            continue
        p = MonomialPrime(n, m)
        label = "S/(" + ",".join(names[i] for i in p.variables) + ")"
        out.append(Presented.quotient(ring, p.ideal(), label=label))
    for i, j in combinations(range(n), 2):
        mono = Monomial.var(n, i) * Monomial.var(n, j)
        out.append(Presented.quotient(ring, MonomialIdeal(n, (mono,)), label=f"S/({names[i]}*{names[j]})"))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            ideal = MonomialIdeal(n, (Monomial.var(n, i, 2), Monomial.var(n, i) * Monomial.var(n, j)))
            out.append(Presented.quotient(ring, ideal, label=f"S/({names[i]}^2,{names[i]}*{names[j]})"))
    return out


@dataclass
class DimensionReport:
    n: int
    ideal: MonomialIdeal
    dim: int
    spectrum: PrimeSet
    checked: int = 0
    all_coherent: bool | None = None
    unknown: list[PrimeSet] = field(default_factory=list)
    noncoherent: CoherenceVerdict | None = None
    reduced_to: int | None = None

    @property
    def verified(self) -> bool:
        if self.dim <= 1:
            return bool(self.all_coherent)
        return self.noncoherent is not None and self.noncoherent.not_coherent

    def format(self, names: Sequence[str]) -> str:
        if self.dim <= 1:
            if self.all_coherent:
                return f"all {self.checked} subsets coherent; dim theorem verified"
            return f"{self.checked - len(self.unknown)} of {self.checked} subsets coherent; dim theorem NOT verified"
        if self.noncoherent is None:
            return "no noncoherent subset found; dim theorem NOT verified"
        v = self.noncoherent
        return f"dim = {self.dim}; Phi = {v.phi.format(names)} {v.format(names)}; dim theorem verified"


def _lift(masks: Iterable[int], positions: Sequence[int], base: int) -> frozenset[int]:
    out = set()
    for m in masks:
        out.add(base | sum(1 << positions[k] for k in indices_of(m)))
    return frozenset(out)


def check_dimension_theorem(ring: Ring, ideal: MonomialIdeal | None = None,
                            catalog: Sequence[GradedModule] | None = None) -> DimensionReport:
    """dim S/I <= 1: every subset of V(I) is coherent.  dim S/I >= 2: exhibit a
    noncoherent subset built from the Bass levels of a deep catalog module."""
    n = ring.n
    ideal = ideal if ideal is not None else MonomialIdeal.zero(n)
    if ideal.n != n:
        raise InputError("ideal over the wrong ring")
    dim = dimension(ideal)
    spectrum = variety(ideal)
    report = DimensionReport(n, ideal, dim, spectrum)
    if dim <= 1:
        members = spectrum.sorted_masks()
        ok = True
        for size in range(len(members) + 1):
            for sub in combinations(members, size):
                v = coherence_verdict(PrimeSet(n, frozenset(sub)), [], spectrum)
                report.checked += 1
                if not v.coherent:
                    ok = False
                    report.unknown.append(v.phi)
        report.all_coherent = ok
        return report
    if ideal.is_zero():
        catalog = list(catalog) if catalog is not None else default_catalog(ring)
        for module in catalog:
            table = bass_table(module)
            for p in all_masks(n):
                row = table.rows[p]
                d = next((i for i, v in enumerate(row) if v), None)
                if d is None or d < 2:
                    continue
                phi = PrimeSet(n, table.level(d - 2) | table.level(d - 1))
                v = coherence_verdict(phi, catalog)
                if v.coherent:
                    raise InternalError(f"appendix construction produced a coherent set {phi!r}")
                if v.not_coherent:
                    report.noncoherent = v
                    return report
        return report
    # pass to S/P_F for a top-dimensional minimal prime: a B-coherent set pulls
    # back to a coherent subset of the spectrum of the quotient ring
    top = next(m for m in sorted(minimal_primes(ideal).masks, key=lambda m: (popcount(m), m))
               if n - popcount(m) == dim)
    positions = [i for i in range(n) if not (top >> i) & 1]
    sub_ring = Ring(tuple(ring.names[i] for i in positions), ring.q, ring.pad)
    inner = check_dimension_theorem(sub_ring, MonomialIdeal.zero(len(positions)),
                                    None if catalog is None else [])
    if inner.noncoherent is None:
        return report
    v = inner.noncoherent
    lifted = PrimeSet(n, _lift(v.phi.masks, positions, top))
    w = v.witness
    lw = Witness(f"{w.module} over S/({','.join(ring.names[i] for i in indices_of(top))})",
                 next(iter(_lift([w.prime], positions, top))), w.level,
                 _lift(w.lower_levels, positions, top), _lift(w.top_level, positions, top),
                 None, w.source)
    report.noncoherent = CoherenceVerdict(Status.NOT_COHERENT, lifted, Reason.WITNESS, lw)
    report.reduced_to = top
    return report
