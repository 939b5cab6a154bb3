"""Supports of modules and bounded complexes, and the checks built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from . import field_linalg as fl
from .errors import DomainError, InputError, InternalError, SoundnessAlarm
from .graded_modules import (
    DegreeBox,
    GradedComplex,
    GradedModule,
    MulMap,
    Presented,
    Region,
    ShiftedComponent,
    SummandComplex,
    ZeroComponent,
    ZeroModule,
    free_resolution,
    homology,
    homology_dim,
    is_exact,
    shift,
    verify_complex,
)
from .homological_invariants import bass_table
from .monomial_core import (
    Monomial,
    MonomialIdeal,
    PrimeSet,
    all_masks,
    associated_primes,
    indices_of,
    variety,
)
from .spec_calculus import CoherenceVerdict


@dataclass(frozen=True)
class SupportReport:
    value: PrimeSet
    routes: dict[str, PrimeSet] = field(default_factory=dict)


def _agree(routes: dict[str, PrimeSet], what: str) -> PrimeSet:
    vals = list(routes.values())
    if any(v != vals[0] for v in vals[1:]):
        shown = {k: sorted(v.masks) for k, v in routes.items()}
        raise InternalError(f"support routes disagree for {what}: {shown}")
    return vals[0]


# ---------------------------------------------------------------------------
# modules


def annihilator(module: Presented) -> MonomialIdeal:
    """Monomial annihilator of a finitely presented module, found degreewise.

    If x^m kills M then so does x^min(m, top - bottom): beyond ``top`` every
    variable acts injectively, so exponents never need to exceed the spread of
    the presentation.
    """
    if not isinstance(module, Presented) or module.inverted:
        raise DomainError("the annihilator route needs a finitely presented module")
    n = module.n
    if module.is_zero():
        return MonomialIdeal.unit(n)
    lo, hi = module.bottom, module.top
    width = tuple(b - a for a, b in zip(lo, hi))
    degrees = list(DegreeBox(lo, hi).degrees())
    found: list[Monomial] = []
    for e in sorted(product(*(range(w + 1) for w in width)), key=lambda e: (sum(e), e)):
        m = Monomial(e)
        if any(g.divides(m) for g in found):
            continue
        if all(not module.mul(d, e).any() for d in degrees if module.dim(d)):
            found.append(m)
    return MonomialIdeal(n, tuple(found))


def tor_support(module: Presented) -> PrimeSet:
    """``{P : Tor_*(M, k(P)) != 0}`` from the minimal free resolution.

    Tensoring with k(P) keeps exactly the entries whose monomial avoids the
    variables of P, and splits the complex by the P-part of the generator
    degrees.
    """
    res = free_resolution(module)
    n = module.n
    q = module.q
    out = set()
    for mask in all_masks(n):
        F = indices_of(mask)
        blocks: dict[tuple[int, ...], dict[int, list[int]]] = {}
        for i, shifts in res.shifts.items():
            for j, a in enumerate(shifts):
                blocks.setdefault(tuple(a[k] for k in F), {}).setdefault(i, []).append(j)
        nonzero = False
        for members in blocks.values():
            for i, cols in members.items():
                dim = len(cols)
                out_rank = in_rank = 0
                if i in res.mats and i + 1 in members:
                    out_rank = fl.rank(res.mats[i][np.ix_(members[i + 1], cols)] % q, q)
                if i - 1 in res.mats and i - 1 in members:
                    in_rank = fl.rank(res.mats[i - 1][np.ix_(cols, members[i - 1])] % q, q)
                if dim - out_rank - in_rank:
                    nonzero = True
                    break
            if nonzero:
                break
        if nonzero:
            out.add(mask)
    return PrimeSet(n, frozenset(out))


def supp_module(module: GradedModule) -> SupportReport:
    table = bass_table(module)
    routes = {"bass": PrimeSet(module.n, table.support())}
    if isinstance(module, Presented) and not module.inverted:
        routes["ann"] = variety(annihilator(module))
        routes["tor"] = tor_support(module)
    return SupportReport(_agree(routes, module.describe()), routes)


def ass_module(module: GradedModule) -> PrimeSet:
    """``{P : mu_0(P, M) != 0}``; for cyclic modules also from the ideal."""
    ass = PrimeSet(module.n, bass_table(module).level(0))
    if isinstance(module, Presented) and module.ideal is not None:
        other = associated_primes(module.ideal)
        if other != ass:
            raise InternalError(f"Ass routes disagree for {module.describe()}: {ass} vs {other}")
    return ass


# ---------------------------------------------------------------------------
# complexes


def is_injective_complex(X: SummandComplex) -> bool:
    return all(isinstance(m, Region) and m.kind == "injective"
               for ms in X.terms.values() for m in ms)


def check_minimal(X: SummandComplex) -> None:
    """No nonzero component between E(S/P_F)(s) and E(S/P_F)(t) with s and t
    agreeing on F: such a component is an isomorphism onto a summand."""
    for i, comps in X.maps.items():
        for (t, s), c in comps.items():
            a, b = X.terms[i][s], X.terms[i + 1][t]
            if a.injective_mask != b.injective_mask:
                continue
            if a.hi == b.hi and getattr(c, "c", 0) % X.q:
                raise DomainError(f"complex is not minimal: unit component in d^{i} ({s} -> {t})")


def _e(n: int, T: Sequence[int]) -> tuple[int, ...]:
    return tuple(1 if k in T else 0 for k in range(n))


def fiber_complex(X: SummandComplex, mask: int) -> SummandComplex:
    """Total complex of ``Hom(K(x_F), X_P)``."""
    n = X.n
    loc = X.localize(mask)
    vars_ = indices_of(mask)
    subsets = [T for j in range(len(vars_) + 1) for T in combinations(vars_, j)]
    terms: dict[int, list] = {}
    where: dict[tuple[int, int, tuple[int, ...]], tuple[int, int]] = {}
    for j in loc.indices:
        for T in subsets:
            for s, m in enumerate(loc.terms[j]):
                idx = j + len(T)
                lst = terms.setdefault(idx, [])
                where[(j, s, T)] = (idx, len(lst))
                lst.append(shift(m, _e(n, T)))
    maps: dict[int, dict] = {}
    for j in loc.indices:
        for T in subsets:
            sign = -1 if len(T) % 2 else 1
            for (t, s), comp in loc.maps.get(j, {}).items():
                if isinstance(comp, ZeroComponent):
                    continue
                src, tgt = where[(j, s, T)], where[(j + 1, t, T)]
                maps.setdefault(src[0], {})[(tgt[1], src[1])] = ShiftedComponent(comp, _e(n, T), sign)
            for v in vars_:
                if v in T:
                    continue
                U = tuple(sorted(T + (v,)))
                ksign = (-1) ** sum(1 for u in T if u < v)
                for s, m in enumerate(loc.terms[j]):
                    if isinstance(m, ZeroModule):
                        continue
                    src, tgt = where[(j, s, T)], where[(j, s, U)]
                    maps.setdefault(src[0], {})[(tgt[1], src[1])] = MulMap.make(m, _e(n, T), _e(n, U), ksign)
    return SummandComplex(X.ring, {i: tuple(v) for i, v in terms.items()}, maps, f"fiber({X.label})")


def _fiber_nonzero(X: SummandComplex, mask: int) -> bool:
    T = fiber_complex(X, mask)
    box = T.box()
    lower = tuple(a if (mask >> i) & 1 else b for i, (a, b) in enumerate(zip(box.lower, box.upper)))
    window = DegreeBox(lower, box.upper)
    return any(homology_dim(T, i, d) for d in window.degrees() for i in T.indices)


@dataclass(frozen=True)
class ComplexSupportReport:
    value: PrimeSet
    routes: dict[str, PrimeSet] = field(default_factory=dict)


def supp_complex_report(X: SummandComplex) -> ComplexSupportReport:
    if not isinstance(X, SummandComplex):
        X = X.as_summands()
    n = X.n
    routes = {"fiber": PrimeSet(n, frozenset(m for m in all_masks(n) if _fiber_nonzero(X, m)))}
    if is_injective_complex(X):
        check_minimal(X)
        routes["ass_union"] = PrimeSet(n, frozenset(
            m.injective_mask for ms in X.terms.values() for m in ms))
    return ComplexSupportReport(_agree(routes, X.label or "complex"), routes)


def supp_complex(X) -> PrimeSet:
    """Foxby support ``{P : X ⊗^L k(P) != 0}``."""
    return supp_complex_report(X).value


def supp_cohomology(X: GradedComplex) -> PrimeSet:
    out = frozenset()
    for i in X.indices:
        H = homology(X, i)
        if H.is_zero():
            continue
        out |= bass_table(H).support()
    return PrimeSet(X.n, out)


@dataclass(frozen=True)
class MainCheckReport:
    phi: PrimeSet
    supp_x: PrimeSet
    supp_h: PrimeSet
    verdict: CoherenceVerdict | None = None

    @property
    def relation(self) -> str:
        x_in = self.supp_x <= self.phi
        h_in = self.supp_h <= self.phi
        if x_in != h_in:
            return "violation"
        return "subset" if x_in else "outside"

    @property
    def realizes_failure(self) -> bool:
        return self.supp_x <= self.phi and not self.supp_h <= self.phi

    def to_json(self, names: Sequence[str]) -> dict:
        return {
            "suppX": self.supp_x.labels(names),
            "suppH": self.supp_h.labels(names),
            "phi": self.phi.labels(names),
            "relation": self.relation,
        }


def theorem_main_check(phi: PrimeSet, X, verdict: CoherenceVerdict | None = None) -> MainCheckReport:
    """Compare ``Supp X ⊆ Φ`` with ``Supp H*X ⊆ Φ``; a mismatch under a
    Coherent verdict raises a soundness alarm."""
    if phi.n != X.n:
        raise InputError("Φ and the complex live over different rings")
    report = MainCheckReport(phi, supp_complex(X), supp_cohomology(X), verdict)
    if verdict is not None and verdict.coherent and report.relation == "violation":
        raise SoundnessAlarm(f"Coherent verdict for {phi!r} contradicted by {X.label or 'complex'}")
    return report


# ---------------------------------------------------------------------------
# closure probes


@dataclass(frozen=True)
class ProbeResult:
    kind: str
    supports: tuple[PrimeSet, ...]
    ass: tuple[PrimeSet, ...]
    holds: bool
    detail: str = ""


def _term_module(X: SummandComplex, i: int) -> list[GradedModule]:
    return [m for m in X.terms.get(i, ()) if not isinstance(m, ZeroModule)]


def _union(sets: Sequence[PrimeSet], n: int) -> PrimeSet:
    out = frozenset()
    for s in sets:
        out |= s.masks
    return PrimeSet(n, out)


def closure_probes(phi: PrimeSet, sequences: Sequence[SummandComplex],
                   verdict: CoherenceVerdict | None = None) -> list[ProbeResult]:
    """Five-term closure (for a coherent Φ) and Ass bounds on short exact
    sequences.  Each sequence is a complex verified exact on its box."""
    results = []
    for X in sequences:
        if X.n != phi.n:
            raise InputError("sequence over a different ring")
        verify_complex(X)
        if not is_exact(X):
            raise InputError(f"sequence {X.label or ''} is not exact")
        idx = [i for i in X.indices if _term_module(X, i)]
        supports = tuple(_union([supp_module(m).value for m in _term_module(X, i)], X.n) for i in idx)
        ass = tuple(_union([ass_module(m) for m in _term_module(X, i)], X.n) for i in idx)
        if len(idx) == 3:
            a, b, c = ass
            holds = a <= b and b <= (a | c)
            results.append(ProbeResult("short_exact", supports, ass, holds))
            if not holds:
                raise InternalError("Ass bounds fail on a short exact sequence")
        elif len(idx) == 5:
            outer = [supports[k] for k in (0, 1, 3, 4)]
            premise = all(s <= phi for s in outer)
            holds = (not premise) or supports[2] <= phi
            results.append(ProbeResult("five_term", supports, ass, holds))
            if verdict is not None and verdict.coherent and not holds:
                raise SoundnessAlarm("five-term closure fails for a coherent Φ")
        else:
            raise InputError("closure probes take short exact or five-term exact sequences")
    return results
