"""Bass numbers, Betti numbers, localization and depth.

Bass numbers come from Koszul cohomology of the localized module,
``mu_i(P_F, M) = dim H^i(Hom(K(x_F), M_P))`` summed over the window of
F-degrees.  Depth is computed three ways (Koszul homology, Ext against a
resolution of ``S/a``, Auslander-Buchsbaum) and the routes must agree.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, InputError, InternalError, StabilityError
from .graded_modules import (
    DegreeBox,
    GradedModule,
    Presented,
    ZeroModule,
    free_resolution,
    hom_into,
    homology_dim,
    koszul_cochain,
    koszul_complex,
    minimalize,
    tensor_with,
)
from .monomial_core import (
    MonomialIdeal,
    MonomialPrime,
    all_masks,
    dimension,
    minimal_primes,
    popcount,
    variety,
)

INF = math.inf
MAX_WITNESS_VARIABLES = 12


def _prime(module: GradedModule, p: MonomialPrime | int) -> MonomialPrime:
    if isinstance(p, MonomialPrime):
        if p.n != module.n:
            raise InputError(f"prime over {p.n} variables for a module over {module.n}")
        return p
    return MonomialPrime(module.n, int(p))


def localize(module: GradedModule, p: MonomialPrime | int) -> GradedModule:
    """``M_P``: every variable outside P is inverted."""
    p = _prime(module, p)
    return module.localize(p.mask)


# ---------------------------------------------------------------------------
# Bass numbers


def _window(box: DegreeBox, mask: int, fixed: str) -> DegreeBox:
    lower, upper = [], []
    for i, (a, b) in enumerate(zip(box.lower, box.upper)):
        if (mask >> i) & 1:
            lower.append(a)
            upper.append(b)
        else:
            v = b if fixed == "upper" else a
            lower.append(v)
            upper.append(v)
    return DegreeBox(tuple(lower), tuple(upper))


def _bass_window_sums(C, mask: int, window: DegreeBox, levels: int) -> list[int]:
    mu = [0] * (levels + 1)
    for d in window.degrees():
        for j in range(levels + 1):
            mu[j] += homology_dim(C, j, d)
    return mu


def bass_numbers(module: GradedModule, p: MonomialPrime | int) -> list[int]:
    """``[mu_0, ..., mu_h]`` for ``h = height(P)``."""
    p = _prime(module, p)
    key = ("bass", p.mask)
    cache = module._cache
    if key in cache:
        return list(cache[key])
    h = p.height
    loc = module.localize(p.mask)
    if isinstance(loc, ZeroModule) or loc.is_zero():
        row = [0] * (h + 1)
        cache[key] = tuple(row)
        return row
    C = koszul_cochain(loc, p.mask)
    box = C.box()
    window = _window(box, p.mask, "upper")
    row = _bass_window_sums(C, p.mask, window, h)
    # cohomology is killed by x_F, so it must vanish on the faces of the window
    for i in range(module.n):
        if not (p.mask >> i) & 1:
            continue
        for side in (window.lower[i], window.upper[i]):
            lo = list(window.lower)
            hi = list(window.upper)
            lo[i] = hi[i] = side
            for d in DegreeBox(tuple(lo), tuple(hi)).degrees():
                if any(homology_dim(C, j, d) for j in range(h + 1)):
                    raise StabilityError(
                        f"Koszul cohomology of {module.describe()} at {p!r} reaches the window boundary")
    if p.mask != (1 << module.n) - 1:
        other = _bass_window_sums(C, p.mask, _window(box, p.mask, "lower"), h)
        if other != row:
            raise StabilityError(f"Bass numbers of {module.describe()} at {p!r} vary outside P")
    cache[key] = tuple(row)
    return row


@dataclass(frozen=True)
class BassTable:
    module: str
    n: int
    rows: dict[int, tuple[int, ...]]

    def row(self, p: MonomialPrime | int) -> tuple[int, ...]:
        mask = p.mask if isinstance(p, MonomialPrime) else int(p)
        return self.rows[mask]

    def level(self, i: int) -> frozenset[int]:
        """Primes P with ``mu_i(P) != 0``; the associated primes of the i-th
        term of a minimal injective resolution."""
        return frozenset(m for m, r in self.rows.items() if i < len(r) and r[i])

    def support(self) -> frozenset[int]:
        return frozenset(m for m, r in self.rows.items() if any(r))

    def to_json(self, names: Sequence[str]) -> list[dict]:
        out = []
        for m in all_masks(self.n):
            label = MonomialPrime(self.n, m).label(names)
            out.append({"prime": label, "mu": list(self.rows[m])})
        return out

    def dumps(self, names: Sequence[str]) -> str:
        return json.dumps(self.to_json(names))


def bass_table(module: GradedModule) -> BassTable:
    rows = {m: tuple(bass_numbers(module, m)) for m in all_masks(module.n)}
    return BassTable(module.describe(), module.n, rows)


# ---------------------------------------------------------------------------
# Betti numbers


def betti_numbers(module: Presented) -> dict[tuple[int, tuple[int, ...]], int]:
    """``(i, multidegree) -> beta_{i, a}`` from the minimal free resolution."""
    res = free_resolution(module)
    out: dict[tuple[int, tuple[int, ...]], int] = {}
    for i, shifts in res.shifts.items():
        for a in shifts:
            out[(-i, a)] = out.get((-i, a), 0) + 1
    return out


def betti_vector(module: Presented) -> list[int]:
    res = free_resolution(module)
    if not res.shifts or not any(res.shifts.values()):
        return []
    p = max(-i for i in res.shifts)
    return [len(res.shifts.get(-i, ())) for i in range(p + 1)]


def projective_dimension(module: Presented, p: MonomialPrime | int | None = None) -> int:
    """Projective dimension of ``M`` (or of ``M_P`` over ``S_P``)."""
    res = free_resolution(module)
    if p is not None:
        res = minimalize(res.localize(_prime(module, p).mask))
    nonzero = [-i for i, s in res.shifts.items() if s]
    if not nonzero:
        raise DomainError("the zero module has no projective dimension")
    return max(nonzero)


# ---------------------------------------------------------------------------
# depth


@dataclass(frozen=True)
class DepthReport:
    value: float
    routes: dict[str, float] = field(default_factory=dict)

    def __int__(self):
        return int(self.value)


def _agree(routes: dict[str, float], what: str) -> float:
    vals = set(routes.values())
    if len(vals) != 1:
        raise InternalError(f"depth routes disagree for {what}: {routes}")
    return vals.pop()


def _nonvanishing(X, i: int) -> bool:
    return any(homology_dim(X, i, d) for d in X.box().degrees())


def depth_ideal(a: MonomialIdeal, module: GradedModule) -> DepthReport:
    """``a``-depth of ``M`` by Koszul homology and by Ext vanishing."""
    if a.n != module.n:
        raise InputError(f"ideal over {a.n} variables for a module over {module.n}")
    if a.is_unit():
        raise DomainError("aM = M for the unit ideal; depth is undefined")
    if module.is_zero():
        return DepthReport(INF, {"koszul": INF, "ext": INF})
    if a.is_zero():
        return DepthReport(0, {"koszul": 0, "ext": 0})
    ring = module.ring
    r = len(a.gens)
    K = tensor_with(koszul_complex(ring, a.gens), module)
    if not _nonvanishing(K, 0):
        raise DomainError("aM = M; depth is undefined")
    top = max(i for i in range(r + 1) if _nonvanishing(K, -i))
    koszul = r - top
    F = free_resolution(Presented.quotient(ring, a))
    H = hom_into(F, module)
    ext = next((j for j in sorted(H.indices) if _nonvanishing(H, j)), INF)
    routes = {"koszul": koszul, "ext": ext}
    return DepthReport(_agree(routes, f"depth({a!r}, {module.describe()})"), routes)


def depth_at_prime_report(module: GradedModule, p: MonomialPrime | int,
                          cross_check: bool = True) -> DepthReport:
    p = _prime(module, p)
    loc = module.localize(p.mask)
    if isinstance(loc, ZeroModule) or loc.is_zero():
        raise DomainError(f"{module.describe()} vanishes at {p!r}")
    row = bass_numbers(module, p)
    bass = next((i for i, v in enumerate(row) if v), None)
    if bass is None:
        raise InternalError(f"all Bass numbers of a nonzero localization vanish at {p!r}")
    routes: dict[str, float] = {"bass": bass}
    if cross_check:
        rep = depth_ideal(p.ideal(), loc)
        routes.update(rep.routes)
        if isinstance(module, Presented) and not module.inverted:
            routes["auslander_buchsbaum"] = p.height - projective_dimension(module, p)
    return DepthReport(_agree(routes, f"depth of {module.describe()} at {p!r}"), routes)


def depth_at_prime(module: GradedModule, p: MonomialPrime | int, cross_check: bool = True) -> int:
    """``depth M_P = inf{i : mu_i(P, M) != 0}``."""
    return int(depth_at_prime_report(module, p, cross_check).value)


def local_dimension(ideal: MonomialIdeal, p: MonomialPrime) -> int:
    """``dim (S/I)_P``: the longest chain of monomial primes from a minimal
    prime of I up to P."""
    mins = [q for q in minimal_primes(ideal).masks if q & ~p.mask == 0]
    if not mins:
        raise DomainError(f"{p!r} does not contain the ideal")
    return max(p.height - popcount(q) for q in mins)


def find_depth_dim_prime(ideal: MonomialIdeal, ring=None) -> MonomialPrime:
    """A prime P ⊇ I with ``depth (S/I)_P = dim (S/I)_P = dim S/I - 1``."""
    from .ring import Ring

    ring = ring or Ring.polynomial(ideal.n)
    if ideal.n > MAX_WITNESS_VARIABLES:
        raise InputError(f"search over more than {MAX_WITNESS_VARIABLES} variables is refused")
    dim = dimension(ideal)
    if dim < 1:
        raise DomainError("dimension must be at least one")
    module = Presented.quotient(ring, ideal)
    for m in variety(ideal).sorted_masks():
        p = MonomialPrime(ideal.n, m)
        if local_dimension(ideal, p) != dim - 1:
            continue
        if depth_at_prime(module, p, cross_check=False) == dim - 1:
            return p
    raise InternalError(f"no prime of depth = dimension = {dim - 1} for {ideal!r}")


def find_deep_module(n: int, catalog: Sequence[GradedModule]):
    """First ``(M, P, d)`` in the catalog with ``depth M_P = max(2, n - 1)``,
    or ``None`` when the catalog has no such member."""
    if n < 2:
        raise DomainError("deep modules are searched for n >= 2")
    if n > MAX_WITNESS_VARIABLES:
        raise InputError(f"search over more than {MAX_WITNESS_VARIABLES} variables is refused")
    target = max(2, n - 1)
    for module in catalog:
        if module.n != n:
            raise InputError("catalog module over the wrong ring")
        for m in all_masks(n):
            if popcount(m) < target:
                continue
            loc = module.localize(m)
            if isinstance(loc, ZeroModule) or loc.is_zero():
                continue
            if depth_at_prime(module, m, cross_check=False) == target:
                return module, MonomialPrime(n, m), target
    return None
