"""Monomials, monomial ideals and the finite spectrum of monomial primes.

A monomial prime ``P_F = (x_i : i in F)`` is stored as a bitmask over the
variable indices; ``PrimeSet`` is a frozen set of such masks together with
the ambient variable count.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, InputError


def _check_same(n: int, m: int) -> None:
    if n != m:
        raise InputError(f"ambient mismatch: {n} variables vs {m} variables")


@dataclass(frozen=True, order=True)
class Monomial:
    exps: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exps)
        if any(e < 0 for e in exps):
            raise InputError(f"negative exponent in {exps}")
        object.__setattr__(self, "exps", exps)

    @classmethod
    def one(cls, n: int) -> "Monomial":
        return cls((0,) * n)

    @classmethod
    def var(cls, n: int, i: int, power: int = 1) -> "Monomial":
        e = [0] * n
        e[i] = power
        return cls(tuple(e))

    @property
    def n(self) -> int:
        return len(self.exps)

    @property
    def degree(self) -> int:
        return sum(self.exps)

    @property
    def support(self) -> int:
        """Bitmask of the variables that occur."""
        return sum(1 << i for i, e in enumerate(self.exps) if e)

    def is_one(self) -> bool:
        return not any(self.exps)

    def divides(self, other: "Monomial") -> bool:
        _check_same(self.n, other.n)
        return all(a <= b for a, b in zip(self.exps, other.exps))

    def __mul__(self, other: "Monomial") -> "Monomial":
        _check_same(self.n, other.n)
        return Monomial(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if not other.divides(self):
            raise InputError(f"{other} does not divide {self}")
        return Monomial(tuple(a - b for a, b in zip(self.exps, other.exps)))

    def lcm(self, other: "Monomial") -> "Monomial":
        _check_same(self.n, other.n)
        return Monomial(tuple(max(a, b) for a, b in zip(self.exps, other.exps)))

    def gcd(self, other: "Monomial") -> "Monomial":
        _check_same(self.n, other.n)
        return Monomial(tuple(min(a, b) for a, b in zip(self.exps, other.exps)))

    def format(self, names: Sequence[str]) -> str:
        parts = []
        for name, e in zip(names, self.exps):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"Monomial{self.exps}"


def _minimalize(gens: Iterable[Monomial]) -> tuple[Monomial, ...]:
    uniq = sorted(set(gens), key=lambda m: (m.degree, m.exps))
    keep: list[Monomial] = []
    for m in uniq:
        if not any(k.divides(m) for k in keep):
            keep.append(m)
    return tuple(sorted(keep, key=lambda m: (m.degree, tuple(-e for e in m.exps))))


@dataclass(frozen=True)
class MonomialIdeal:
    n: int
    gens: tuple[Monomial, ...]

    def __post_init__(self):
        for g in self.gens:
            _check_same(self.n, g.n)
        object.__setattr__(self, "gens", _minimalize(self.gens))

    @classmethod
    def zero(cls, n: int) -> "MonomialIdeal":
        return cls(n, ())

    @classmethod
    def unit(cls, n: int) -> "MonomialIdeal":
        return cls(n, (Monomial.one(n),))

    @classmethod
    def from_exponents(cls, n: int, exps: Iterable[Sequence[int]]) -> "MonomialIdeal":
        return cls(n, tuple(Monomial(tuple(e)) for e in exps))

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return any(g.is_one() for g in self.gens)

    def is_proper(self) -> bool:
        return not self.is_unit()

    def contains(self, m: Monomial) -> bool:
        _check_same(self.n, m.n)
        return any(g.divides(m) for g in self.gens)

    def __contains__(self, m: Monomial) -> bool:
        return self.contains(m)

    def contains_ideal(self, other: "MonomialIdeal") -> bool:
        _check_same(self.n, other.n)
        return all(self.contains(g) for g in other.gens)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        _check_same(self.n, other.n)
        return MonomialIdeal(self.n, self.gens + other.gens)

    def intersect(self, other: "MonomialIdeal") -> "MonomialIdeal":
        _check_same(self.n, other.n)
        return MonomialIdeal(self.n, tuple(a.lcm(b) for a in self.gens for b in other.gens))

    def max_exponents(self) -> tuple[int, ...]:
        if not self.gens:
            return (0,) * self.n
        return tuple(max(g.exps[i] for g in self.gens) for i in range(self.n))

    def is_squarefree(self) -> bool:
        return all(max(g.exps, default=0) <= 1 for g in self.gens)

    def format(self, names: Sequence[str]) -> str:
        if not self.gens:
            return "0"
        return ", ".join(g.format(names) for g in self.gens)

    def __repr__(self):
        return f"MonomialIdeal({[g.exps for g in self.gens]})"


def minimal_generators(gens: Iterable[Monomial], n: int | None = None) -> MonomialIdeal:
    gens = list(gens)
    if n is None:
        if not gens:
            raise InputError("ambient variable count needed for an empty generator set")
        n = gens[0].n
    for g in gens:
        _check_same(n, g.n)
    return MonomialIdeal(n, tuple(gens))


def colon(ideal: MonomialIdeal, m: Monomial) -> MonomialIdeal:
    """The ideal quotient ``(I : m)``."""
    _check_same(ideal.n, m.n)
    return MonomialIdeal(ideal.n, tuple(g / g.gcd(m) for g in ideal.gens))


def irreducible_decomposition(ideal: MonomialIdeal) -> tuple[MonomialIdeal, ...]:
    """Irredundant decomposition into ideals generated by pure powers."""
    if ideal.is_zero() or ideal.is_unit():
        raise DomainError("irreducible decomposition needs a proper nonzero ideal")
    out: set[MonomialIdeal] = set()
    stack = [ideal]
    while stack:
        cur = stack.pop()
        if cur.is_unit():
            continue
        split = next((g for g in cur.gens if bin(g.support).count("1") > 1), None)
        if split is None:
            out.add(cur)
            continue
        i = next(k for k, e in enumerate(split.exps) if e)
        power = Monomial.var(cur.n, i, split.exps[i])
        rest = split / power
        others = tuple(g for g in cur.gens if g != split)
        stack.append(MonomialIdeal(cur.n, others + (power,)))
        stack.append(MonomialIdeal(cur.n, others + (rest,)))
    comps = list(out)
    # irreducible monomial ideals are strongly irreducible: redundancy is containment
    irredundant = [c for c in comps if not any(o != c and c.contains_ideal(o) for o in comps)]
    return tuple(sorted(irredundant, key=lambda c: (c.gens, )))


def radical(ideal: MonomialIdeal) -> MonomialIdeal:
    if ideal.is_unit():
        raise DomainError("the unit ideal has no proper radical")
    return MonomialIdeal(
        ideal.n,
        tuple(Monomial(tuple(1 if e else 0 for e in g.exps)) for g in ideal.gens),
    )


# ---------------------------------------------------------------------------
# monomial primes and subsets of Spec*


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask >> i:
        if (mask >> i) & 1:
            out.append(i)
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class MonomialPrime:
    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise InputError(f"prime mask {self.mask} outside {self.n} variables")

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> "MonomialPrime":
        return cls(n, mask_of(indices))

    @classmethod
    def maximal(cls, n: int) -> "MonomialPrime":
        return cls(n, (1 << n) - 1)

    @property
    def variables(self) -> tuple[int, ...]:
        return indices_of(self.mask)

    @property
    def height(self) -> int:
        return popcount(self.mask)

    def ideal(self) -> MonomialIdeal:
        return MonomialIdeal(self.n, tuple(Monomial.var(self.n, i) for i in self.variables))

    def contains_ideal(self, ideal: MonomialIdeal) -> bool:
        """``I ⊆ P_F`` iff every generator involves a variable of F."""
        _check_same(self.n, ideal.n)
        return all(g.support & self.mask for g in ideal.gens)

    def __le__(self, other: "MonomialPrime") -> bool:  # type: ignore[override]
        _check_same(self.n, other.n)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "MonomialPrime") -> bool:  # type: ignore[override]
        return self <= other and self.mask != other.mask

    def format(self, names: Sequence[str]) -> str:
        return "{" + ",".join(names[i] for i in self.variables) + "}"

    def label(self, names: Sequence[str]) -> str:
        return ",".join(names[i] for i in self.variables)

    def __repr__(self):
        return f"P{set(self.variables) or '{}'}"


def height(p: MonomialPrime) -> int:
    return p.height


def all_masks(n: int) -> list[int]:
    """All subsets of the variables, by height and then numerically."""
    return sorted(range(1 << n), key=lambda m: (popcount(m), m))


@dataclass(frozen=True)
class PrimeSet:
    n: int
    masks: frozenset[int]

    def __post_init__(self):
        masks = frozenset(int(m) for m in self.masks)
        for m in masks:
            if m < 0 or m >> self.n:
                raise InputError(f"prime mask {m} outside {self.n} variables")
        object.__setattr__(self, "masks", masks)

    @classmethod
    def of(cls, n: int, primes: Iterable[MonomialPrime | int]) -> "PrimeSet":
        masks = []
        for p in primes:
            if isinstance(p, MonomialPrime):
                _check_same(n, p.n)
                masks.append(p.mask)
            else:
                masks.append(int(p))
        return cls(n, frozenset(masks))

    @classmethod
    def empty(cls, n: int) -> "PrimeSet":
        return cls(n, frozenset())

    @classmethod
    def full(cls, n: int) -> "PrimeSet":
        return cls(n, frozenset(range(1 << n)))

    def __iter__(self) -> Iterator[MonomialPrime]:
        for m in sorted(self.masks, key=lambda m: (popcount(m), m)):
            yield MonomialPrime(self.n, m)

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, p: MonomialPrime | int) -> bool:
        if isinstance(p, MonomialPrime):
            _check_same(self.n, p.n)
            return p.mask in self.masks
        return int(p) in self.masks

    def _other(self, other: "PrimeSet") -> frozenset[int]:
        _check_same(self.n, other.n)
        return other.masks

    def __or__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet(self.n, self.masks | self._other(other))

    def __and__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet(self.n, self.masks & self._other(other))

    def __sub__(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet(self.n, self.masks - self._other(other))

    def __le__(self, other: "PrimeSet") -> bool:
        return self.masks <= self._other(other)

    def sorted_masks(self) -> list[int]:
        return sorted(self.masks, key=lambda m: (popcount(m), m))

    def format(self, names: Sequence[str]) -> str:
        return ", ".join(MonomialPrime(self.n, m).format(names) for m in self.sorted_masks())

    def labels(self, names: Sequence[str]) -> list[str]:
        return [MonomialPrime(self.n, m).label(names) for m in self.sorted_masks()]

    def __repr__(self):
        return f"PrimeSet({[MonomialPrime(self.n, m) for m in self.sorted_masks()]})"


def associated_primes(ideal: MonomialIdeal) -> PrimeSet:
    """Ass(S/I) from the radicals of an irredundant irreducible decomposition."""
    if ideal.is_unit():
        return PrimeSet.empty(ideal.n)
    if ideal.is_zero():
        return PrimeSet(ideal.n, frozenset({0}))
    return PrimeSet(
        ideal.n,
        frozenset(mask_of(i for g in c.gens for i in indices_of(g.support))
                  for c in irreducible_decomposition(ideal)),
    )


def minimal_primes(ideal: MonomialIdeal) -> PrimeSet:
    if ideal.is_unit():
        return PrimeSet.empty(ideal.n)
    ass = associated_primes(ideal).masks
    return PrimeSet(ideal.n, frozenset(p for p in ass if not any(q != p and q & ~p == 0 for q in ass)))


def dimension(ideal: MonomialIdeal) -> int:
    """Krull dimension of S/I."""
    if ideal.is_unit():
        raise DomainError("S/I is zero for the unit ideal; its spectrum is empty")
    return max(ideal.n - popcount(p) for p in minimal_primes(ideal).masks)


def variety(ideal: MonomialIdeal) -> PrimeSet:
    """V(I) ∩ Spec*: the monomial primes containing I."""
    return PrimeSet(ideal.n, frozenset(
        m for m in range(1 << ideal.n) if all(g.support & m for g in ideal.gens)))


def box_monomials(upper: Sequence[int]) -> Iterator[Monomial]:
    """All monomials with exponent vector in ``[0, upper]``."""
    for e in product(*(range(u + 1) for u in upper)):
        yield Monomial(tuple(e))
