"""ℤⁿ-graded modules and bounded complexes, evaluated one multidegree at a time.

Every module here is *box-determined*: it carries a finite degree box such
that outside the box, in each direction, the module is either zero or the
variable acts by isomorphisms.  Evaluating at a degree outside the box is
therefore the same as evaluating at the clamped degree, and all homological
computations reduce to finitely many small matrices over F_q.

Module kinds
    Presented       cokernel of a monomial-scalar map of free modules
    Region          one-dimensional pieces on an intersection of half-spaces;
                    covers graded injective hulls E(S/P_F)(s) and localized
                    free modules S_F(s)
    Shift, DirectSum, BoxModule, ZeroModule
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import field_linalg as fl
from .errors import DomainError, InputError, InternalError, ResourceError, StabilityError
from .monomial_core import Monomial, MonomialIdeal, indices_of
from .ring import Ring

Degree = tuple[int, ...]

TAYLOR_MAX_GENERATORS = 20


def _add(d: Degree, u: Sequence[int]) -> Degree:
    return tuple(a + b for a, b in zip(d, u))


def _sub(d: Degree, u: Sequence[int]) -> Degree:
    return tuple(a - b for a, b in zip(d, u))


def _unit(n: int, i: int) -> Degree:
    return tuple(1 if k == i else 0 for k in range(n))


def _leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _leq_outside(a: Sequence[int], b: Sequence[int], inverted: int) -> bool:
    return all(x <= y for k, (x, y) in enumerate(zip(a, b)) if not (inverted >> k) & 1)


# ---------------------------------------------------------------------------
# degree boxes


@dataclass(frozen=True)
class DegreeBox:
    lower: Degree
    upper: Degree
    low_flags: tuple[str, ...] = ()
    high_flags: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise InputError("box corners of different lengths")
        if not _leq(self.lower, self.upper):
            raise InputError(f"empty box {self.lower}..{self.upper}")

    @property
    def n(self) -> int:
        return len(self.lower)

    def degrees(self) -> Iterator[Degree]:
        return product(*(range(a, b + 1) for a, b in zip(self.lower, self.upper)))

    def size(self) -> int:
        s = 1
        for a, b in zip(self.lower, self.upper):
            s *= b - a + 1
        return s

    def clamp(self, d: Sequence[int]) -> Degree:
        return tuple(min(max(x, a), b) for x, a, b in zip(d, self.lower, self.upper))

    def hull(self, other: "DegreeBox") -> "DegreeBox":
        return DegreeBox(
            tuple(min(a, b) for a, b in zip(self.lower, other.lower)),
            tuple(max(a, b) for a, b in zip(self.upper, other.upper)),
        )

    def shifted(self, u: Sequence[int]) -> "DegreeBox":
        return DegreeBox(_add(self.lower, u), _add(self.upper, u), self.low_flags, self.high_flags)

    def grown(self, k: int) -> "DegreeBox":
        return DegreeBox(tuple(a - k for a in self.lower), tuple(b + k for b in self.upper))

    def as_ranges(self) -> list[tuple[int, int]]:
        return list(zip(self.lower, self.upper))


def hull_of(boxes: Iterable[DegreeBox], n: int) -> DegreeBox:
    out = None
    for b in boxes:
        out = b if out is None else out.hull(b)
    if out is None:
        return DegreeBox((0,) * n, (0,) * n)
    return DegreeBox(out.lower, out.upper)


# ---------------------------------------------------------------------------
# modules


class GradedModule:
    """Common interface.  Subclasses provide ``dim``, ``_action``, ``_base_box``
    and ``localize``."""

    ring: Ring
    label: str

    @cached_property
    def _cache(self) -> dict:
        return {}

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def q(self) -> int:
        return self.ring.q

    def dim(self, d: Degree) -> int:
        raise NotImplementedError

    def _action(self, d: Degree, i: int) -> np.ndarray:
        raise NotImplementedError

    def action(self, d: Degree, i: int) -> np.ndarray:
        key = ("act", d, i)
        c = self._cache
        if key not in c:
            c[key] = self._action(tuple(d), i)
        return c[key]

    def mul(self, d: Degree, m: Sequence[int]) -> np.ndarray:
        """Multiplication by the monomial with exponent vector ``m`` out of degree ``d``."""
        d = tuple(d)
        m = tuple(m)
        key = ("mul", d, m)
        c = self._cache
        if key in c:
            return c[key]
        if not any(m):
            out = fl.identity(self.dim(d))
        else:
            i = next(k for k, e in enumerate(m) if e)
            rest = tuple(e - (1 if k == i else 0) for k, e in enumerate(m))
            step = self.action(d, i)
            out = fl.matmul(self.mul(_add(d, _unit(self.n, i)), rest), step, self.q)
        c[key] = out
        return out

    def _base_box(self) -> DegreeBox:
        raise NotImplementedError

    def box(self) -> DegreeBox:
        return self._base_box()

    def localize(self, mask: int) -> "GradedModule":
        raise NotImplementedError

    def is_zero(self) -> bool:
        return all(self.dim(d) == 0 for d in self.box().degrees())

    def describe(self) -> str:
        return self.label or type(self).__name__


def evaluate(module: GradedModule, d: Sequence[int]) -> tuple[int, list[np.ndarray]]:
    """Dimension of ``M_d`` and the maps ``x_i : M_d -> M_{d+e_i}``."""
    d = tuple(d)
    if len(d) != module.n:
        raise InputError(f"degree {d} has the wrong length for {module.n} variables")
    return module.dim(d), [module.action(d, i) for i in range(module.n)]


@dataclass(frozen=True, eq=False)
class ZeroModule(GradedModule):
    ring: Ring
    label: str = "0"

    def dim(self, d):
        return 0

    def _action(self, d, i):
        return fl.zeros(0, 0)

    def _base_box(self):
        return DegreeBox((0,) * self.n, (0,) * self.n)

    def localize(self, mask):
        return self

    def is_zero(self):
        return True


@dataclass(frozen=True)
class Region(GradedModule):
    """``k`` in every degree of ``{d : lo_i <= d_i <= hi_i}`` (``None`` = unbounded),
    with every variable acting as the identity inside the region."""

    ring: Ring
    lo: tuple[int | None, ...]
    hi: tuple[int | None, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.lo) != self.n or len(self.hi) != self.n:
            raise InputError("region bounds have the wrong length")
        for a, b in zip(self.lo, self.hi):
            if a is not None and b is not None and a > b:
                raise InputError("empty region; use ZeroModule")

    @classmethod
    def injective(cls, ring: Ring, mask: int, shift: Sequence[int] | None = None, label: str = "") -> "Region":
        """E(S/P_F)(shift): degrees with d_i <= shift_i for i in F."""
        shift = tuple(shift) if shift is not None else (0,) * ring.n
        hi = tuple(shift[i] if (mask >> i) & 1 else None for i in range(ring.n))
        return cls(ring, (None,) * ring.n, hi, label)

    @classmethod
    def localized_free(cls, ring: Ring, mask: int, shift: Sequence[int] | None = None, label: str = "") -> "Region":
        """S with the variables of ``mask`` inverted, generated in degree ``shift``."""
        shift = tuple(shift) if shift is not None else (0,) * ring.n
        lo = tuple(None if (mask >> i) & 1 else shift[i] for i in range(ring.n))
        return cls(ring, lo, (None,) * ring.n, label)

    @classmethod
    def free(cls, ring: Ring, shift: Sequence[int] | None = None, label: str = "") -> "Region":
        return cls.localized_free(ring, 0, shift, label)

    @property
    def kind(self) -> str:
        if all(a is None for a in self.lo):
            return "injective"
        if all(b is None for b in self.hi):
            return "locfree"
        return "region"

    @property
    def injective_mask(self) -> int:
        """F for E(S/P_F); only meaningful for ``kind == 'injective'``."""
        return sum(1 << i for i, b in enumerate(self.hi) if b is not None)

    @property
    def inverted_mask(self) -> int:
        return sum(1 << i for i, a in enumerate(self.lo) if a is None)

    def contains(self, d: Degree) -> bool:
        for x, a, b in zip(d, self.lo, self.hi):
            if a is not None and x < a:
                return False
            if b is not None and x > b:
                return False
        return True

    def dim(self, d):
        return 1 if self.contains(d) else 0

    def _action(self, d, i):
        src = self.contains(d)
        tgt = self.contains(_add(d, _unit(self.n, i)))
        out = fl.zeros(int(tgt), int(src))
        if src and tgt:
            out[0, 0] = 1
        return out

    def _base_box(self):
        pad = self.ring.pad
        lower, upper = [], []
        for a, b in zip(self.lo, self.hi):
            if a is not None and b is not None:
                lower.append(a - pad)
                upper.append(b + pad)
            elif a is not None:
                lower.append(a - pad)
                upper.append(a + pad)
            elif b is not None:
                lower.append(b - 1 - pad)
                upper.append(b + pad)
            else:
                lower.append(-pad)
                upper.append(pad)
        return DegreeBox(tuple(lower), tuple(upper))

    def localize(self, mask):
        lo = list(self.lo)
        for j in range(self.n):
            if not (mask >> j) & 1:
                if self.hi[j] is not None:
                    return ZeroModule(self.ring)
                lo[j] = None
        return Region(self.ring, tuple(lo), self.hi, self.label)

    def is_zero(self):
        return False


@dataclass(frozen=True)
class Presented(GradedModule):
    """``coker(⊕ S(-b_k) -> ⊕ S(-a_j))``; ``matrix[j][k]`` is the scalar in front of
    ``x^(b_k - a_j)``.  Variables in ``inverted`` are inverted (a localization)."""

    ring: Ring
    gens: tuple[Degree, ...]
    rels: tuple[Degree, ...]
    matrix: tuple[tuple[int, ...], ...]
    inverted: int = 0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        q = self.ring.q
        gens = tuple(tuple(int(x) for x in g) for g in self.gens)
        rels = tuple(tuple(int(x) for x in r) for r in self.rels)
        mat = tuple(tuple(int(c) % q for c in row) for row in self.matrix)
        if any(len(g) != self.n for g in gens + rels):
            raise InputError("presentation degree of the wrong length")
        if len(mat) != len(gens) or any(len(row) != len(rels) for row in mat):
            raise InputError("relation matrix shape does not match generators and relations")
        for j, row in enumerate(mat):
            for k, c in enumerate(row):
                if c and not _leq(gens[j], rels[k]):
                    raise InputError(
                        f"relation {k} has a nonzero entry on generator {j} of higher degree")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "rels", rels)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def quotient(cls, ring: Ring, ideal: MonomialIdeal, shift: Sequence[int] | None = None,
                 label: str = "") -> "Presented":
        if ideal.n != ring.n:
            raise InputError(f"ideal over {ideal.n} variables in a ring with {ring.n}")
        shift = tuple(shift) if shift is not None else (0,) * ring.n
        rels = tuple(_add(shift, g.exps) for g in ideal.gens)
        return cls(ring, (shift,), rels, ((1,) * len(rels),), 0, label)

    @classmethod
    def free(cls, ring: Ring, shifts: Sequence[Sequence[int]], label: str = "") -> "Presented":
        shifts = tuple(tuple(s) for s in shifts)
        return cls(ring, shifts, (), tuple(() for _ in shifts), 0, label)

    @cached_property
    def ideal(self) -> MonomialIdeal | None:
        """The ideal I when this is S/I(shift) on one generator, else None."""
        if len(self.gens) != 1 or self.inverted:
            return None
        a = self.gens[0]
        gens = []
        for k, b in enumerate(self.rels):
            if self.matrix[0][k]:
                gens.append(Monomial(_sub(b, a)))
        return MonomialIdeal(self.n, tuple(gens))

    @cached_property
    def top(self) -> Degree:
        degs = self.gens + self.rels
        if not degs:
            return (0,) * self.n
        return tuple(max(d[i] for d in degs) for i in range(self.n))

    @cached_property
    def bottom(self) -> Degree:
        if not self.gens:
            return (0,) * self.n
        return tuple(min(d[i] for d in self.gens) for i in range(self.n))

    @cached_property
    def _mat(self) -> np.ndarray:
        return fl.as_matrix(self.matrix, self.q, (len(self.gens), len(self.rels)))

    def clamp(self, d: Degree) -> Degree:
        if not self.inverted:
            return d
        return tuple(self.top[i] if (self.inverted >> i) & 1 else x for i, x in enumerate(d))

    def active(self, d: Degree) -> list[int]:
        d = self.clamp(d)
        return [j for j, a in enumerate(self.gens) if _leq(a, d)]

    def slice(self, d: Degree) -> tuple[list[int], np.ndarray, np.ndarray]:
        """``(active generators, projection cover -> M_d, lift M_d -> cover)``."""
        d = self.clamp(tuple(d))
        key = ("slice", d)
        c = self._cache
        if key in c:
            return c[key]
        q = self.q
        act = [j for j, a in enumerate(self.gens) if _leq(a, d)]
        rels = [k for k, b in enumerate(self.rels) if _leq(b, d)]
        width = len(act)
        if rels and act:
            r, piv = fl.rref(self._mat[np.ix_(act, rels)].T, q)
        else:
            r, piv = fl.zeros(0, width), []
        pivset = set(piv)
        free = [c_ for c_ in range(width) if c_ not in pivset]
        proj = fl.zeros(len(free), width)
        pos = {c_: i for i, c_ in enumerate(free)}
        for c_ in free:
            proj[pos[c_], c_] = 1
        for row, p in enumerate(piv):
            for c_ in free:
                proj[pos[c_], p] = (-r[row, c_]) % q
        lift = fl.zeros(width, len(free))
        for c_ in free:
            lift[c_, pos[c_]] = 1
        c[key] = (act, proj, lift)
        return c[key]

    def dim(self, d):
        return self.slice(d)[1].shape[0]

    def _action(self, d, i):
        if (self.inverted >> i) & 1:
            return fl.identity(self.dim(d))
        e = _add(d, _unit(self.n, i))
        act, _, lift = self.slice(d)
        act2, proj2, _ = self.slice(e)
        cover = fl.zeros(len(act2), len(act))
        pos2 = {j: k for k, j in enumerate(act2)}
        for k, j in enumerate(act):
            cover[pos2[j], k] = 1
        return fl.matmul(proj2, fl.matmul(cover, lift, self.q), self.q)

    def _base_box(self):
        pad = self.ring.pad
        return DegreeBox(tuple(b - pad for b in self.bottom), tuple(t + pad for t in self.top))

    def localize(self, mask):
        full = (1 << self.n) - 1
        return Presented(self.ring, self.gens, self.rels, self.matrix,
                         self.inverted | (full & ~mask), self.label)

    def is_zero(self):
        if not self.gens:
            return True
        return super().is_zero()


@dataclass(frozen=True)
class Shift(GradedModule):
    """``M(u)``: degree ``d`` of the shift is degree ``d + u`` of ``M``."""

    base: GradedModule
    u: Degree
    label: str = field(default="", compare=False)

    @property
    def ring(self):  # type: ignore[override]
        return self.base.ring

    def dim(self, d):
        return self.base.dim(_add(d, self.u))

    def _action(self, d, i):
        return self.base.action(_add(d, self.u), i)

    def mul(self, d, m):
        return self.base.mul(_add(tuple(d), self.u), m)

    def _base_box(self):
        b = self.base.box()
        return DegreeBox(_sub(b.lower, self.u), _sub(b.upper, self.u))

    def localize(self, mask):
        loc = self.base.localize(mask)
        if isinstance(loc, ZeroModule):
            return loc
        return Shift(loc, self.u, self.label)

    def is_zero(self):
        return self.base.is_zero()


def shift(module: GradedModule, u: Sequence[int]) -> GradedModule:
    u = tuple(u)
    if not any(u):
        return module
    if isinstance(module, Shift):
        return shift(module.base, _add(module.u, u))
    if isinstance(module, ZeroModule):
        return module
    return Shift(module, u)


@dataclass(frozen=True)
class DirectSum(GradedModule):
    parts: tuple[GradedModule, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.parts:
            raise InputError("empty direct sum; use ZeroModule")
        for p in self.parts[1:]:
            self.parts[0].ring.check(p.ring)

    @property
    def ring(self):  # type: ignore[override]
        return self.parts[0].ring

    def dim(self, d):
        return sum(p.dim(d) for p in self.parts)

    def _action(self, d, i):
        e = _add(d, _unit(self.n, i))
        return _block_diag([p.action(d, i) for p in self.parts],
                           [p.dim(e) for p in self.parts], [p.dim(d) for p in self.parts])

    def _base_box(self):
        return hull_of((p.box() for p in self.parts), self.n)

    def localize(self, mask):
        parts = tuple(p.localize(mask) for p in self.parts)
        parts = tuple(p for p in parts if not isinstance(p, ZeroModule))
        if not parts:
            return ZeroModule(self.ring)
        return DirectSum(parts, self.label)


def _block_diag(blocks: Sequence[np.ndarray], rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    out = fl.zeros(sum(rows), sum(cols))
    r = c = 0
    for b, nr, nc in zip(blocks, rows, cols):
        if nr and nc:
            out[r:r + nr, c:c + nc] = b
        r += nr
        c += nc
    return out


@dataclass(frozen=True, eq=False)
class BoxModule(GradedModule):
    """A module known by its slices on a box, constant beyond it in every direction."""

    ring: Ring
    lower: Degree
    upper: Degree
    dims: Mapping[Degree, int]
    actions: Mapping[tuple[Degree, int], np.ndarray]
    label: str = ""

    def clamp(self, d):
        return tuple(min(max(x, a), b) for x, a, b in zip(d, self.lower, self.upper))

    def dim(self, d):
        return self.dims[self.clamp(d)]

    def _action(self, d, i):
        if d[i] < self.lower[i] or d[i] >= self.upper[i]:
            return fl.identity(self.dim(d))
        return self.actions[(self.clamp(d), i)]

    def _base_box(self):
        return DegreeBox(self.lower, self.upper)

    def localize(self, mask):
        lower = tuple(b if not (mask >> i) & 1 else a
                      for i, (a, b) in enumerate(zip(self.lower, self.upper)))
        box = DegreeBox(lower, self.upper)
        dims = {d: self.dims[d] for d in box.degrees()}
        if not any(dims.values()):
            return ZeroModule(self.ring)
        acts = {(d, i): a for (d, i), a in self.actions.items()
                if d in dims and d[i] < self.upper[i]}
        return BoxModule(self.ring, lower, self.upper, dims, acts, self.label)

    def is_zero(self):
        return not any(self.dims.values())


def default_box(obj) -> DegreeBox:
    """The working box of a module or complex, with verified stabilization flags.

    A direction/side is flagged ``vanish`` when the outermost face is zero and
    ``stable`` when the two outermost faces are joined by isomorphisms; any
    other situation means the box does not determine the object.
    """
    box = obj.box()
    n = box.n
    low_flags, high_flags = [], []
    for i in range(n):
        for side in ("low", "high"):
            flag = _face_flag(obj, box, i, side)
            (low_flags if side == "low" else high_flags).append(flag)
    return DegreeBox(box.lower, box.upper, tuple(low_flags), tuple(high_flags))


def _face_degrees(box: DegreeBox, i: int, value: int) -> Iterator[Degree]:
    ranges = [range(a, b + 1) for a, b in zip(box.lower, box.upper)]
    ranges[i] = range(value, value + 1)
    return product(*ranges)


def _face_flag(obj, box: DegreeBox, i: int, side: str) -> str:
    n = box.n
    outer = box.lower[i] if side == "low" else box.upper[i]
    if isinstance(obj, GradedModule):
        def dim(d):
            return obj.dim(d)

        def act(d):
            return obj.action(d, i)
    else:
        def dim(d):
            return sum(obj.term_dim(k, d) for k in obj.indices)

        def act(d):
            e = _add(d, _unit(n, i))
            return _block_diag([obj.term_action(k, d, i) for k in obj.indices],
                               [obj.term_dim(k, e) for k in obj.indices],
                               [obj.term_dim(k, d) for k in obj.indices])
    face = list(_face_degrees(box, i, outer))
    if all(dim(d) == 0 for d in face):
        return "vanish"
    if box.lower[i] == box.upper[i]:
        raise StabilityError(f"degenerate box in direction {i}")
    start = box.lower[i] if side == "low" else box.upper[i] - 1
    for d in _face_degrees(box, i, start):
        e = _add(d, _unit(n, i))
        a = act(d)
        if dim(d) != dim(e) or fl.rank(a, obj.ring.q) != dim(d):
            raise StabilityError(
                f"{side} face in direction {i} of {getattr(obj, 'label', obj)!s} is not stable at {d}")
    return "stable"


# ---------------------------------------------------------------------------
# homogeneous maps between summands


class Component:
    """A degree-0 homogeneous map ``src -> tgt`` evaluated degreewise."""

    src: GradedModule
    tgt: GradedModule

    def at(self, d: Degree) -> np.ndarray:
        raise NotImplementedError

    def localize(self, mask: int) -> "Component":
        raise NotImplementedError

    def is_unit(self) -> bool:
        """Whether this component is an isomorphism between identical summands."""
        return False


@dataclass(frozen=True)
class ZeroComponent(Component):
    src: GradedModule
    tgt: GradedModule

    def at(self, d):
        return fl.zeros(self.tgt.dim(d), self.src.dim(d))

    def localize(self, mask):
        return ZeroComponent(self.src.localize(mask), self.tgt.localize(mask))


@dataclass(frozen=True)
class RegionMap(Component):
    """``c`` times the natural map between two region modules."""

    src: Region
    tgt: Region
    c: int

    def at(self, d):
        s, t = self.src.dim(d), self.tgt.dim(d)
        out = fl.zeros(t, s)
        if s and t:
            out[0, 0] = self.c % self.src.q
        return out

    def localize(self, mask):
        a, b = self.src.localize(mask), self.tgt.localize(mask)
        if isinstance(a, ZeroModule) or isinstance(b, ZeroModule):
            return ZeroComponent(a, b)
        return RegionMap(a, b, self.c)

    def is_unit(self):
        if self.c % self.src.q == 0:
            return False
        return self.src.lo == self.tgt.lo and self.src.hi == self.tgt.hi


@dataclass(frozen=True)
class PresentedMap(Component):
    """Generator-level scalar matrix ``mat[t][s]`` (monomial part from the shifts)."""

    src: Presented
    tgt: Presented
    mat: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.mat) != len(self.tgt.gens) or any(len(r) != len(self.src.gens) for r in self.mat):
            raise InputError("component matrix shape does not match the summands")
        for t, row in enumerate(self.mat):
            for s, c in enumerate(row):
                if c % self.src.q and not _leq(self.tgt.gens[t], self.src.gens[s]):
                    raise InputError("component is not homogeneous: target generator has higher degree")

    def at(self, d):
        act_s, _, lift = self.src.slice(d)
        act_t, proj, _ = self.tgt.slice(d)
        cover = fl.zeros(len(act_t), len(act_s))
        pos = {j: k for k, j in enumerate(act_t)}
        for k, s in enumerate(act_s):
            for t, row in enumerate(self.mat):
                if row[s] and t in pos:
                    cover[pos[t], k] = row[s]
        return fl.matmul(proj, fl.matmul(cover % self.src.q, lift, self.src.q), self.src.q)

    def localize(self, mask):
        return PresentedMap(self.src.localize(mask), self.tgt.localize(mask), self.mat)

    def is_unit(self):
        return (len(self.mat) == 1 and len(self.mat[0]) == 1 and self.mat[0][0] % self.src.q != 0
                and self.src.gens == self.tgt.gens and not self.src.rels and not self.tgt.rels)


@dataclass(frozen=True)
class PresentedToRegion(Component):
    """Generator ``j`` of a presented module goes to ``coeffs[j]`` times the
    region element in its degree."""

    src: Presented
    tgt: Region
    coeffs: tuple[int, ...]

    def __post_init__(self):
        q = self.src.q
        if len(self.coeffs) != len(self.src.gens):
            raise InputError("one coefficient per generator is required")
        for j, a in enumerate(self.src.gens):
            if self.coeffs[j] % q and not self.tgt.contains(a):
                raise InputError("generator maps outside the target region")
        for k, b in enumerate(self.src.rels):
            img = sum(self.src.matrix[j][k] * self.coeffs[j] for j in range(len(self.src.gens))) % q
            if img and self.tgt.contains(b):
                raise InputError("map does not kill the relations of its source")

    def at(self, d):
        act, _, lift = self.src.slice(d)
        if not self.tgt.dim(d):
            return fl.zeros(0, lift.shape[1])
        cover = fl.as_matrix([[self.coeffs[j] for j in act]], self.src.q, (1, len(act)))
        return fl.matmul(cover, lift, self.src.q)

    def localize(self, mask):
        a, b = self.src.localize(mask), self.tgt.localize(mask)
        if isinstance(b, ZeroModule):
            return ZeroComponent(a, b)
        return PresentedToRegion(a, b, self.coeffs)


@dataclass(frozen=True)
class MulMap(Component):
    """``c · x^(v-u) : M(u) -> M(v)`` on shifts of one module."""

    src: GradedModule
    tgt: GradedModule
    c: int
    base: GradedModule
    u: Degree
    v: Degree

    def __post_init__(self):
        if any(a > b for a, b in zip(self.u, self.v)):
            raise InputError("multiplication map needs a monomial with nonnegative exponents")

    @classmethod
    def make(cls, base: GradedModule, u: Degree, v: Degree, c: int) -> "MulMap":
        return cls(shift(base, u), shift(base, v), c, base, tuple(u), tuple(v))

    def at(self, d):
        m = _sub(self.v, self.u)
        return (self.c * self.base.mul(_add(d, self.u), m)) % self.base.q

    def localize(self, mask):
        loc = self.base.localize(mask)
        if isinstance(loc, ZeroModule):
            return ZeroComponent(loc, loc)
        return MulMap.make(loc, self.u, self.v, self.c)

    def is_unit(self):
        return self.u == self.v and self.c % self.base.q != 0


@dataclass(frozen=True)
class ShiftedComponent(Component):
    """``±f(u) : A(u) -> B(u)``."""

    inner: Component
    u: Degree
    sign: int = 1

    @property
    def src(self):  # type: ignore[override]
        return shift(self.inner.src, self.u)

    @property
    def tgt(self):  # type: ignore[override]
        return shift(self.inner.tgt, self.u)

    def at(self, d):
        out = self.inner.at(_add(d, self.u))
        return out if self.sign == 1 else (self.sign * out) % self.inner.src.q

    def localize(self, mask):
        return ShiftedComponent(self.inner.localize(mask), self.u, self.sign)


def natural_component(src: GradedModule, tgt: GradedModule, scalar) -> Component:
    """Build the component a session file means by ``A->B: c``."""
    if isinstance(src, Region) and isinstance(tgt, Region):
        return RegionMap(src, tgt, int(scalar))
    if isinstance(src, Presented) and isinstance(tgt, Presented):
        if isinstance(scalar, (int, np.integer)):
            mat = tuple(tuple(int(scalar) if t == s else 0 for s in range(len(src.gens)))
                        for t in range(len(tgt.gens)))
            if len(src.gens) != 1 or len(tgt.gens) != 1:
                raise InputError("multi-generator components need an explicit matrix")
        else:
            mat = tuple(tuple(int(c) for c in row) for row in scalar)
        return PresentedMap(src, tgt, mat)
    if isinstance(src, Presented) and isinstance(tgt, Region):
        if isinstance(scalar, (int, np.integer)):
            coeffs = (int(scalar),) * len(src.gens)
        else:
            coeffs = tuple(int(c) for c in scalar)
        return PresentedToRegion(src, tgt, coeffs)
    raise InputError(f"no natural map from {type(src).__name__} to {type(tgt).__name__}")


# ---------------------------------------------------------------------------
# complexes


class GradedComplex:
    """Bounded cohomological complex evaluated degreewise.

    Implementations provide ``indices`` (sorted term indices), ``term_dim``,
    ``differential`` (``d^i`` at a degree), ``term_action``, ``box`` and
    ``localize``.
    """

    ring: Ring
    label: str = ""

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def q(self) -> int:
        return self.ring.q

    indices: tuple[int, ...]

    def term_dim(self, i: int, d: Degree) -> int:
        raise NotImplementedError

    def differential(self, i: int, d: Degree) -> np.ndarray:
        raise NotImplementedError

    def term_action(self, i: int, d: Degree, k: int) -> np.ndarray:
        raise NotImplementedError

    def box(self) -> DegreeBox:
        raise NotImplementedError

    def localize(self, mask: int) -> "GradedComplex":
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class SummandComplex(GradedComplex):
    """Terms are tuples of summand modules; ``maps[i][(t, s)]`` is the component
    from summand ``s`` of term ``i`` to summand ``t`` of term ``i + 1``."""

    ring: Ring
    terms: Mapping[int, tuple[GradedModule, ...]]
    maps: Mapping[int, Mapping[tuple[int, int], Component]]
    label: str = ""
    names: Mapping[int, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for i, comps in self.maps.items():
            if i not in self.terms or i + 1 not in self.terms:
                raise InputError(f"differential {i} has no source or target term")
            for (t, s), c in comps.items():
                if not (0 <= s < len(self.terms[i]) and 0 <= t < len(self.terms[i + 1])):
                    raise InputError(f"component {(t, s)} of d^{i} is out of range")

    @cached_property
    def _cache(self) -> dict:
        return {}

    @property
    def indices(self):  # type: ignore[override]
        return tuple(sorted(self.terms))

    def _dims(self, i, d):
        key = ("dims", i, d)
        c = self._cache
        if key not in c:
            c[key] = [m.dim(d) for m in self.terms.get(i, ())]
        return c[key]

    def term_dim(self, i, d):
        return sum(self._dims(i, tuple(d)))

    def differential(self, i, d):
        d = tuple(d)
        key = ("diff", i, d)
        c = self._cache
        if key in c:
            return c[key]
        src = self._dims(i, d)
        tgt = self._dims(i + 1, d)
        out = fl.zeros(sum(tgt), sum(src))
        if i in self.maps and out.size:
            roff = np.concatenate([[0], np.cumsum(tgt)]).astype(int)
            coff = np.concatenate([[0], np.cumsum(src)]).astype(int)
            for (t, s), comp in self.maps[i].items():
                if tgt[t] and src[s]:
                    out[roff[t]:roff[t + 1], coff[s]:coff[s + 1]] = comp.at(d)
        out %= self.q
        c[key] = out
        return out

    def term_action(self, i, d, k):
        d = tuple(d)
        e = _add(d, _unit(self.n, k))
        mods = self.terms.get(i, ())
        return _block_diag([m.action(d, k) for m in mods], self._dims(i, e), self._dims(i, d))

    def box(self):
        return hull_of((m.box() for ms in self.terms.values() for m in ms), self.n)

    def localize(self, mask):
        terms = {i: tuple(m.localize(mask) for m in ms) for i, ms in self.terms.items()}
        maps = {i: {k: c.localize(mask) for k, c in comps.items()} for i, comps in self.maps.items()}
        return SummandComplex(self.ring, terms, maps, self.label, self.names)

    def summands(self, i: int) -> tuple[GradedModule, ...]:
        return tuple(self.terms.get(i, ()))


@dataclass(frozen=True, eq=False)
class FreeComplex(GradedComplex):
    """Complex of (possibly localized) free modules with scalar differentials.

    ``shifts[i]`` lists the generator degrees of term ``i``; ``mats[i]`` is the
    scalar matrix of ``d^i`` (rows: generators of term ``i+1``).  The monomial
    in each entry is the difference of the two generator degrees.
    """

    ring: Ring
    shifts: Mapping[int, tuple[Degree, ...]]
    mats: Mapping[int, np.ndarray]
    inverted: int = 0
    label: str = ""

    def __post_init__(self):
        q = self.q
        for i, m in self.mats.items():
            rows, cols = len(self.shifts.get(i + 1, ())), len(self.shifts.get(i, ()))
            if m.shape != (rows, cols):
                raise InputError(f"d^{i} has shape {m.shape}, expected {(rows, cols)}")
            for t, s in zip(*np.nonzero(m % q)):
                if not _leq_outside(self.shifts[i + 1][t], self.shifts[i][s], self.inverted):
                    raise InputError(f"d^{i} entry ({t},{s}) is not a monomial multiple")

    @cached_property
    def _cache(self) -> dict:
        return {}

    @property
    def indices(self):  # type: ignore[override]
        return tuple(sorted(self.shifts))

    def active(self, i, d):
        key = ("act", i, d)
        c = self._cache
        if key not in c:
            c[key] = [j for j, a in enumerate(self.shifts.get(i, ()))
                      if _leq_outside(a, d, self.inverted)]
        return c[key]

    def term_dim(self, i, d):
        return len(self.active(i, tuple(d)))

    def rank(self, i: int) -> int:
        return len(self.shifts.get(i, ()))

    def differential(self, i, d):
        d = tuple(d)
        src, tgt = self.active(i, d), self.active(i + 1, d)
        if i not in self.mats:
            return fl.zeros(len(tgt), len(src))
        return self.mats[i][np.ix_(tgt, src)] % self.q if tgt and src else fl.zeros(len(tgt), len(src))

    def term_action(self, i, d, k):
        d = tuple(d)
        src = self.active(i, d)
        tgt = self.active(i, _add(d, _unit(self.n, k)))
        pos = {j: r for r, j in enumerate(tgt)}
        out = fl.zeros(len(tgt), len(src))
        for c_, j in enumerate(src):
            out[pos[j], c_] = 1
        return out

    def box(self):
        pad = self.ring.pad
        degs = [a for s in self.shifts.values() for a in s]
        if not degs:
            return DegreeBox((0,) * self.n, (0,) * self.n)
        lower = tuple(min(a[i] for a in degs) - pad for i in range(self.n))
        upper = tuple(max(a[i] for a in degs) + pad for i in range(self.n))
        return DegreeBox(lower, upper)

    def localize(self, mask):
        full = (1 << self.n) - 1
        return FreeComplex(self.ring, self.shifts, self.mats, self.inverted | (full & ~mask), self.label)

    def ranks(self) -> dict[int, int]:
        return {i: len(s) for i, s in self.shifts.items()}

    def is_unit_entry(self, i: int, t: int, s: int) -> bool:
        a, b = self.shifts[i][s], self.shifts[i + 1][t]
        return all(x == y for k, (x, y) in enumerate(zip(a, b)) if not (self.inverted >> k) & 1)

    def as_summands(self) -> SummandComplex:
        """The same complex with one region summand per generator."""
        terms = {}
        for i, s in self.shifts.items():
            terms[i] = tuple(Region.localized_free(self.ring, self.inverted, a) for a in s)
        maps = {}
        for i, m in self.mats.items():
            comps = {}
            for t, s in zip(*np.nonzero(m % self.q)):
                comps[(int(t), int(s))] = RegionMap(terms[i][s], terms[i + 1][t], int(m[t, s]))
            maps[i] = comps
        return SummandComplex(self.ring, terms, maps, self.label)


def free_complex(ring: Ring, shifts: Mapping[int, Sequence[Sequence[int]]],
                 mats: Mapping[int, Sequence[Sequence[int]]], label: str = "") -> FreeComplex:
    sh = {i: tuple(tuple(int(x) for x in a) for a in s) for i, s in shifts.items()}
    ms = {}
    for i, m in mats.items():
        shape = (len(sh.get(i + 1, ())), len(sh.get(i, ())))
        ms[i] = fl.as_matrix(m, ring.q, shape)
    return FreeComplex(ring, sh, ms, 0, label)


# ---------------------------------------------------------------------------
# verification and homology


def verify_complex(X: GradedComplex, box: DegreeBox | None = None) -> None:
    """Check ``d∘d = 0`` and that every differential commutes with the
    variable actions on the whole working box."""
    box = box or X.box()
    q = X.q
    idx = X.indices
    for d in box.degrees():
        for i in idx:
            if i + 1 in idx:
                dd = fl.matmul(X.differential(i + 1, d), X.differential(i, d), q)
                if dd.any():
                    raise InputError(f"d^{i + 1} d^{i} != 0 in degree {d}")
            for k in range(X.n):
                e = _add(d, _unit(X.n, k))
                lhs = fl.matmul(X.term_action(i + 1, d, k), X.differential(i, d), q)
                rhs = fl.matmul(X.differential(i, e), X.term_action(i, d, k), q)
                if lhs.shape != rhs.shape or (lhs - rhs).any() % q if lhs.size else False:
                    raise InputError(f"d^{i} is not homogeneous: fails to commute with x_{k} at {d}")
                if lhs.size and ((lhs - rhs) % q).any():
                    raise InputError(f"d^{i} is not homogeneous: fails to commute with x_{k} at {d}")


def homology_dim(X: GradedComplex, i: int, d: Degree) -> int:
    d = tuple(d)
    dim = X.term_dim(i, d)
    if not dim:
        return 0
    out_rank = fl.rank(X.differential(i, d), X.q) if i + 1 in X.indices else 0
    in_rank = fl.rank(X.differential(i - 1, d), X.q) if i - 1 in X.indices else 0
    return dim - out_rank - in_rank


def homology_dims(X: GradedComplex, i: int, box: DegreeBox | None = None) -> dict[Degree, int]:
    box = box or X.box()
    return {d: homology_dim(X, i, d) for d in box.degrees()}


def _cycles_mod_boundaries(X: GradedComplex, i: int, d: Degree):
    q = X.q
    dim = X.term_dim(i, d)
    if i + 1 in X.indices:
        z = fl.kernel(X.differential(i, d), q) if dim else fl.zeros(0, 0)
    else:
        z = fl.identity(dim)
    if i - 1 in X.indices and dim:
        b = fl.column_basis(X.differential(i - 1, d), q)
    else:
        b = fl.zeros(dim, 0)
    h = fl.extend_basis(b, z, q) if dim else fl.zeros(0, 0)
    basis = np.hstack([b, h]) if dim else fl.zeros(0, 0)
    linv = fl.left_inverse(basis, q) if basis.shape[1] else fl.zeros(0, dim)
    return b.shape[1], h, linv


def homology(X: GradedComplex, i: int, box: DegreeBox | None = None) -> BoxModule:
    """``H^i X`` as a box module on the working box of ``X``."""
    box = box or X.box()
    q = X.q
    data = {d: _cycles_mod_boundaries(X, i, d) for d in box.degrees()}
    dims = {d: v[1].shape[1] for d, v in data.items()}
    actions = {}
    for d in box.degrees():
        for k in range(X.n):
            if d[k] >= box.upper[k]:
                continue
            e = _add(d, _unit(X.n, k))
            _, h, _ = data[d]
            nb, h2, linv2 = data[e]
            if not h.shape[1] or not h2.shape[1]:
                actions[(d, k)] = fl.zeros(h2.shape[1], h.shape[1])
                continue
            img = fl.matmul(X.term_action(i, d, k), h, q)
            coords = fl.matmul(linv2, img, q)
            actions[(d, k)] = coords[nb:, :]
    return BoxModule(X.ring, box.lower, box.upper, dims, actions, f"H^{i}({X.label})")


def euler_characteristic(X: GradedComplex, d: Degree) -> tuple[int, int]:
    """Alternating sums of term dimensions and of homology dimensions at ``d``."""
    terms = sum((-1) ** (i % 2) * X.term_dim(i, d) for i in X.indices)
    hom = sum((-1) ** (i % 2) * homology_dim(X, i, d) for i in X.indices)
    return terms, hom


def is_exact(X: GradedComplex, box: DegreeBox | None = None) -> bool:
    box = box or X.box()
    return all(homology_dim(X, i, d) == 0 for i in X.indices for d in box.degrees())


# ---------------------------------------------------------------------------
# Koszul and Taylor complexes


def _subsets(g: int, size: int) -> list[tuple[int, ...]]:
    return list(combinations(range(g), size))


def _boundary_complex(ring: Ring, labels: Sequence[Degree], shift_of: Callable[[tuple[int, ...]], Degree],
                      label: str) -> FreeComplex:
    """Exterior-algebra style chain complex on ``len(labels)`` symbols, placed in
    cohomological degrees ``-r..0``; subsets in lexicographic order, sign
    ``(-1)^position`` when deleting an element."""
    r = len(labels)
    shifts: dict[int, tuple[Degree, ...]] = {}
    index: dict[int, dict[tuple[int, ...], int]] = {}
    for size in range(r + 1):
        subs = _subsets(r, size)
        shifts[-size] = tuple(shift_of(s) for s in subs)
        index[-size] = {s: k for k, s in enumerate(subs)}
    mats: dict[int, np.ndarray] = {}
    for size in range(1, r + 1):
        src = index[-size]
        tgt = index[-size + 1]
        m = fl.zeros(len(tgt), len(src))
        for s, col in src.items():
            for pos, t in enumerate(s):
                face = s[:pos] + s[pos + 1:]
                m[tgt[face], col] = 1 if pos % 2 == 0 else ring.q - 1
        mats[-size] = m
    return FreeComplex(ring, shifts, mats, 0, label)


def koszul_complex(ring: Ring, seq: Sequence[Monomial]) -> FreeComplex:
    """K(m_1, ..., m_r) as a complex of free S-modules in degrees -r..0."""
    seq = list(seq)
    if not seq:
        raise InputError("Koszul complex needs a nonempty sequence")
    for m in seq:
        if m.n != ring.n:
            raise InputError("monomial from a different ring")

    def shift_of(s):
        tot = [0] * ring.n
        for k in s:
            tot = [a + b for a, b in zip(tot, seq[k].exps)]
        return tuple(tot)

    names = ",".join(m.format(ring.names) for m in seq)
    return _boundary_complex(ring, [m.exps for m in seq], shift_of, f"K({names})")


def taylor_resolution(ring: Ring, ideal: MonomialIdeal) -> FreeComplex:
    if ideal.n != ring.n:
        raise InputError("ideal from a different ring")
    if ideal.is_zero() or ideal.is_unit():
        raise DomainError("Taylor resolution needs a proper nonzero ideal")
    gens = list(ideal.gens)
    if len(gens) > TAYLOR_MAX_GENERATORS:
        raise ResourceError(f"{len(gens)} generators exceed the Taylor cap of {TAYLOR_MAX_GENERATORS}")

    def shift_of(s):
        m = Monomial.one(ring.n)
        for k in s:
            m = m.lcm(gens[k])
        return m.exps

    return _boundary_complex(ring, [g.exps for g in gens], shift_of,
                             f"T({ideal.format(ring.names)})")


# ---------------------------------------------------------------------------
# minimalization and free resolutions


def _find_unit(C: FreeComplex) -> tuple[int, int, int] | None:
    q = C.q
    for i in sorted(C.mats):
        m = C.mats[i] % q
        for t, s in zip(*np.nonzero(m)):
            if C.is_unit_entry(i, int(t), int(s)):
                return i, int(t), int(s)
    return None


def minimalize(C: FreeComplex) -> FreeComplex:
    """Cancel unit entries until every entry has a nontrivial monomial part
    (in the non-inverted variables).  Each step removes one generator from
    two adjacent terms and keeps the complex homotopy equivalent."""
    q = C.q
    shifts = {i: list(s) for i, s in C.shifts.items()}
    mats = {i: m.copy() % q for i, m in C.mats.items()}
    cur = C
    while True:
        hit = _find_unit(cur)
        if hit is None:
            break
        i, t, s = hit
        a = mats[i]
        inv = pow(int(a[t, s]), -1, q)
        a = (a - np.outer(a[:, s], a[t, :]) * inv) % q
        a = np.delete(np.delete(a, t, axis=0), s, axis=1)
        mats[i] = a
        if i - 1 in mats:
            mats[i - 1] = np.delete(mats[i - 1], s, axis=0)
        if i + 1 in mats:
            mats[i + 1] = np.delete(mats[i + 1], t, axis=1)
        del shifts[i][s]
        del shifts[i + 1][t]
        cur = FreeComplex(C.ring, {k: tuple(v) for k, v in shifts.items()}, mats, C.inverted, C.label)
    # drop zero terms at the ends
    keep = [i for i in sorted(shifts) if shifts[i]]
    if keep:
        lo, hi = keep[0], keep[-1]
    else:
        lo, hi = 0, -1
    sh = {i: tuple(shifts[i]) for i in shifts if lo <= i <= hi}
    ms = {i: mats[i] for i in mats if lo <= i and i + 1 <= hi}
    return FreeComplex(C.ring, sh, ms, C.inverted, C.label)


def _syzygies(ring: Ring, src: Sequence[Degree], phi: Callable[[Degree, list[int]], np.ndarray],
              top: Degree) -> tuple[list[Degree], np.ndarray]:
    """Minimal generators of ``ker(phi)`` for a map out of the free module with
    generator degrees ``src``.  ``phi(d, active)`` is the matrix at degree ``d``
    on the active generators.  Returns degrees and coefficient columns."""
    q = ring.q
    g = len(src)
    if not g:
        return [], fl.zeros(0, 0)
    lower = tuple(min(a[i] for a in src) for i in range(ring.n))
    upper = tuple(max(t, max(a[i] for a in src)) for i, t in enumerate(top))
    degs = sorted(DegreeBox(lower, upper).degrees(), key=lambda d: (sum(d), d))
    found_deg: list[Degree] = []
    found_vec: list[np.ndarray] = []
    for d in degs:
        act = [j for j, a in enumerate(src) if _leq(a, d)]
        if not act:
            continue
        k = fl.kernel(phi(d, act), q)
        if not k.shape[1]:
            continue
        old = [v[act] for dd, v in zip(found_deg, found_vec) if _leq(dd, d)]
        old_m = np.stack(old, axis=1) if old else fl.zeros(len(act), 0)
        new = fl.extend_basis(old_m, k, q)
        for c in range(new.shape[1]):
            vec = fl.zeros(g, 1)[:, 0]
            vec[act] = new[:, c]
            found_deg.append(d)
            found_vec.append(vec % q)
    if not found_vec:
        return [], fl.zeros(g, 0)
    return found_deg, np.stack(found_vec, axis=1)


def free_resolution(module: Presented) -> FreeComplex:
    """Minimal free resolution of a finitely presented module, in cohomological
    degrees ``-p..0`` (so that ``H^0`` is the module)."""
    if not isinstance(module, Presented) or module.inverted:
        raise DomainError("free resolutions are computed for finitely presented modules")
    ring = module.ring
    if not module.gens:
        return FreeComplex(ring, {0: ()}, {}, 0, f"F({module.describe()})")

    def phi0(d, act):
        act_m, proj, _ = module.slice(d)
        if act_m != act:
            raise InternalError("generator bookkeeping diverged")
        return proj

    shifts = [tuple(module.gens)]
    mats: list[np.ndarray] = []
    degs, vecs = _syzygies(ring, module.gens, phi0, module.top)
    while degs:
        if len(shifts) > ring.n + 1:
            raise InternalError("resolution longer than the number of variables plus one")
        shifts.append(tuple(degs))
        mats.append(vecs)
        prev_src = shifts[-1]
        m = mats[-1]

        def phi(d, act, m=m, tgt=shifts[-2]):
            rows = [j for j, a in enumerate(tgt) if _leq(a, d)]
            return m[np.ix_(rows, act)] if rows else fl.zeros(0, len(act))

        degs, vecs = _syzygies(ring, prev_src, phi, tuple(max(a[i] for a in prev_src) for i in range(ring.n)))
    p = len(shifts) - 1
    sh = {-k: shifts[k] for k in range(p + 1)}
    ms = {-(k + 1): mats[k] for k in range(p)}
    res = FreeComplex(ring, sh, ms, 0, f"F({module.describe()})")
    return minimalize(res)


# ---------------------------------------------------------------------------
# tensor and Hom of a free complex with a module


def tensor_with(C: FreeComplex, module: GradedModule) -> SummandComplex:
    """``C ⊗ M``: a generator in degree ``a`` contributes ``M(-a)``."""
    if C.inverted:
        raise DomainError("tensor is implemented for complexes of free S-modules")
    module.ring.check(C.ring)
    terms = {i: tuple(shift(module, tuple(-x for x in a)) for a in s) for i, s in C.shifts.items()}
    maps = {}
    for i, m in C.mats.items():
        comps = {}
        for t, s in zip(*np.nonzero(m % C.q)):
            u = tuple(-x for x in C.shifts[i][s])
            v = tuple(-x for x in C.shifts[i + 1][t])
            comps[(int(t), int(s))] = MulMap.make(module, u, v, int(m[t, s]))
        maps[i] = comps
    return SummandComplex(C.ring, terms, maps, f"{C.label}⊗{module.describe()}")


def hom_into(C: FreeComplex, module: GradedModule) -> SummandComplex:
    """``Hom(C, M)`` re-indexed cohomologically: term ``-i`` of ``C`` becomes
    term ``i``; a generator in degree ``a`` contributes ``M(a)``."""
    if C.inverted:
        raise DomainError("Hom is implemented for complexes of free S-modules")
    module.ring.check(C.ring)
    terms = {-i: tuple(shift(module, a) for a in s) for i, s in C.shifts.items()}
    maps = {}
    for i, m in C.mats.items():
        # d^i : C^i -> C^{i+1} dualizes to Hom(C^{i+1}, M) -> Hom(C^i, M), i.e. term -(i+1) -> -i
        comps = {}
        for t, s in zip(*np.nonzero(m % C.q)):
            u = C.shifts[i + 1][t]
            v = C.shifts[i][s]
            comps[(int(s), int(t))] = MulMap.make(module, u, v, int(m[t, s]))
        maps[-(i + 1)] = comps
    return SummandComplex(C.ring, terms, maps, f"Hom({C.label},{module.describe()})")


def koszul_cochain(module: GradedModule, mask: int) -> SummandComplex:
    """``Hom(K(x_F), M)``: term ``j`` is ``⊕_{|T|=j, T⊆F} M(e_T)``."""
    ring = module.ring
    n = ring.n
    vars_ = indices_of(mask)
    subsets = {j: list(combinations(vars_, j)) for j in range(len(vars_) + 1)}

    def e(T):
        return tuple(1 if k in T else 0 for k in range(n))

    terms = {j: tuple(shift(module, e(T)) for T in subs) for j, subs in subsets.items()}
    maps = {}
    for j in range(len(vars_)):
        index = {T: k for k, T in enumerate(subsets[j + 1])}
        comps = {}
        for s, T in enumerate(subsets[j]):
            for t_var in vars_:
                if t_var in T:
                    continue
                U = tuple(sorted(T + (t_var,)))
                sign = (-1) ** sum(1 for u in T if u < t_var)
                comps[(index[U], s)] = MulMap.make(module, e(T), e(U), sign)
        maps[j] = comps
    return SummandComplex(ring, terms, maps, f"Hom(K,{module.describe()})")
