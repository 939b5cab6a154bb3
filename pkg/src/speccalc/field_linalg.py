"""Exact dense linear algebra over a prime field F_q.

Matrices are plain ``numpy`` int64 arrays whose entries are kept reduced
into ``[0, q)``.  Every per-degree computation in the package is a tiny
dense problem, so a straightforward Gauss-Jordan elimination is all we need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

DEFAULT_PRIME = 32003


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class Field:
    """The prime field F_q.  ``q`` must be prime and small enough that
    products of two residues fit comfortably in int64 sums."""

    q: int = DEFAULT_PRIME

    def __post_init__(self):
        if not _is_prime(self.q):
            raise InputError(f"characteristic {self.q} is not prime")
        if self.q >= 2**31:
            raise InputError(f"characteristic {self.q} exceeds the word-sized limit")

    def __call__(self, value: int) -> int:
        return int(value) % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.q)

    def matrix(self, rows) -> np.ndarray:
        return as_matrix(rows, self.q)


def as_matrix(rows, q: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if a.size == 0:
        if shape is None:
            shape = (a.shape[0], 0) if a.ndim == 2 else (0, 0)
        return np.zeros(shape, dtype=np.int64)
    if a.ndim != 2:
        raise InputError("matrix must be two-dimensional")
    return a % q


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise InputError(f"cannot multiply {a.shape} by {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % q


def rref(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    r = a.copy() % q
    rows, cols = r.shape
    pivots: list[int] = []
    top = 0
    for c in range(cols):
        if top == rows:
            break
        nz = np.nonzero(r[top:, c])[0]
        if nz.size == 0:
            continue
        p = top + int(nz[0])
        if p != top:
            r[[top, p]] = r[[p, top]]
        inv = pow(int(r[top, c]), -1, q)
        r[top] = (r[top] * inv) % q
        col = r[:, c].copy()
        col[top] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            r[hit] = (r[hit] - np.outer(col[hit], r[top])) % q
        pivots.append(c)
        top += 1
    return r, pivots


def rank(a: np.ndarray, q: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, q)[1])


def rank_kernel(a: np.ndarray, q: int) -> tuple[int, np.ndarray]:
    """Return ``(rank, K)`` where the columns of ``K`` form a basis of the
    right kernel of ``a`` (so ``a @ K == 0`` mod q)."""
    rows, cols = a.shape
    if cols == 0:
        return 0, zeros(0, 0)
    if rows == 0 or not a.any():
        return 0, identity(cols)
    r, pivots = rref(a, q)
    free = [c for c in range(cols) if c not in set(pivots)]
    k = zeros(cols, len(free))
    for j, f in enumerate(free):
        k[f, j] = 1
        for i, p in enumerate(pivots):
            k[p, j] = (-r[i, f]) % q
    return len(pivots), k


def kernel(a: np.ndarray, q: int) -> np.ndarray:
    return rank_kernel(a, q)[1]


def cokernel_dim(a: np.ndarray, q: int) -> int:
    return a.shape[0] - rank(a, q)


def image_contains(a: np.ndarray, v, q: int) -> bool:
    """Decide whether ``a x = v`` is solvable."""
    vec = np.asarray(v, dtype=np.int64).reshape(-1, 1) % q
    if vec.shape[0] != a.shape[0]:
        raise InputError(f"vector of length {vec.shape[0]} against {a.shape[0]} rows")
    if a.shape[1] == 0:
        return not vec.any()
    return rank(np.hstack([a, vec]), q) == rank(a, q)


def column_basis(a: np.ndarray, q: int) -> np.ndarray:
    """Independent columns of ``a`` spanning its column space."""
    if a.shape[1] == 0:
        return zeros(a.shape[0], 0)
    _, pivots = rref(a, q)
    return a[:, pivots] % q


def extend_basis(sub: np.ndarray, cand: np.ndarray, q: int) -> np.ndarray:
    """Columns of ``cand`` that extend the independent columns of ``sub``
    to a basis of ``span(sub) + span(cand)``."""
    width = sub.shape[1]
    joined = np.hstack([sub, cand]) if width else cand
    if joined.shape[1] == 0:
        return zeros(joined.shape[0], 0)
    _, pivots = rref(joined, q)
    keep = [p - width for p in pivots if p >= width]
    return cand[:, keep] % q


def left_inverse(a: np.ndarray, q: int) -> np.ndarray:
    """A matrix ``L`` with ``L @ a == I`` for ``a`` of full column rank."""
    rows, cols = a.shape
    if cols == 0:
        return zeros(0, rows)
    aug = np.hstack([a % q, identity(rows)])
    r, pivots = rref(aug, q)
    if len([p for p in pivots if p < cols]) != cols:
        raise InputError("matrix does not have full column rank")
    return r[:cols, cols:] % q


def solve_in_basis(basis_left_inverse: np.ndarray, v: np.ndarray, q: int) -> np.ndarray:
    return matmul(basis_left_inverse, v, q)


def inverse(a: np.ndarray, q: int) -> np.ndarray:
    if a.shape[0] != a.shape[1]:
        raise InputError("only square matrices are invertible")
    return left_inverse(a, q)
