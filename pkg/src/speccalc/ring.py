"""The ambient ring k[x_1..x_n] over F_q together with its desk-scale settings."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from .errors import InputError
from .field_linalg import DEFAULT_PRIME, Field

_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def default_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


@dataclass(frozen=True)
class Ring:
    names: tuple[str, ...]
    q: int = DEFAULT_PRIME
    pad: int = 1
    field: Field = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names in {names}")
        for name in names:
            if not _NAME.match(name):
                raise InputError(f"bad variable name {name!r}")
        if self.pad < 1:
            raise InputError("box padding must be at least 1")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "field", Field(self.q))

    @classmethod
    def polynomial(cls, n: int, q: int | None = None, pad: int = 1) -> "Ring":
        if q is None:
            q = int(os.environ.get("SPECCALC_CHAR", DEFAULT_PRIME))
        return cls(default_names(n), q, pad)

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r}") from None

    def check(self, other: "Ring") -> None:
        if other.n != self.n:
            raise InputError(f"ring mismatch: {self.n} variables vs {other.n}")
        if other.q != self.q:
            raise InputError(f"ring mismatch: characteristic {self.q} vs {other.q}")
