"""Degrees, spins and the Koszul sign rule.

Degrees are homological integers. The spin of a degree d is -d/2, kept as
an exact half-integer.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


def koszul_sign(d1: int, d2: int) -> int:
    """Sign (-1)^(d1*d2) picked up when swapping elements of degrees d1, d2."""
    return -1 if (d1 * d2) % 2 else 1


def is_odd(d: int) -> bool:
    return d % 2 != 0


@dataclass(frozen=True, order=True)
class Spin:
    """Exact half-integer stored as ``numerator / 2``."""

    numerator: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 2)

    def is_integer(self) -> bool:
        return self.numerator % 2 == 0

    def __add__(self, other: "Spin") -> "Spin":
        return Spin(self.numerator + other.numerator)

    def __neg__(self) -> "Spin":
        return Spin(-self.numerator)

    def degree(self) -> int:
        return -self.numerator

    def __str__(self) -> str:
        if self.is_integer():
            return str(self.numerator // 2)
        return f"{self.numerator}/2"


def spin_of(d: int) -> Spin:
    return Spin(-d)


class GradedSet:
    """Ordered list of uniquely named entries, each carrying a degree.

    The declaration order is the canonical generator order used for
    monomial normal forms.
    """

    __slots__ = ("_names", "_degrees", "_index")

    def __init__(self, entries: Iterable[tuple[str, int]] = ()):
        names, degrees = [], []
        for name, deg in entries:
            names.append(str(name))
            degrees.append(int(deg))
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        self._names = tuple(names)
        self._degrees = tuple(degrees)
        self._index = {n: i for i, n in enumerate(names)}

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def degrees(self) -> tuple[int, ...]:
        return self._degrees

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree(self, name: str) -> int:
        return self._degrees[self.index(name)]

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._names)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(zip(self._names, self._degrees))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GradedSet) and list(self) == list(other)

    def __hash__(self) -> int:
        return hash((self._names, self._degrees))

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}:{d}" for n, d in self)
        return f"GradedSet({inner})"
