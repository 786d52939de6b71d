"""Transpositions and orbit computations for covering monodromies."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple


@dataclass(frozen=True, order=True)
class Transposition:
    """An unordered pair of distinct sheet indices, stored with i < j."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("transposition needs distinct indices")
        if self.i > self.j:
            lo, hi = self.j, self.i
            object.__setattr__(self, "i", lo)
            object.__setattr__(self, "j", hi)
        if self.i < 1:
            raise ValueError("sheet indices start at 1")

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.i, self.j)

    def apply(self, x: int) -> int:
        if x == self.i:
            return self.j
        if x == self.j:
            return self.i
        return x

    def within(self, d: int) -> bool:
        return self.j <= d

    def shares(self, other: "Transposition") -> int:
        """Number of common sheet indices: 2 (equal), 1, or 0 (disjoint)."""
        return len({self.i, self.j} & {other.i, other.j})

    def disjoint(self, other: "Transposition") -> bool:
        return self.shares(other) == 0

    def __str__(self) -> str:
        return f"({self.i} {self.j})"


def T(i: int, j: int) -> Transposition:
    return Transposition(i, j)


def conjugate(lam: Transposition, mu: Transposition) -> Transposition:
    """mu * lam * mu, i.e. lam with indices mapped through mu."""
    return Transposition(mu.apply(lam.i), mu.apply(lam.j))


def third(lam: Transposition, mu: Transposition) -> Transposition:
    """For |lam ∩ mu| = 1, the third transposition of the triangle.

    Equals both lam mu lam and mu lam mu.
    """
    if lam.shares(mu) != 1:
        raise ValueError("transpositions must share exactly one index")
    return conjugate(mu, lam)


def orbit_count(generators: Iterable[Transposition], d: int) -> int:
    """Orbits of <generators> acting on {1, ..., d}, by union-find."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    parent = list(range(d + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = d
    for t in generators:
        if not t.within(d):
            raise ValueError(f"generator {t} out of range for degree {d}")
        a, b = find(t.i), find(t.j)
        if a != b:
            parent[a] = b
            count -= 1
    return count
