"""Subsets of the state space stored as bitmasks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True)
class Subset:
    """A subset of ``range(n)`` backed by an integer bitmask.

    Bit ``i`` of :attr:`mask` is set exactly when state index ``i`` belongs
    to the subset.  Instances are immutable and hashable.
    """

    mask: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("dimension must be nonnegative")
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} has bits outside [0, {self.n})")

    @classmethod
    def empty(cls, n: int) -> "Subset":
        return cls(0, n)

    @classmethod
    def full(cls, n: int) -> "Subset":
        return cls((1 << n) - 1, n)

    @classmethod
    def of(cls, indices: Iterable[int], n: int) -> "Subset":
        mask = 0
        for i in indices:
            if not 0 <= i < n:
                raise ValueError(f"state index {i} outside [0, {n})")
            mask |= 1 << i
        return cls(mask, n)

    @classmethod
    def from_labels(cls, labels: Iterable[str], all_labels: Sequence[str]) -> "Subset":
        index = {lbl: i for i, lbl in enumerate(all_labels)}
        try:
            return cls.of((index[lbl] for lbl in labels), len(all_labels))
        except KeyError as exc:
            raise ValueError(f"unknown state label {exc.args[0]!r}") from None

    @property
    def cardinality(self) -> int:
        return self.mask.bit_count()

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.mask >> i & 1)

    def labels(self, state_labels: Sequence[str]) -> list[str]:
        return [state_labels[i] for i in self.indices()]

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.n and bool(self.mask >> i & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __len__(self) -> int:
        return self.cardinality

    def complement(self) -> "Subset":
        return Subset(self.mask ^ (1 << self.n) - 1, self.n)

    def union(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.mask | other.mask, self.n)

    def intersection(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.mask & other.mask, self.n)

    def difference(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.mask & ~other.mask, self.n)

    def issubset(self, other: "Subset") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Subset") -> bool:
        self._check(other)
        return self.mask & other.mask == 0

    def is_proper(self) -> bool:
        """Neither empty nor the full state space."""
        return self.mask != 0 and self.mask != (1 << self.n) - 1

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Cardinality first, then lexicographic on sorted indices."""
        return (self.cardinality, self.indices())

    def _check(self, other: "Subset") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __repr__(self) -> str:
        inner = ",".join(map(str, self.indices()))
        return f"Subset({{{inner}}}, n={self.n})"
