"""Level-union families: lower bounds, equality cases and random samplers."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .lattice import DomainError, Family, MAX_N, full_set, level
from .patterns import contains


@dataclass(frozen=True)
class LevelSpec:
    n: int
    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_N:
            raise DomainError(f"n={self.n} outside [0, {MAX_N}]")
        lv = tuple(self.levels)
        object.__setattr__(self, "levels", lv)
        if any(not 0 <= i <= self.n for i in lv):
            raise DomainError(f"levels {lv} not within [0, {self.n}]")
        if list(lv) != sorted(set(lv)):
            raise DomainError(f"levels {lv} must be ascending and distinct")

    @property
    def size(self) -> int:
        return sum(math.comb(self.n, i) for i in self.levels)


def from_levels(spec: LevelSpec) -> Family:
    sets: list[int] = []
    for i in spec.levels:
        sets.extend(level(spec.n, i).sets)
    return Family.of(spec.n, sets)


def middle_window(n: int, k: int) -> int:
    """Lowest start of k consecutive levels with the largest total size."""
    if not 1 <= k <= n + 1:
        raise DomainError(f"k={k} outside [1, {n + 1}]")
    sums = [sum(math.comb(n, i) for i in range(s, s + k)) for s in range(n - k + 2)]
    return sums.index(max(sums))


def middle_levels(n: int, k: int) -> Family:
    s = middle_window(n, k)
    return from_levels(LevelSpec(n, tuple(range(s, s + k))))


def equality_case_same_parity(n: int, k: int, use_top: bool) -> Family:
    """The k - 1 central levels plus one full outer level on either side."""
    if k < 2 or n < k + 2:
        raise DomainError(f"need k >= 2 and n >= k + 2, got n={n}, k={k}")
    if (n - k) % 2:
        raise DomainError(f"n={n} and k={k} must have the same parity")
    base = (n - k) // 2
    inner = list(range(base + 1, base + k))
    outer = base + k if use_top else base
    return from_levels(LevelSpec(n, tuple(sorted(inner + [outer]))))


def random_family(n: int, density: float, rng: random.Random) -> Family:
    return Family.of(n, [s for s in range(1 << n) if rng.random() < density])


def random_free_family(n: int, forb: Sequence, rng: random.Random, *,
                       exclude_extremes: bool = False, keep: float = 1.0) -> Family:
    """Random family built by greedy insertion in shuffled order.

    Each set is offered once and kept with probability ``keep`` when adding it
    creates no copy of a forbidden (pattern, mode).  The result is free of
    every forbidden pattern; with ``keep=1`` it is also maximal.
    """
    order = list(range(1 << n))
    if exclude_extremes:
        order = [s for s in order if s not in (0, full_set(n))]
    rng.shuffle(order)
    chosen: list[int] = []
    for s in order:
        if rng.random() >= keep:
            continue
        fam = Family.of(n, chosen + [s])
        if all(contains(fam, p, mode, anchor=s) is None for p, mode in forb):
            chosen.append(s)
    return Family.of(n, chosen)
