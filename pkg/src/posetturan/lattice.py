"""Ground-set arithmetic for the Boolean lattice 2^[n].

Subsets are plain ``int`` bitmasks: element ``i`` of ``[n] = {1..n}`` lives in
bit ``i - 1``.  For two masks of equal size, numeric order coincides with
colexicographic order, so the canonical family order is simply
``(popcount, mask)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

MAX_N = 20
MAX_CHAIN_N = 10


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceError(RuntimeError):
    """A request exceeds the enumeration bounds of the toolkit."""


def _check_n(n: int, hi: int = MAX_N, lo: int = 0) -> None:
    if not lo <= n <= hi:
        raise DomainError(f"ground-set size n={n} outside [{lo}, {hi}]")


def size(mask: int) -> int:
    return mask.bit_count()


def canonical_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


def full_set(n: int) -> int:
    return (1 << n) - 1


def subset(n: int, elements: Iterable[int]) -> int:
    """Bitmask of ``elements`` (1-based) as a subset of ``[n]``."""
    _check_n(n)
    mask = 0
    for e in elements:
        if not 1 <= e <= n:
            raise DomainError(f"element {e} not in [1, {n}]")
        bit = 1 << (e - 1)
        if mask & bit:
            raise DomainError(f"duplicate element {e}")
        mask |= bit
    return mask


def members(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def is_subset(a: int, b: int) -> bool:
    return a & b == a


def is_proper_subset(a: int, b: int) -> bool:
    return a != b and a & b == a


def comparable(a: int, b: int) -> bool:
    c = a & b
    return c == a or c == b


def format_set(mask: int) -> str:
    return "{" + ",".join(map(str, members(mask))) + "}"


def binom(n: int, i: int) -> int:
    _check_n(n)
    if i < 0 or i > n:
        return 0
    return math.comb(n, i)


def sigma(n: int, k: int) -> int:
    """Sum of the ``k`` largest binomial coefficients of order ``n``."""
    _check_n(n)
    if not 1 <= k <= n + 1:
        raise DomainError(f"k={k} outside [1, {n + 1}]")
    return sum(sorted((math.comb(n, i) for i in range(n + 1)), reverse=True)[:k])


def lym_weight(n: int, mask: int) -> int:
    """``|F|! (n-|F|)!``: the number of full chains through ``mask``."""
    s = mask.bit_count()
    return math.factorial(s) * math.factorial(n - s)


@dataclass(frozen=True)
class Family:
    """A set of distinct subsets of ``[n]`` kept in canonical (size, colex) order."""

    n: int
    sets: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_n(self.n)
        top = full_set(self.n)
        prev = None
        for s in self.sets:
            if not isinstance(s, int) or s < 0 or s & ~top:
                raise DomainError(f"{s!r} is not a subset of [{self.n}]")
            key = canonical_key(s)
            if prev is not None and key <= prev:
                if key == prev:
                    raise DomainError(f"duplicate set {format_set(s)}")
                raise DomainError("sets are not in canonical order; use Family.of")
            prev = key

    @classmethod
    def of(cls, n: int, sets: Iterable[int | Iterable[int]] = ()) -> Family:
        """Build a family from masks or iterables of 1-based elements."""
        masks = []
        for s in sets:
            masks.append(s if isinstance(s, int) else subset(n, s))
        if len(set(masks)) != len(masks):
            raise DomainError("duplicate set in family")
        return cls(n, tuple(sorted(masks, key=canonical_key)))

    @classmethod
    def from_bits(cls, n: int, bits: int) -> Family:
        """Family whose members are the positions of set bits in ``bits``."""
        masks = [s for s in range(1 << n) if bits >> s & 1]
        return cls(n, tuple(sorted(masks, key=canonical_key)))

    @cached_property
    def members_set(self) -> frozenset[int]:
        return frozenset(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    def __contains__(self, mask: object) -> bool:
        return mask in self.members_set

    def with_sets(self, *masks: int) -> Family:
        return Family.of(self.n, set(self.sets) | set(masks))

    def without_sets(self, *masks: int) -> Family:
        return Family.of(self.n, set(self.sets) - set(masks))

    def complement(self) -> Family:
        """Image under ``S -> [n] \\ S``, which reverses inclusion."""
        top = full_set(self.n)
        return Family.of(self.n, (top ^ s for s in self.sets))

    def relabel(self, perm: tuple[int, ...]) -> Family:
        """Apply the ground-set permutation ``i -> perm[i-1]``."""
        if sorted(perm) != list(range(1, self.n + 1)):
            raise DomainError(f"{perm} is not a permutation of [{self.n}]")
        return Family.of(self.n, ([perm[e - 1] for e in members(s)] for s in self.sets))

    def as_lists(self) -> list[list[int]]:
        return [list(members(s)) for s in self.sets]

    def __str__(self) -> str:
        return "{" + ", ".join(format_set(s) for s in self.sets) + "}"


def level(n: int, i: int) -> Family:
    _check_n(n)
    if not 0 <= i <= n:
        raise DomainError(f"level {i} outside [0, {n}]")
    return Family.of(n, itertools.combinations(range(1, n + 1), i))


def powerset(n: int) -> Family:
    _check_n(n)
    return Family.of(n, range(1 << n))


class FullChain(NamedTuple):
    """A maximal chain, identified with the permutation that builds it."""

    perm: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def sets(self) -> tuple[int, ...]:
        return prefix_masks(self.perm)


def prefix_masks(perm: Iterable[int], start: int = 0) -> tuple[int, ...]:
    out = [start]
    cur = start
    for e in perm:
        cur |= 1 << (e - 1)
        out.append(cur)
    return tuple(out)


def full_chains(n: int) -> Iterator[FullChain]:
    """All ``n!`` full chains of ``2^[n]`` in lexicographic permutation order."""
    if not 1 <= n <= MAX_CHAIN_N:
        raise ResourceError(f"full-chain enumeration is limited to 1 <= n <= {MAX_CHAIN_N}")
    for perm in itertools.permutations(range(1, n + 1)):
        yield FullChain(perm)


@lru_cache(maxsize=None)
def full_chain_masks(n: int) -> tuple[tuple[int, ...], ...]:
    """Set sequences of every full chain of ``2^[n]``, cached per ``n``."""
    return tuple(c.sets for c in full_chains(n))


class Interval(NamedTuple):
    lower: int
    upper: int

    @property
    def dim(self) -> int:
        return (self.upper & ~self.lower).bit_count()

    def __contains__(self, mask: object) -> bool:
        return isinstance(mask, int) and mask & self.lower == self.lower and mask & self.upper == mask


def interval(lower: int, upper: int) -> Interval:
    if lower & upper != lower:
        raise DomainError(f"{format_set(lower)} is not contained in {format_set(upper)}")
    return Interval(lower, upper)


def chains_in_interval(iv: Interval) -> Iterator[tuple[int, ...]]:
    """Saturated chains from ``iv.lower`` to ``iv.upper``, as set sequences."""
    if iv.lower & iv.upper != iv.lower:
        raise DomainError("interval lower bound is not a subset of its upper bound")
    if iv.dim > MAX_CHAIN_N:
        raise ResourceError(f"interval dimension {iv.dim} exceeds {MAX_CHAIN_N}")
    free = members(iv.upper & ~iv.lower)
    for perm in itertools.permutations(free):
        yield prefix_masks(perm, iv.lower)


# -- family file format ------------------------------------------------------


def format_family(fam: Family) -> str:
    lines = [f"n={fam.n}"]
    for s in fam.sets:
        lines.append(",".join(map(str, members(s))) if s else "{}")
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> Family:
    """Parse the ``n=<n>`` header plus one-set-per-line text format."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("n="):
        raise DomainError("family file must start with a line 'n=<integer>'")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise DomainError(f"bad header {lines[0]!r}") from None
    _check_n(n)
    masks = []
    for lineno, ln in enumerate(lines[1:], start=2):
        if ln == "{}":
            masks.append(0)
            continue
        try:
            elems = [int(tok) for tok in ln.split(",")]
        except ValueError:
            raise DomainError(f"line {lineno}: cannot parse {ln!r}") from None
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise DomainError(f"line {lineno}: elements must be strictly ascending")
        try:
            masks.append(subset(n, elems))
        except DomainError as exc:
            raise DomainError(f"line {lineno}: {exc}") from None
    if len(set(masks)) != len(masks):
        raise DomainError("duplicate set in family file")
    return Family.of(n, masks)


def read_family(path: str | Path) -> Family:
    return parse_family(Path(path).read_text(encoding="utf-8"))


def write_family(fam: Family, path: str | Path) -> None:
    Path(path).write_text(format_family(fam), encoding="utf-8")
