"""Exact extremal numbers La(n, .) and La#(n, .) by branch and bound."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .lattice import DomainError, Family, canonical_key, lym_weight, MAX_N, sigma
from .patterns import MODES, Pattern, contains, dual, make_y

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
SEARCH_MAX_N = 6


class Forbidden(NamedTuple):
    pattern: Pattern
    mode: str


def forbidden_set(items: Iterable[tuple[Pattern, str]]) -> tuple[Forbidden, ...]:
    out = tuple(Forbidden(p, m) for p, m in items)
    if not out:
        raise DomainError("forbidden set must be non-empty")
    for f in out:
        if not isinstance(f.pattern, Pattern):
            raise DomainError(f"{f.pattern!r} is not a Pattern")
        if f.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {f.mode!r}")
    return out


def is_free(fam: Family, forb: Sequence[tuple[Pattern, str]]) -> bool:
    return all(contains(fam, p, mode) is None for p, mode in forb)


@dataclass
class SearchResult:
    optimum: int
    witness: Family
    nodes_explored: int
    exhaustive: bool
    lym_pruned: bool = False
    budget_hit: bool = False


def candidate_order(n: int) -> list[int]:
    """All subsets, closest to the middle level first, then canonical order."""
    return sorted(range(1 << n), key=lambda s: (abs(2 * s.bit_count() - n), canonical_key(s)))


class _Search:
    def __init__(self, n: int, forb: Sequence[Forbidden], budget: int,
                 lym_k: int | None, symmetry: bool) -> None:
        self.n = n
        self.forb = forb
        self.budget = budget
        self.lym_cap = None
        if lym_k is not None:
            self.lym_cap = lym_k * math.factorial(n)
        self.symmetry = symmetry
        self.nodes = 0
        self.out_of_budget = False
        self.best: tuple[int, ...] = ()
        self.best_size = -1

    def creates_copy(self, chosen: tuple[int, ...], s: int) -> bool:
        fam = Family.of(self.n, chosen + (s,))
        return any(contains(fam, f.pattern, f.mode, anchor=s) is not None for f in self.forb)

    def bound(self, chosen: tuple[int, ...], rest: list[int]) -> int:
        b = len(chosen) + len(rest)
        if self.lym_cap is not None:
            room = self.lym_cap - sum(lym_weight(self.n, s) for s in chosen)
            extra = 0
            for w in sorted(lym_weight(self.n, s) for s in rest):
                if w > room:
                    break
                room -= w
                extra += 1
            b = min(b, len(chosen) + extra)
        return b

    def run(self, chosen: tuple[int, ...], rest: list[int]) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            self.out_of_budget = True
            return
        if len(chosen) > self.best_size:
            self.best, self.best_size = chosen, len(chosen)
        if not rest or self.bound(chosen, rest) <= self.best_size:
            return
        s, tail = rest[0], rest[1:]
        if self._may_include(chosen, s):
            grown = chosen + (s,)
            survivors = [t for t in tail if not self.creates_copy(grown, t)]
            self.run(grown, survivors)
            if self.out_of_budget:
                return
        self.run(chosen, tail)

    def _may_include(self, chosen: tuple[int, ...], s: int) -> bool:
        # orbit representative: the first chosen set of its level is {1..i}
        if not self.symmetry or chosen:
            return True
        return s == (1 << s.bit_count()) - 1


def _initial_pool(n: int, forb: Sequence[Forbidden]) -> list[int]:
    pool = []
    for s in candidate_order(n):
        fam = Family.of(n, [s])
        if is_free(fam, forb):
            pool.append(s)
    return pool


def _split(search: _Search, pool: list[int], depth: int) -> list[tuple[tuple[int, ...], list[int]]]:
    """Frontier of the include/exclude tree after ``depth`` decisions, in DFS order."""
    frontier = [((), pool)]
    for _ in range(depth):
        nxt = []
        for chosen, rest in frontier:
            if not rest:
                nxt.append((chosen, rest))
                continue
            s, tail = rest[0], rest[1:]
            if search._may_include(chosen, s):
                grown = chosen + (s,)
                nxt.append((grown, [t for t in tail if not search.creates_copy(grown, t)]))
            nxt.append((chosen, tail))
        frontier = nxt
    return frontier


def _solve_subtree(args) -> tuple[tuple[int, ...], int, bool]:
    n, forb, budget, lym_k, symmetry, chosen, rest = args
    s = _Search(n, forb, budget, lym_k, symmetry)
    s.run(chosen, rest)
    return s.best, s.nodes, s.out_of_budget


def extremal(n: int, forb: Iterable[tuple[Pattern, str]], *, budget: int = DEFAULT_BUDGET,
             lym_k: int | None = None, symmetry: bool = False, workers: int = 1) -> SearchResult:
    """Largest family in 2^[n] avoiding every (pattern, mode) in ``forb``.

    Include/exclude branching over subsets ordered middle-out.  Every include
    step filters the remaining candidates down to those that can still be
    added without creating a copy, and the bound is chosen + remaining.
    ``lym_k`` additionally caps the sum of chain weights at ``lym_k * n!``;
    that cap is a heuristic for general pattern sets, so results obtained with
    it are never flagged exhaustive.
    """
    forb = forbidden_set(forb)
    if not 0 <= n <= min(MAX_N, SEARCH_MAX_N):
        raise DomainError(f"extremal search supports 0 <= n <= {SEARCH_MAX_N}")
    if budget < 1:
        raise DomainError("budget must be positive")
    pool = _initial_pool(n, forb)
    if workers <= 1:
        s = _Search(n, forb, budget, lym_k, symmetry)
        s.run((), pool)
        best, nodes, over = s.best, s.nodes, s.out_of_budget
    else:
        best, nodes, over = _parallel(n, forb, budget, lym_k, symmetry, pool, workers)
    witness = Family.of(n, best)
    if not is_free(witness, forb):  # re-check without the anchored fast path
        raise AssertionError(f"search produced an invalid witness {witness}")
    log.debug("extremal n=%d optimum=%d nodes=%d", n, len(witness), nodes)
    return SearchResult(len(witness), witness, nodes, not over and lym_k is None, lym_k is not None, over)


def _parallel(n, forb, budget, lym_k, symmetry, pool, workers):
    probe = _Search(n, forb, budget, lym_k, symmetry)
    depth = min(len(pool), max(1, (4 * workers - 1).bit_length()))
    frontier = _split(probe, pool, depth)
    jobs = [(n, forb, budget, lym_k, symmetry, c, r) for c, r in frontier]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(_solve_subtree, jobs))
    best: tuple[int, ...] = ()
    nodes = probe.nodes
    over = False
    # frontier is in DFS order, so strict improvement keeps the serial witness
    for b, k, o in results:
        nodes += k
        over = over or o
        if len(b) > len(best):
            best = b
    return best, nodes, over


def brute_force_extremal(n: int, is_free_bits) -> tuple[int, int]:
    """Scan every one of the 2^(2^n) families; returns (optimum, family bits).

    ``is_free_bits(bits)`` decides a family given as a bitmask over subset
    indices.  Used as an independent oracle for :func:`extremal`.
    """
    if n > 4:
        raise DomainError("brute force is limited to n <= 4")
    best_bits, best = 0, 0
    for bits in range(1 << (1 << n)):
        c = bits.bit_count()
        if is_free_bits(bits) and c > best:
            best, best_bits = c, bits
    return best, best_bits


def y_pair(k: int, r: int = 2) -> tuple[Forbidden, Forbidden]:
    y = make_y(k, r)
    return Forbidden(y, "induced"), Forbidden(dual(y), "induced")


def witness_exceeding_sigma(n: int, k: int, side: str = "Y", *,
                            budget: int = DEFAULT_BUDGET) -> Family | None:
    """A family free of induced Y_k (or Y'_k) that is larger than Sigma(n, k), if one exists."""
    if side not in ("Y", "Y'"):
        raise DomainError(f"side must be 'Y' or \"Y'\", got {side!r}")
    y = make_y(k, 2)
    pat = y if side == "Y" else dual(y)
    res = extremal(n, [(pat, "induced")], budget=budget)
    if res.optimum > sigma(n, k):
        return res.witness
    return None


@dataclass
class ScanRow:
    k: int
    r: int
    n: int
    optimum: int
    sigma: int
    exhaustive: bool
    nodes: int = field(default=0, compare=False)

    @property
    def consistent(self) -> bool:
        return self.exhaustive and self.optimum == self.sigma


def conjecture_scan(k_range: Iterable[int], r_range: Iterable[int], n_range: Iterable[int], *,
                    budget: int = DEFAULT_BUDGET, workers: int = 1) -> list[ScanRow]:
    """Tabulate La#(n, {Y_{k,r}, Y'_{k,r}}) against Sigma(n, k).

    Rows with k > n + 1 have no Sigma(n, k) and are skipped.
    """
    rows = []
    for k in k_range:
        for r in r_range:
            for n in n_range:
                if k > n + 1:
                    continue
                res = extremal(n, y_pair(k, r), budget=budget, workers=workers)
                row = ScanRow(k, r, n, res.optimum, sigma(n, k), res.exhaustive, res.nodes_explored)
                if row.exhaustive and row.optimum < row.sigma:
                    raise AssertionError(f"optimum below the middle-levels bound in row {row}")
                rows.append(row)
    return rows
