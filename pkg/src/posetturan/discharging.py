"""Mechanical audit of the spine/discharging counting argument.

Every quantity is an exact integer.  The audits run on any family; the
inequalities are only guaranteed when the family has no induced Y_k, no
induced Y'_k and omits both the empty set and [n], and the report says which
of those hypotheses failed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .lattice import (
    DomainError,
    Family,
    FullChain,
    ResourceError,
    canonical_key,
    chains_in_interval,
    format_set,
    full_chain_masks,
    full_set,
    interval,
    lym_weight,
    prefix_masks,
)
from .patterns import Embedding, detect_y

AUDIT_MAX_N = 8
MOREEMPTY_MAX_N = 8


class Spine(NamedTuple):
    """Saturated chain ``sets[0] < ... < sets[-1]`` holding exactly k - 1 family members."""

    sets: tuple[int, ...]
    k: int

    @property
    def bottom(self) -> int:
        return self.sets[0]

    @property
    def top(self) -> int:
        return self.sets[-1]

    def label(self) -> str:
        return "<".join(format_set(s) for s in self.sets)


@dataclass
class SpineAudit:
    a0: int
    a1: int
    b0: int
    b1: int
    direct_sum: int
    g1_is_chain: bool
    g2_is_chain: bool

    @property
    def product_sum(self) -> int:
        return self.a1 * self.b1 - self.a0 * self.b0

    @property
    def ok(self) -> bool:
        return self.direct_sum <= 0 and self.direct_sum == self.product_sum


@dataclass
class ChainAudit:
    members: int
    associated_spines: list[Spine]
    weight_sum: int


def _check_k(k: int) -> None:
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")


def _is_spine_shape(sets: tuple[int, ...]) -> bool:
    return all(b & a == a and (b ^ a).bit_count() == 1 for a, b in zip(sets, sets[1:]))


def enumerate_spines(fam: Family, k: int) -> list[Spine]:
    """All spines of ``fam``, sorted by the canonical keys of their sets."""
    _check_k(k)
    if fam.n > AUDIT_MAX_N:
        raise ResourceError(f"spine enumeration is limited to n <= {AUDIT_MAX_N}")
    n = fam.n
    inside = fam.members_set
    sets = fam.sets
    reach: dict[int, bool] = {}

    def member_above(s: int) -> bool:
        if s not in reach:
            reach[s] = any(t != s and t & s == s for t in sets)
        return reach[s]

    found: list[Spine] = []

    def grow(path: list[int], count: int) -> None:
        cur = path[-1]
        for e in range(n):
            bit = 1 << e
            if cur & bit:
                continue
            nxt = cur | bit
            if nxt in inside:
                if count + 1 == k - 1:
                    found.append(Spine(tuple(path) + (nxt,), k))
                elif member_above(nxt):
                    path.append(nxt)
                    grow(path, count + 1)
                    path.pop()
            elif member_above(nxt):
                path.append(nxt)
                grow(path, count)
                path.pop()

    for f in sets:
        if k == 2:
            found.append(Spine((f,), k))
        elif member_above(f):
            grow([f], 1)
    found.sort(key=lambda sp: [canonical_key(s) for s in sp.sets])
    return found


def _associated(chain: tuple[int, ...], inside: frozenset[int], k: int) -> tuple[int, list[tuple[int, ...]]]:
    """Member count of a chain and the set sequences of the spines it is associated with."""
    pos = [i for i, s in enumerate(chain) if s in inside]
    m = len(pos)
    if m == k - 1:
        return m, [chain[pos[0]:pos[-1] + 1]]
    if m >= k + 1:
        x = m - k
        return m, [chain[pos[j]:pos[j + k - 2] + 1] for j in range(1, x + 1)]
    return m, []


def _as_sets(c: FullChain | tuple[int, ...]) -> tuple[int, ...]:
    return c.sets if isinstance(c, FullChain) else c


def associate(c: FullChain, fam: Family, k: int) -> ChainAudit:
    """Spines that the full chain ``c`` contains as a spine, with their total weight."""
    _check_k(k)
    m, spines = _associated(_as_sets(c), fam.members_set, k)
    w = 0
    if m == k - 1:
        w = -1
    elif m >= k + 1:
        w = len(spines)
    return ChainAudit(m, [Spine(s, k) for s in spines], w)


def _weight(spine_sets: tuple[int, ...], chain: tuple[int, ...], inside: frozenset[int], k: int) -> int:
    m, spines = _associated(chain, inside, k)
    if spine_sets not in spines:
        return 0
    if m >= k + 1:
        return 1
    return -1 if m == k - 1 else 0


def weight(s: Spine, c: FullChain, fam: Family, k: int) -> int:
    _check_k(k)
    return _weight(s.sets, _as_sets(c), fam.members_set, k)


def _is_chain(sets: Iterable[int]) -> bool:
    return all(a & b == a or a & b == b for a, b in itertools.combinations(sets, 2))


def _split_counts(iv_chains: Iterable[tuple[int, ...]], marked: frozenset[int]) -> tuple[int, int]:
    avoid = hit = 0
    for ch in iv_chains:
        if any(s in marked for s in ch):
            hit += 1
        else:
            avoid += 1
    return avoid, hit


def audit_spine(fam: Family, k: int, s: Spine) -> SpineAudit:
    """Per-spine weight total, computed directly and via interval chain counts.

    The direct total runs over the full chains through the spine (all other
    full chains carry weight 0 for it) and evaluates the association rule on
    each.  ``a0/a1`` (``b0/b1``) count saturated chains of the lower (upper)
    interval that avoid/meet family members other than the spine endpoint.
    """
    _check_k(k)
    if fam.n > AUDIT_MAX_N:
        raise ResourceError(f"spine audit is limited to n <= {AUDIT_MAX_N}")
    if not _is_spine_shape(s.sets):
        raise DomainError(f"{s.label()} is not a saturated chain")
    inside = fam.members_set
    top = full_set(fam.n)
    low, high = s.bottom, s.top
    below = [t for t in fam.sets if t & low == t]
    above = [t for t in fam.sets if t & high == high]
    g1 = frozenset(below) - {low}
    g2 = frozenset(above) - {high}
    lower_chains = list(chains_in_interval(interval(0, low)))
    upper_chains = list(chains_in_interval(interval(high, top)))
    a0, a1 = _split_counts(lower_chains, g1)
    b0, b1 = _split_counts(upper_chains, g2)
    direct = 0
    for lc in lower_chains:
        head = lc[:-1] + s.sets
        for uc in upper_chains:
            direct += _weight(s.sets, head + uc[1:], inside, k)
    return SpineAudit(a0, a1, b0, b1, direct, _is_chain(below), _is_chain(above))


def per_chain_identity(fam: Family, k: int, c: FullChain) -> tuple[int, int, bool]:
    """Total weight on a chain against ``|F & C| - k``."""
    ca = associate(c, fam, k)
    rhs = ca.members - k
    return ca.weight_sum, rhs, ca.weight_sum == rhs


def double_count(fam: Family, k: int) -> tuple[int, int]:
    """``sum over full chains of (|F & C| - k)`` and ``sum |F|!(n-|F|)! - k n!``."""
    n = fam.n
    if n > AUDIT_MAX_N:
        raise ResourceError(f"double count is limited to n <= {AUDIT_MAX_N}")
    inside = fam.members_set
    chain_side = 0
    chains = full_chain_masks(n) if n >= 1 else ((0,),)
    for ch in chains:
        chain_side += sum(1 for s in ch if s in inside) - k
    factorial_side = sum(lym_weight(n, s) for s in fam.sets) - k * math.factorial(n)
    return chain_side, factorial_side


def lym_check(fam: Family, k: int) -> tuple[int, int, bool]:
    """Cross-multiplied LYM test ``sum |F|!(n-|F|)! <= k n!``."""
    lhs = sum(lym_weight(fam.n, s) for s in fam.sets)
    rhs = k * math.factorial(fam.n)
    return lhs, rhs, lhs <= rhs


class MoreEmpty(NamedTuple):
    avoiding: int
    hitting: int
    injection_ok: bool


def prefix_set(j: int) -> int:
    return (1 << j) - 1


def moreempty_check(n: int, g: Iterable[int]) -> MoreEmpty:
    """Chains avoiding vs meeting a family of prefix sets {1..j}, plus the swap injection.

    For a chain meeting the family, take the last member ``{1..j}`` on it and
    the position ``i`` holding 1, then swap positions ``i`` and ``j + 1`` of
    the permutation.  The injection is checked to be one-to-one and to land
    among the avoiding chains.
    """
    if not 2 <= n <= MOREEMPTY_MAX_N:
        raise DomainError(f"n={n} outside [2, {MOREEMPTY_MAX_N}]")
    g = frozenset(g)
    prefixes = {prefix_set(j) for j in range(1, n)}
    bad = g - prefixes
    if bad:
        raise DomainError(f"{', '.join(format_set(s) for s in sorted(bad))} not of the form {{1..j}}, 1 <= j < n")
    avoiding = hitting = 0
    images: set[tuple[int, ...]] = set()
    ok = True
    for perm in itertools.permutations(range(1, n + 1)):
        chain = prefix_masks(perm)
        hits = [j for j in range(1, n) if chain[j] in g]
        if not hits:
            avoiding += 1
            continue
        hitting += 1
        j = hits[-1]
        i = perm.index(1)  # 0-based; i < j since {x_1..x_j} = {1..j}
        swapped = list(perm)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        image = tuple(swapped)
        if image in images or any(s in g for s in prefix_masks(image)):
            ok = False
        images.add(image)
    return MoreEmpty(avoiding, hitting, ok and avoiding >= hitting)


@dataclass
class AuditReport:
    n: int
    k: int
    spines: list[tuple[Spine, SpineAudit]]
    eq2_lhs: int
    eq2_rhs: int
    double_count_lhs: int
    double_count_rhs: int
    lym_lhs: int
    lym_rhs: int
    chains_below_k_minus_1: int
    hypotheses: dict[str, bool]
    witnesses: dict[str, Embedding] = field(default_factory=dict)

    @property
    def hypotheses_ok(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def lym_holds(self) -> bool:
        return self.lym_lhs <= self.lym_rhs

    @property
    def identities_hold(self) -> bool:
        """Checks that hold for every family, hypotheses or not."""
        return (self.eq2_lhs == self.eq2_rhs
                and self.double_count_lhs == self.double_count_rhs
                and all(a.direct_sum == a.product_sum for _, a in self.spines))

    @property
    def inequalities_hold(self) -> bool:
        return self.lym_holds and self.eq2_lhs <= 0 and all(a.direct_sum <= 0 for _, a in self.spines)

    @property
    def all_ok(self) -> bool:
        return self.identities_hold and self.inequalities_hold

    @property
    def sound(self) -> bool:
        """False only when something the hypotheses guarantee actually fails."""
        return self.identities_hold and (not self.hypotheses_ok or self.inequalities_hold)

    def violations(self) -> list[str]:
        out = []
        for sp, a in self.spines:
            if a.direct_sum > 0:
                out.append(f"spine {sp.label()} has positive weight total {a.direct_sum}")
            if a.direct_sum != a.product_sum:
                out.append(f"spine {sp.label()}: direct {a.direct_sum} != product {a.product_sum}")
        if self.eq2_lhs != self.eq2_rhs:
            out.append(f"summation orders disagree: {self.eq2_lhs} != {self.eq2_rhs}")
        if self.double_count_lhs != self.double_count_rhs:
            out.append(f"double count disagrees: {self.double_count_lhs} != {self.double_count_rhs}")
        if not self.lym_holds:
            out.append(f"LYM sum exceeded: {self.lym_lhs} > {self.lym_rhs}")
        return out

    def warnings(self) -> list[str]:
        out = []
        for name, held in self.hypotheses.items():
            if not held:
                msg = f"hypothesis violated: {name}"
                if name in self.witnesses:
                    msg += f" (witness {self.witnesses[name]})"
                out.append(msg)
        return out


HYP_NO_Y = "no induced Y_k"
HYP_NO_YD = "no induced Y'_k"
HYP_EXTREMES = "∅,[n] ∉ F"
HYP_SIZE = "n >= k+1"


def hypotheses(fam: Family, k: int) -> tuple[dict[str, bool], dict[str, Embedding]]:
    wy = detect_y(fam, k, 2)
    wd = detect_y(fam, k, 2, dualized=True)
    hyp = {
        HYP_NO_Y: wy is None,
        HYP_NO_YD: wd is None,
        HYP_EXTREMES: 0 not in fam and full_set(fam.n) not in fam,
        HYP_SIZE: fam.n >= k + 1,
    }
    wit = {}
    if wy is not None:
        wit[HYP_NO_Y] = wy
    if wd is not None:
        wit[HYP_NO_YD] = wd
    return hyp, wit


def full_audit(fam: Family, k: int) -> AuditReport:
    """Every check of the discharging argument on one family.

    The two summation orders are computed by separate paths: per spine over
    the chains through it, and per chain over its associated spines.
    """
    _check_k(k)
    n = fam.n
    if not 1 <= n <= AUDIT_MAX_N:
        raise ResourceError(f"full audit is limited to 1 <= n <= {AUDIT_MAX_N}")
    spines = [(sp, audit_spine(fam, k, sp)) for sp in enumerate_spines(fam, k)]
    eq2_lhs = sum(a.direct_sum for _, a in spines)
    eq2_rhs = 0
    sparse = 0
    inside = fam.members_set
    for ch in full_chain_masks(n):
        m, assoc = _associated(ch, inside, k)
        if m == k - 1:
            eq2_rhs -= 1
        elif m >= k + 1:
            eq2_rhs += len(assoc)
        elif m < k - 1:
            sparse += 1
    dc_l, dc_r = double_count(fam, k)
    lym_l, lym_r, _ = lym_check(fam, k)
    hyp, wit = hypotheses(fam, k)
    return AuditReport(n, k, spines, eq2_lhs, eq2_rhs, dc_l, dc_r, lym_l, lym_r, sparse, hyp, wit)

