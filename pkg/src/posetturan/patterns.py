"""Finite poset patterns and weak/induced containment inside a family."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Literal

from .lattice import DomainError, Family, ResourceError, format_set, full_set

Mode = Literal["weak", "induced"]
MODES = ("weak", "induced")
MAX_PATTERN = 12


@dataclass(frozen=True)
class Pattern:
    """A strict partial order on ``m`` elements.

    ``lt[i][j]`` is true iff element ``i`` is strictly below element ``j``.
    """

    m: int
    lt: tuple[tuple[bool, ...], ...]
    label: str
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        m, lt = self.m, self.lt
        if len(lt) != m or any(len(row) != m for row in lt):
            raise DomainError("relation matrix must be m x m")
        for i in range(m):
            if lt[i][i]:
                raise DomainError(f"relation is not irreflexive at {i}")
            for j in range(m):
                if lt[i][j] and lt[j][i]:
                    raise DomainError(f"relation is not antisymmetric at ({i}, {j})")
                if lt[i][j]:
                    for t in range(m):
                        if lt[j][t] and not lt[i][t]:
                            raise DomainError(f"relation is not transitive at ({i}, {j}, {t})")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"p{i + 1}" for i in range(m)))
        elif len(self.names) != m:
            raise DomainError("names must have one entry per element")

    def relations(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.m) for j in range(self.m) if self.lt[i][j]]

    def up_count(self, i: int) -> int:
        return sum(self.lt[i])

    def down_count(self, i: int) -> int:
        return sum(row[i] for row in self.lt)

    def __len__(self) -> int:
        return self.m


def from_relations(m: int, pairs: Iterable[tuple[int, int]], label: str,
                   names: Iterable[str] = ()) -> Pattern:
    """Pattern generated by ``pairs`` (closed transitively)."""
    rel = [[False] * m for _ in range(m)]
    for a, b in pairs:
        rel[a][b] = True
    for t in range(m):
        for i in range(m):
            if rel[i][t]:
                for j in range(m):
                    if rel[t][j]:
                        rel[i][j] = True
    return Pattern(m, tuple(tuple(r) for r in rel), label, tuple(names))


def dual(p: Pattern) -> Pattern:
    lt = tuple(tuple(p.lt[j][i] for j in range(p.m)) for i in range(p.m))
    label = p.label[:-1] if p.label.endswith("'") else p.label + "'"
    return Pattern(p.m, lt, label, p.names)


def make_y(k: int, r: int) -> Pattern:
    """The r-fork with a k-shaft: a k-chain whose top sits below r incomparable tops."""
    if k < 1 or r < 2:
        raise DomainError(f"Y needs k >= 1 and r >= 2, got k={k}, r={r}")
    pairs = [(i, i + 1) for i in range(k - 1)]
    pairs += [(k - 1, k + j) for j in range(r)]
    names = [f"x{i + 1}" for i in range(k)] + [f"y{j + 1}" for j in range(r)]
    return from_relations(k + r, pairs, f"Y{k},{r}", names)


def make_chain(k: int) -> Pattern:
    if k < 1:
        raise DomainError(f"chain length must be >= 1, got {k}")
    return from_relations(k, [(i, i + 1) for i in range(k - 1)], f"P{k}",
                          [f"a{i + 1}" for i in range(k)])


def make_fork(r: int) -> Pattern:
    p = make_y(1, r)
    return Pattern(p.m, p.lt, f"V{r}", p.names)


def make_brush(r: int) -> Pattern:
    p = dual(make_fork(r))
    return Pattern(p.m, p.lt, f"L{r}", p.names)


def make_butterfly() -> Pattern:
    return from_relations(4, [(0, 2), (0, 3), (1, 2), (1, 3)], "B", "abcd")


def make_diamond() -> Pattern:
    return from_relations(4, [(0, 1), (0, 2), (1, 3), (2, 3)], "D2", "abcd")


_LITERAL = re.compile(r"^(Pk|P|Y'|Y|V|L|B|D2)(?::(\d+)(?:,(\d+))?)?$")


def parse_pattern(text: str) -> Pattern:
    """Parse ``Pk:<k>``, ``Y:<k>,<r>``, ``Y':<k>,<r>``, ``V:<r>``, ``L:<r>``, ``B``, ``D2``."""
    m = _LITERAL.match(text.strip())
    if not m:
        raise DomainError(f"unrecognised pattern literal {text!r}")
    kind, a, b = m.groups()
    a = int(a) if a is not None else None
    b = int(b) if b is not None else None
    if kind in ("B", "D2"):
        if a is not None:
            raise DomainError(f"{kind} takes no parameters")
        return make_butterfly() if kind == "B" else make_diamond()
    if kind in ("Pk", "P", "V", "L"):
        if a is None or b is not None:
            raise DomainError(f"{kind} takes exactly one parameter")
        if kind in ("Pk", "P"):
            return make_chain(a)
        return make_fork(a) if kind == "V" else make_brush(a)
    if a is None or b is None:
        raise DomainError(f"{kind} takes two parameters k,r")
    y = make_y(a, b)
    return y if kind == "Y" else dual(y)


@dataclass(frozen=True)
class Embedding:
    """Injection from pattern elements to family members (``images[i]`` is element i's set)."""

    pattern: Pattern
    mode: str
    images: tuple[int, ...]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.pattern.names, self.images))

    def __str__(self) -> str:
        return ", ".join(f"{nm}->{format_set(s)}" for nm, s in zip(self.pattern.names, self.images))


def is_embedding(fam: Family, p: Pattern, images: tuple[int, ...], mode: str) -> bool:
    """Direct check of the weak/induced embedding conditions."""
    if len(images) != p.m or len(set(images)) != p.m:
        return False
    if any(s not in fam for s in images):
        return False
    for i in range(p.m):
        for j in range(p.m):
            if i == j:
                continue
            sub = images[i] & images[j] == images[i]
            if p.lt[i][j] and not sub:
                return False
            if mode == "induced" and sub and not p.lt[i][j]:
                return False
    return True


def _element_order(p: Pattern) -> list[int]:
    """Search order: most comparabilities first, each later element tied to earlier ones."""
    deg = [p.up_count(i) + p.down_count(i) for i in range(p.m)]
    order: list[int] = []
    left = set(range(p.m))
    while left:
        def score(i: int) -> tuple[int, int, int]:
            links = sum(1 for j in order if p.lt[i][j] or p.lt[j][i])
            return (-links, -deg[i], i)
        nxt = min(left, key=score)
        order.append(nxt)
        left.remove(nxt)
    return order


def contains(fam: Family, p: Pattern, mode: str = "induced",
             anchor: int | None = None) -> Embedding | None:
    """Find an embedding of ``p`` into ``fam``, or ``None``.

    Backtracking over pattern elements, pruned by the number of family
    members strictly above/below each candidate.  With ``anchor`` set, only
    embeddings whose image contains that set are considered.
    """
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    if p.m > MAX_PATTERN:
        raise ResourceError(f"pattern has {p.m} elements, limit is {MAX_PATTERN}")
    sets = fam.sets
    if anchor is not None and anchor not in fam:
        return None
    if p.m > len(sets):
        return None
    induced = mode == "induced"
    nf = len(sets)
    up = [0] * nf
    down = [0] * nf
    for a in range(nf):
        sa = sets[a]
        for b in range(a + 1, nf):
            sb = sets[b]
            # canonical order puts a proper subset before its supersets
            if sa & sb == sa:
                up[a] += 1
                down[b] += 1
    need_up = [p.up_count(i) for i in range(p.m)]
    need_down = [p.down_count(i) for i in range(p.m)]
    cands = [
        [s for idx, s in enumerate(sets) if up[idx] >= need_up[i] and down[idx] >= need_down[i]]
        for i in range(p.m)
    ]
    order = _element_order(p)
    lt = p.lt
    img: list[int | None] = [None] * p.m
    used: set[int] = set()

    def fits(i: int, s: int) -> bool:
        for j in range(p.m):
            t = img[j]
            if t is None:
                continue
            if lt[i][j]:
                if s & t != s:
                    return False
            elif lt[j][i]:
                if s & t != t:
                    return False
            elif induced:
                c = s & t
                if c == s or c == t:
                    return False
        return True

    def extend(pos: int) -> bool:
        if pos == p.m:
            return True
        i = order[pos]
        if img[i] is not None:
            return extend(pos + 1)
        for s in cands[i]:
            if s in used or not fits(i, s):
                continue
            img[i] = s
            used.add(s)
            if extend(pos + 1):
                return True
            used.discard(s)
            img[i] = None
        return False

    if anchor is None:
        if extend(0):
            return Embedding(p, mode, tuple(img))  # type: ignore[arg-type]
        return None
    for i in order:
        if anchor not in cands[i]:
            continue
        img[i] = anchor
        used.add(anchor)
        if extend(0):
            return Embedding(p, mode, tuple(img))  # type: ignore[arg-type]
        img[i] = None
        used.clear()
    return None


def _longest_chain_below(sets: tuple[int, ...]) -> dict[int, int]:
    best: dict[int, int] = {}
    for s in sets:  # canonical order: subsets come first
        h = 1
        for t, ht in best.items():
            if t != s and t & s == t and ht + 1 > h:
                h = ht + 1
        best[s] = h
    return best


def _first_antichain(cands: list[int], r: int) -> tuple[int, ...] | None:
    for combo in itertools.combinations(cands, r):
        if all(a & b != a and a & b != b for a, b in itertools.combinations(combo, 2)):
            return combo
    return None


def detect_y(fam: Family, k: int, r: int, dualized: bool = False) -> Embedding | None:
    """Induced copy of Y_{k,r} (or its dual) found directly from chain heights."""
    if k < 1 or r < 2:
        raise DomainError(f"Y needs k >= 1 and r >= 2, got k={k}, r={r}")
    if dualized:
        top = full_set(fam.n)
        emb = detect_y(fam.complement(), k, r)
        if emb is None:
            return None
        return Embedding(dual(make_y(k, r)), "induced", tuple(top ^ s for s in emb.images))
    sets = fam.sets
    height = _longest_chain_below(sets)
    for s in sets:
        if height[s] < k:
            continue
        above = [t for t in sets if t != s and s & t == s]
        if len(above) < r:
            continue
        tops = _first_antichain(above, r)
        if tops is None:
            continue
        chain = [s]
        cur = s
        for need in range(k - 1, 0, -1):
            cur = next(t for t in sets
                       if t != cur and t & cur == t and height[t] >= need)
            chain.append(cur)
        chain.reverse()
        return Embedding(make_y(k, r), "induced", tuple(chain) + tops)
    return None
