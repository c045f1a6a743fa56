"""Combinatorics of FIN, the nonempty finite subsets of the naturals.

Block sequences of finite sets, finite-union closure, support projection,
brute-force monochromatic searches in the style of Hindman and
Milliken-Taylor, and min/max traces.  Searches scan candidates in a fixed
canonical order so that "first witness" is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .errors import Budget, ExhaustionError

__all__ = [
    "FinSet",
    "FinBlockSeq",
    "Coloring",
    "fin_set",
    "fin_blocks",
    "finite_unions",
    "fin_dominates",
    "supp_seq",
    "min_max_trace",
    "nonempty_subsets",
    "fin_block_sequences",
    "block_tuples_from",
    "hindman_color_of",
    "hindman_search",
    "milliken_color_of",
    "milliken_search",
    "least_hindman_universe",
    "builtin_coloring",
    "table_coloring",
    "finset_key",
    "parse_finset_key",
    "HINDMAN_THRESHOLDS",
]


@dataclass(frozen=True)
class FinSet:
    """A nonempty finite set of naturals, stored sorted."""

    elements: tuple[int, ...]

    def __post_init__(self):
        if not self.elements:
            raise ValueError("FinSet must be nonempty")
        if any(e < 0 for e in self.elements):
            raise ValueError("FinSet elements must be naturals")
        if any(a >= b for a, b in zip(self.elements, self.elements[1:])):
            raise ValueError("FinSet elements must be strictly increasing")

    @property
    def min(self) -> int:
        return self.elements[0]

    @property
    def max(self) -> int:
        return self.elements[-1]

    def union(self, other: "FinSet") -> "FinSet":
        return FinSet(tuple(sorted(set(self.elements) | set(other.elements))))

    def issubset(self, other: "FinSet") -> bool:
        return set(self.elements) <= set(other.elements)

    def __contains__(self, n: int) -> bool:
        return n in self.elements

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def fin_set(elements: Iterable[int]) -> FinSet:
    return FinSet(tuple(sorted(set(elements))))


@dataclass(frozen=True)
class FinBlockSeq:
    """A finite block sequence in FIN: max of each entry below min of the next."""

    entries: tuple[FinSet, ...]

    def __post_init__(self):
        for a, b in zip(self.entries, self.entries[1:]):
            if a.max >= b.min:
                raise ValueError(
                    f"entries {a.elements} and {b.elements} are not block-separated"
                )

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[FinSet]:
        return iter(self.entries)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return FinBlockSeq(self.entries[i])
        return self.entries[i]


def fin_blocks(*entry_sets: Iterable[int]) -> FinBlockSeq:
    return FinBlockSeq(tuple(fin_set(s) for s in entry_sets))


def finite_unions(A: FinBlockSeq, budget: int | None = None) -> frozenset[FinSet]:
    """All unions of nonempty subfamilies of A's entries; size 2^|A| - 1."""
    guard = Budget(budget)
    guard.require(1 << len(A))
    out: list[FinSet] = []
    for mask in range(1, 1 << len(A)):
        elems: list[int] = []
        for i, a in enumerate(A):
            if mask & (1 << i):
                elems.extend(a.elements)
        out.append(FinSet(tuple(sorted(elems))))
    return frozenset(out)


def fin_dominates(A: FinBlockSeq, B: FinBlockSeq) -> bool:
    """A is dominated by B when each entry of A is a union of entries of B."""
    for a in A:
        a_set = set(a.elements)
        covered: set[int] = set()
        for b in B:
            if b.issubset(a):
                covered |= set(b.elements)
        if covered != a_set:
            return False
    return True


def supp_seq(X) -> FinBlockSeq:
    """Entrywise support of a vector block sequence (duck-typed on .support)."""
    return FinBlockSeq(tuple(x.support for x in X))


def min_max_trace(A: FinBlockSeq) -> tuple[frozenset[int], frozenset[int]]:
    """The sets of entry minima and entry maxima."""
    return frozenset(a.min for a in A), frozenset(a.max for a in A)


# ---------------------------------------------------------------------------
# Canonical candidate enumeration.
#
# FinSets are ordered lexicographically as sorted tuples, block sequences of a
# fixed length lexicographically entry by entry.  The generators below emit in
# exactly that order, which pins down every "first witness" in this module.
# ---------------------------------------------------------------------------


def nonempty_subsets(lo: int, hi: int) -> Iterator[FinSet]:
    """Nonempty subsets of [lo, hi) in lexicographic sorted-tuple order."""

    def extend(prefix: tuple[int, ...]) -> Iterator[FinSet]:
        yield FinSet(prefix)
        for nxt in range(prefix[-1] + 1, hi):
            yield from extend(prefix + (nxt,))

    for first in range(lo, hi):
        yield from extend((first,))


def fin_block_sequences(
    universe: int, length: int, start: int = 0
) -> Iterator[FinBlockSeq]:
    """Length-``length`` block sequences within [start, universe), canonically."""
    if length == 0:
        yield FinBlockSeq(())
        return
    for a in nonempty_subsets(start, universe):
        for rest in fin_block_sequences(universe, length - 1, a.max + 1):
            yield FinBlockSeq((a,) + rest.entries)


def block_tuples_from(
    pool: Iterable[FinSet], k: int
) -> Iterator[tuple[FinSet, ...]]:
    """Length-k tuples from ``pool`` in block position (max < next min)."""
    ordered = sorted(pool, key=lambda s: s.elements)

    def extend(prefix: tuple[FinSet, ...]) -> Iterator[tuple[FinSet, ...]]:
        if len(prefix) == k:
            yield prefix
            return
        floor = prefix[-1].max if prefix else -1
        for s in ordered:
            if s.min > floor:
                yield from extend(prefix + (s,))

    yield from extend(())


# ---------------------------------------------------------------------------
# Colorings and monochromatic searches.
# ---------------------------------------------------------------------------


def finset_key(s: FinSet) -> str:
    """Canonical string form of a FinSet, e.g. "0,2,5"."""
    return ",".join(str(e) for e in s.elements)


def parse_finset_key(key: str) -> FinSet:
    return fin_set(int(tok) for tok in key.split(","))


@dataclass(frozen=True)
class Coloring:
    """A total coloring of FinSets (arity 1) or length-k FinBlockSeqs (arity k)."""

    name: str
    universe: int
    colors: int
    arity: int = 1
    fn: Callable = field(compare=False, repr=False, default=None)

    def of(self, obj) -> int:
        c = self.fn(obj)
        if not 0 <= c < self.colors:
            raise ValueError(f"coloring {self.name} emitted out-of-range color {c}")
        return c


def builtin_coloring(name: str, universe: int, colors: int = 2) -> Coloring:
    """Named colorings: const, min-parity, card-parity (sets), adjacency (pairs)."""
    if name == "const":
        return Coloring(name, universe, colors, 1, lambda a: 0)
    if name == "min-parity":
        return Coloring(name, universe, 2, 1, lambda a: a.min % 2)
    if name == "card-parity":
        return Coloring(name, universe, 2, 1, lambda a: len(a) % 2)
    if name == "adjacency":
        return Coloring(
            name, universe, 2, 2, lambda t: 1 if t[0].max + 1 == t[1].min else 0
        )
    raise ValueError(f"unknown built-in coloring {name!r}")


def table_coloring(
    table: dict, universe: int, colors: int, arity: int = 1, name: str = "table"
) -> Coloring:
    """Extensional coloring from a {canonical key: color} table.

    Keys are FinSet strings for arity 1, ";"-joined FinSet strings for k >= 2.
    """

    def fn(obj):
        if arity == 1:
            key = finset_key(obj)
        else:
            key = ";".join(finset_key(s) for s in obj)
        if key not in table:
            raise ValueError(f"coloring table is not total: missing {key!r}")
        return table[key]

    return Coloring(name, universe, colors, arity, fn)


def hindman_color_of(coloring: Coloring, A: FinBlockSeq) -> Optional[int]:
    """The single color of finite_unions(A), or None if not monochromatic."""
    seen: set[int] = set()
    for u in finite_unions(A):
        seen.add(coloring.of(u))
        if len(seen) > 1:
            return None
    return next(iter(seen))


def hindman_search(
    coloring: Coloring, length: int, budget: int | None = None
) -> Optional[tuple[FinBlockSeq, int]]:
    """First (canonical order) length-``length`` A with ⟨A⟩ monochromatic.

    Absence after exhausting all candidates is a legitimate finite-scale
    outcome, not an error.
    """
    if coloring.arity != 1:
        raise ValueError("hindman_search needs a set coloring (arity 1)")
    guard = Budget(budget)
    for A in fin_block_sequences(coloring.universe, length):
        guard.spend(1 << length)
        color = hindman_color_of(coloring, A)
        if color is not None:
            return A, color
    return None


def milliken_color_of(
    coloring: Coloring, A: FinBlockSeq, k: int
) -> Optional[int]:
    """The single color of all k-tuples in block position from ⟨A⟩, or None."""
    unions = finite_unions(A)
    seen: set[int] = set()
    for t in block_tuples_from(unions, k):
        obj = t[0] if k == 1 else FinBlockSeq(t)
        seen.add(coloring.of(obj))
        if len(seen) > 1:
            return None
    if not seen:
        return None
    return next(iter(seen))


def milliken_search(
    coloring: Coloring, k: int, length: int, budget: int | None = None
) -> Optional[tuple[FinBlockSeq, int]]:
    """First A of the given length all of whose block k-tuples share a color."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if length < k:
        raise ValueError("length must be at least k, else no k-tuples exist")
    guard = Budget(budget)
    per_candidate = (1 << length) ** k
    for A in fin_block_sequences(coloring.universe, length):
        guard.spend(per_candidate)
        color = milliken_color_of(coloring, A, k)
        if color is not None:
            return A, color
    return None


# Least universe size guaranteeing a length-L monochromatic witness for every
# coloring with the given number of colors.  Computed by
# least_hindman_universe during bring-up and pinned; regression-tested, never
# assumed.
HINDMAN_THRESHOLDS: dict[tuple[int, int], int] = {
    (1, 2): 1,
    (2, 2): 5,
}


def least_hindman_universe(
    length: int, colors: int = 2, max_universe: int = 8, budget: int | None = None
) -> Optional[int]:
    """Least N so that every coloring of FIN∩[0,N) has a length-L witness.

    Backtracking search for an avoiding coloring at each N; None when no
    threshold is found at or below ``max_universe``.
    """
    guard = Budget(budget)
    for n in range(1, max_universe + 1):
        sets = list(nonempty_subsets(0, n))
        index = {s: i for i, s in enumerate(sets)}
        candidates = []
        for A in fin_block_sequences(n, length):
            candidates.append([index[u] for u in finite_unions(A)])
        # watch[i] lists candidates whose last-assigned set is i
        by_max = [[] for _ in sets]
        for cand in candidates:
            by_max[max(cand)].append(cand)
        assignment = [-1] * len(sets)

        def avoids(pos: int) -> bool:
            guard.spend()
            if pos == len(sets):
                return True
            for color in range(colors if pos > 0 else 1):
                assignment[pos] = color
                if all(
                    any(assignment[i] != assignment[cand[0]] for i in cand)
                    for cand in by_max[pos]
                ):
                    if avoids(pos + 1):
                        return True
            assignment[pos] = -1
            return False

        if not candidates:
            continue
        if not avoids(0):
            return n
    return None
