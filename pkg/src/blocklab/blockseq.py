"""Block sequences over the direct sum: span membership, the domination
calculus, tails, support lifting, and finite fusion/diagonalization.

A block sequence is a list of nonzero vectors whose supports are strictly
separated: max(supp(x_n)) < min(supp(x_{n+1})).  Spans never contain zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .algebra import (
    FieldSpec,
    SubspaceBasis,
    Vector,
    basis_vector,
    combine,
    enumerate_subspace,
    span_of,
    subspace_intersection,
    vector_key,
)
from .errors import Budget, ExhaustionError
from .fin import FinBlockSeq

__all__ = [
    "Interval",
    "BlockSeq",
    "block_seq",
    "basis_block",
    "is_block_sequence",
    "span_contains",
    "dominates",
    "tail_beyond",
    "eventually_dominates",
    "lift_from_supports",
    "fuse_diagonalize",
    "intersect_block",
    "span_vectors",
    "block_sequences_below",
    "canonical_least_in",
]


@dataclass(frozen=True)
class Interval:
    """A nonempty integer interval [lo, hi]."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.lo > self.hi:
            raise ValueError(f"bad interval [{self.lo}, {self.hi}]")

    def precedes(self, other: "Interval") -> bool:
        return self.hi < other.lo

    def below_set(self, s) -> bool:
        """I < s: the whole interval lies strictly below min(s)."""
        return self.hi < min(s)

    def above_set(self, s) -> bool:
        """s < I: the whole interval lies strictly above max(s)."""
        return max(s) < self.lo


@dataclass(frozen=True)
class BlockSeq:
    """A finite block sequence; the empty sequence is a legal value."""

    field: FieldSpec
    entries: tuple[Vector, ...]

    def __post_init__(self):
        for v in self.entries:
            if v.field != self.field:
                raise ValueError("entry over the wrong field")
        if not is_block_sequence(self.entries):
            raise ValueError("entries do not form a block sequence")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.entries)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BlockSeq(self.field, self.entries[i])
        return self.entries[i]

    @property
    def max_support(self) -> int:
        """Largest support index, -1 when empty."""
        return self.entries[-1].max_index if self.entries else -1

    def prefix(self, k: int) -> "BlockSeq":
        return BlockSeq(self.field, self.entries[:k])


def block_seq(f: FieldSpec, vectors: Iterable[Vector]) -> BlockSeq:
    return BlockSeq(f, tuple(vectors))


def basis_block(f: FieldSpec, start: int, stop: int) -> BlockSeq:
    """The standard block sequence (e_start, ..., e_{stop-1})."""
    return BlockSeq(f, tuple(basis_vector(f, i) for i in range(start, stop)))


def is_block_sequence(vs: Sequence[Vector]) -> bool:
    """True iff consecutive supports are strictly separated."""
    return all(a.max_index < b.min_index for a, b in zip(vs, vs[1:]))


def span_contains(X: BlockSeq, v: Vector) -> Optional[tuple]:
    """Coefficients (a_i) with v = sum a_i x_i, or None when v is outside ⟨X⟩.

    Supports of X's entries are pairwise disjoint, so each coefficient is
    forced by the first index the entry shares with v; the reconstruction is
    then verified exactly.
    """
    if v.field != X.field:
        raise ValueError(f"field mismatch: {v.field.name} vs {X.field.name}")
    f = X.field
    vmap = v.as_dict()
    coeffs = []
    for x in X.entries:
        a = f.zero
        for i, c in x.coeffs:
            if i in vmap:
                a = f.div(vmap[i], c)
                break
        coeffs.append(a)
    residue = dict(vmap)
    for a, x in zip(coeffs, X.entries):
        if a == 0:
            continue
        for i, c in x.coeffs:
            r = f.sub(residue.get(i, f.zero), f.mul(a, c))
            if r == 0:
                residue.pop(i, None)
            else:
                residue[i] = r
    if residue:
        return None
    return tuple(coeffs)


def dominates(X: BlockSeq, Y: BlockSeq) -> bool:
    """X ⪯ Y: every entry of X lies in ⟨Y⟩ (hence ⟨X⟩ ⊆ ⟨Y⟩)."""
    return all(span_contains(Y, x) is not None for x in X)


def tail_beyond(X: BlockSeq, n: int) -> BlockSeq:
    """The tail X/n: entries with support entirely above n."""
    return BlockSeq(X.field, tuple(x for x in X if x.min_index > n))


def eventually_dominates(X: BlockSeq, Y: BlockSeq, min_tail: int = 1) -> Optional[int]:
    """Least cutoff n so that the entries of X starting at support n are
    dominated by Y, with at least ``min_tail`` of them surviving.

    Cutoff 0 keeps all of X, so X ⪯ Y always reports 0; ``min_tail`` guards
    against vacuous empty-tail success at finite scale.
    """
    if X.field != Y.field:
        raise ValueError("field mismatch")
    for n in range(0, X.max_support + 2):
        tail = BlockSeq(X.field, tuple(x for x in X if x.min_index >= n))
        if len(tail) < min_tail:
            return None
        if dominates(tail, Y):
            return n
    return None


def lift_from_supports(X: BlockSeq, A: FinBlockSeq) -> BlockSeq:
    """The canonical Y ⪯ X with support sequence exactly A: each entry is the
    coefficient-1 sum of the X entries whose supports a_k swallows."""
    f = X.field
    out = []
    for a in A:
        parts = [x for x in X if x.support.issubset(a)]
        covered: set[int] = set()
        for x in parts:
            covered |= set(x.support)
        if covered != set(a.elements):
            raise ValueError(
                f"{a.elements} is not a union of support entries of X"
            )
        y = combine(f, [(f.one, x) for x in parts])
        out.append(y)
    return BlockSeq(f, tuple(out))


def span_vectors(X: BlockSeq, budget: int | None = None, sort: bool = False) -> list[Vector]:
    """All nonzero vectors of ⟨X⟩ (height-bounded window over the rationals);
    canonical order when ``sort`` is set."""
    out = list(enumerate_subspace(span_of(X.field, X.entries), budget))
    if sort:
        out.sort(key=vector_key)
    return out


def canonical_least_in(
    S: SubspaceBasis, above: int, budget: int | None = None
) -> Optional[Vector]:
    """Canonically least vector of S with min support index above ``above``."""
    best = None
    for v in enumerate_subspace(S, budget):
        if v.min_index > above and (best is None or vector_key(v) < vector_key(best)):
            best = v
    return best


def fuse_diagonalize(chain: Sequence[BlockSeq], budget: int | None = None) -> BlockSeq:
    """Finite fusion: entry j is the canonically least vector of
    ⟨X_0⟩ ∩ ... ∩ ⟨X_j⟩ with support above entry j-1.

    Consequently the tail beyond entry j-1 is dominated by X_j for every j.
    Raises ExhaustionError naming the first index where the running
    intersection has no qualifying vector.
    """
    if not chain:
        raise ValueError("fusion needs a nonempty chain")
    f = chain[0].field
    if any(X.field != f for X in chain):
        raise ValueError("field mismatch within the chain")
    n = 1 + max((X.max_support for X in chain), default=-1)
    if n <= 0:
        raise ExhaustionError("all chain members are empty", index=0)
    current = span_of(f, chain[0].entries)
    out: list[Vector] = []
    floor = -1
    for j, X in enumerate(chain):
        if j > 0:
            current = subspace_intersection(current, span_of(f, X.entries), n)
        y = canonical_least_in(current, floor, budget)
        if y is None:
            raise ExhaustionError(
                f"no vector of the running intersection has support above {floor}"
                f" at step {j}",
                index=j,
            )
        out.append(y)
        floor = y.max_index
    return BlockSeq(f, tuple(out))


def intersect_block(X: BlockSeq, Y: BlockSeq, n: int, budget: int | None = None) -> BlockSeq:
    """A maximal greedy block sequence inside the subspace ⟨X⟩ ∩ ⟨Y⟩.

    The result is dominated by both arguments and may be empty; it need not
    span the whole intersection subspace (a subspace need not admit a block
    basis at finite truncation).
    """
    if X.field != Y.field:
        raise ValueError("field mismatch")
    f = X.field
    S = subspace_intersection(span_of(f, X.entries), span_of(f, Y.entries), n)
    out: list[Vector] = []
    floor = -1
    while True:
        v = canonical_least_in(S, floor, budget)
        if v is None:
            break
        out.append(v)
        floor = v.max_index
    return BlockSeq(f, tuple(out))


def block_sequences_below(
    X: BlockSeq, length: int, budget: int | None = None
) -> Iterator[BlockSeq]:
    """All block sequences of the given length with entries from ⟨X⟩, in
    canonical order (lexicographic, entries compared by canonical key)."""
    pool = span_vectors(X, budget, sort=True)
    guard = Budget(budget)

    def extend(prefix: tuple[Vector, ...]) -> Iterator[BlockSeq]:
        if len(prefix) == length:
            yield BlockSeq(X.field, prefix)
            return
        floor = prefix[-1].max_index if prefix else -1
        for v in pool:
            guard.spend()
            if v.min_index > floor:
                yield from extend(prefix + (v,))

    yield from extend(())
