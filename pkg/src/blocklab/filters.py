"""Finite filter-base approximations of block filters, the diagonalization
pipelines built on them, and the two interval-partition algorithms relating
spread witnesses to one-point-per-cell selectors.

A FilterBase is a finite generator list standing in for a block filter at a
fixed truncation; membership of a span is read as "dominated by some
generator, with at least min_tail entries".  Directedness is checkable, not
assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .algebra import FieldSpec, Vector, combine, vector_key
from .blockseq import (
    BlockSeq,
    Interval,
    block_sequences_below,
    dominates,
    fuse_diagonalize,
    intersect_block,
    span_contains,
    span_vectors,
    tail_beyond,
)
from .errors import Budget, ExhaustionError, VerificationBugError
from .fin import FinBlockSeq, FinSet, supp_seq
from .games import (
    GameKind,
    GameTranscript,
    canonical_least_II,
    diagonalizing_strategy_for_I,
    outcome_of,
    play,
)
from .oscillation import VectorPredicate

__all__ = [
    "FilterBase",
    "IntervalSeq",
    "FinitePartition",
    "DiagonalizationResult",
    "is_directed_base",
    "p_diagonalize",
    "strong_p_diagonalize",
    "check_spread_witness",
    "spread_from_tail_diag",
    "b_set_membership",
    "strong_family_from_fin",
    "density_probe",
    "split_even_odd",
    "coarsen_intervals",
    "qpoint_check",
]


@dataclass(frozen=True)
class FilterBase:
    """Finite directed family of block sequences at a fixed truncation."""

    field: FieldSpec
    truncation: int
    generators: tuple[BlockSeq, ...]
    min_tail: int = 1

    def __post_init__(self):
        for g in self.generators:
            if g.field != self.field:
                raise ValueError("generator over the wrong field")
            if len(g) == 0:
                raise ValueError("generators must be nonempty")
            if g.max_support >= self.truncation:
                raise ValueError("generator support outside the truncation")
        if self.min_tail < 0:
            raise ValueError("min_tail must be a natural")


@dataclass(frozen=True)
class IntervalSeq:
    """Strictly separated intervals I_0 < I_1 < ..."""

    entries: tuple[Interval, ...]

    def __post_init__(self):
        for a, b in zip(self.entries, self.entries[1:]):
            if not a.precedes(b):
                raise ValueError(f"intervals {a} and {b} are not separated")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.entries)

    def __getitem__(self, i) -> Interval:
        return self.entries[i]


@dataclass(frozen=True)
class FinitePartition:
    """Cells I_0, I_1, ... partitioning [0, n); order matters downstream."""

    n: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for cell in self.cells:
            if not cell:
                raise ValueError("cells must be nonempty")
            if seen & set(cell):
                raise ValueError("cells must be disjoint")
            seen |= set(cell)
        if seen != set(range(self.n)):
            raise ValueError(f"cells do not partition [0, {self.n})")


def is_directed_base(B: FilterBase) -> Optional[tuple[int, int]]:
    """None when every generator pair has a common refinement of length at
    least min_tail; otherwise the first failing index pair."""
    for i in range(len(B.generators)):
        for j in range(i + 1, len(B.generators)):
            common = intersect_block(B.generators[i], B.generators[j], B.truncation)
            if len(common) < B.min_tail:
                return (i, j)
    return None


def p_diagonalize(B: FilterBase, targets: Sequence[BlockSeq]) -> BlockSeq:
    """Fuse the targets through their running intersections; entry j lies in
    the span of every target up to j.  The chain is padded with its last
    member so the result has at least min_tail entries."""
    if not targets:
        raise ValueError("needs at least one target")
    for X in targets:
        if X.max_support >= B.truncation:
            raise ValueError("target support outside the base truncation")
    chain = list(targets)
    while len(chain) < B.min_tail:
        chain.append(chain[-1])
    return fuse_diagonalize(chain)


@dataclass(frozen=True)
class DiagonalizationResult:
    """Outcome of a diagonalizing play plus its per-prefix verification."""

    outcome: BlockSeq
    transcript: GameTranscript
    checks: tuple[tuple[int, bool], ...]


def strong_p_diagonalize(
    B: FilterBase,
    family: Callable[[BlockSeq], BlockSeq],
    X: BlockSeq,
    rounds: int,
    budget: int | None = None,
) -> DiagonalizationResult:
    """Play I's diagonalizing strategy against the canonical-least II and
    verify the prefix-tail contract on the outcome.

    Each proper prefix of the outcome is checked: the tail beyond it must be
    dominated by the family value at that prefix.  A failed check raises
    VerificationBugError; it indicates a bug, not bad input.
    """
    strategy_I = diagonalizing_strategy_for_I(family, B, X, budget)
    t = play(GameKind.RESTRICTED, X, strategy_I, canonical_least_II(budget), rounds, base=B)
    Y = outcome_of(t)
    if len(Y) < rounds:
        raise ExhaustionError(
            f"play ended after {len(Y)} of {rounds} innings", index=len(Y)
        )
    checks = []
    for j in range(len(Y)):
        prefix = Y.prefix(j)
        tail = tail_beyond(Y, prefix.max_support)
        ok = dominates(tail, family(prefix))
        checks.append((j, ok))
        if not ok:
            raise VerificationBugError(
                f"outcome tail beyond prefix length {j} escapes its family value"
            )
    return DiagonalizationResult(Y, t, tuple(checks))


def check_spread_witness(X: BlockSeq, I: IntervalSeq) -> Optional[int]:
    """None when I_0 sits below every support and some whole interval
    separates each consecutive support pair; else the least failing index."""
    for n, x in enumerate(X):
        if not I[0].below_set(x.support):
            return n
        if n + 1 < len(X):
            nxt = X[n + 1]
            separated = any(
                J.above_set(x.support) and J.below_set(nxt.support) for J in I
            )
            if not separated:
                return n
    return None


def spread_from_tail_diag(
    B: FilterBase, X: BlockSeq, I: IntervalSeq, rounds: int, budget: int | None = None
) -> BlockSeq:
    """Spread witness via max-support-indexed diagonalization.

    For k below the truncation, the k-th target is the tail of X above
    max(I_{m_k+1}), where m_k is least with k <= max(I_{m_k}); the play is
    confined to the tail of X above max(I_0).  The result always passes
    check_spread_witness against I.
    """
    if rounds == 0:
        return BlockSeq(X.field, ())

    def family(prefix: BlockSeq) -> BlockSeq:
        if len(prefix) == 0:
            return tail_beyond(X, I[0].hi)
        k = prefix.max_support
        m_k = next((m for m in range(len(I)) if k <= I[m].hi), None)
        if m_k is None or m_k + 1 >= len(I):
            raise ExhaustionError(
                f"interval sequence exhausted at support {k}", index=len(prefix)
            )
        return tail_beyond(X, I[m_k + 1].hi)

    result = strong_p_diagonalize(B, family, X, rounds, budget)
    Y = result.outcome
    failing = check_spread_witness(Y, I)
    if failing is not None:
        raise VerificationBugError(f"spread witness fails at entry {failing}")
    return Y


def b_set_membership(
    X: BlockSeq,
    family: Callable[[FinBlockSeq], BlockSeq],
    candidate: FinBlockSeq,
    budget: int | None = None,
) -> bool:
    """Membership of a⌢b in the diagonalization bookkeeping set: every vector
    of ⟨X⟩ with support exactly b must lie in the family span at every prefix
    of a.  Finiteness of the field makes the vector enumeration total."""
    if X.field.is_rationals:
        raise ValueError("needs a finite field: vectors per support must be finite")
    if len(candidate) == 0:
        raise ValueError("candidate must end with a support set")
    if not all(_is_union_of_supports(a, X) for a in candidate):
        raise ValueError("candidate entries must be unions of X's supports")
    prefix_fin, b = candidate[: len(candidate) - 1], candidate[len(candidate) - 1]
    parts = [x for x in X if x.support.issubset(b)]
    spans = [family(prefix_fin[:j]) for j in range(len(prefix_fin) + 1)]
    guard = Budget(budget)
    guard.require((X.field.prime - 1) ** len(parts))
    for v in _support_filling_vectors(X.field, parts):
        guard.spend()
        for S in spans:
            if span_contains(S, v) is None:
                return False
    return True


def _is_union_of_supports(a: FinSet, X: BlockSeq) -> bool:
    covered: set[int] = set()
    for x in X:
        if x.support.issubset(a):
            covered |= set(x.support)
    return covered == set(a.elements)


def _support_filling_vectors(f: FieldSpec, parts: list[Vector]) -> Iterator[Vector]:
    """All combinations of the given vectors with every coefficient nonzero."""
    nonzero = f.nonzero_scalars()

    def rec(i: int, terms: list) -> Iterator[Vector]:
        if i == len(parts):
            v = combine(f, terms)
            if v is not None:
                yield v
            return
        for c in nonzero:
            yield from rec(i + 1, terms + [(c, parts[i])])

    if parts:
        yield from rec(0, [])


def strong_family_from_fin(
    family: Callable[[BlockSeq], BlockSeq],
    B: FilterBase,
    budget: int | None = None,
) -> Callable[[FinBlockSeq], BlockSeq]:
    """Turn a vector-prefix-indexed family into a support-indexed one.

    The value at a support sequence is the iterated block intersection of the
    family values at every nonempty vector prefix matching an initial segment
    of it, so its span is contained in each of them.  Finite fields only; the
    question for infinite fields is open, and the height-bounded window would
    silently miss indices.
    """
    if B.field.is_rationals:
        raise ValueError("needs a finite field: indices per support must be finite")

    def value(a: FinBlockSeq) -> BlockSeq:
        indices = list(_vector_prefixes_matching(B.field, a))
        guard = Budget(budget)
        guard.require(len(indices) + 1)
        if not indices:
            return family(BlockSeq(B.field, ()))
        acc: Optional[BlockSeq] = None
        for x_vec in indices:
            val = family(x_vec)
            acc = val if acc is None else intersect_block(acc, val, B.truncation, budget)
        if len(acc) == 0:
            raise ExhaustionError(
                f"intersection over {len(indices)} indices has no block vector"
            )
        return acc

    return value


def _vector_prefixes_matching(f: FieldSpec, a: FinBlockSeq) -> Iterator[BlockSeq]:
    """Nonempty block sequences whose support sequence is an initial segment
    of ``a``, shortest first, canonically ordered within a length."""
    nonzero = f.nonzero_scalars()

    def fillings(s: FinSet) -> list[Vector]:
        out: list[Vector] = []

        def rec(i: int, pairs: tuple) -> None:
            if i == len(s.elements):
                out.append(Vector(f, pairs))
                return
            for c in nonzero:
                rec(i + 1, pairs + ((s.elements[i], c),))

        rec(0, ())
        return sorted(out, key=vector_key)

    per_entry = [fillings(s) for s in a]
    for length in range(1, len(a) + 1):
        def rec(i: int, acc: tuple) -> Iterator[BlockSeq]:
            if i == length:
                yield BlockSeq(f, acc)
                return
            for v in per_entry[i]:
                yield from rec(i + 1, acc + (v,))

        yield from rec(0, ())


def density_probe(
    D: VectorPredicate, B: FilterBase, d: int, budget: int | None = None
) -> tuple[Optional[BlockSeq], ...]:
    """Per generator, the canonically least length-d block sequence below it
    whose whole span satisfies D, or None."""
    out = []
    for g in B.generators:
        found = None
        for Z in block_sequences_below(g, d, budget):
            if all(D(v) for v in span_vectors(Z, budget)):
                found = Z
                break
        out.append(found)
    return tuple(out)


def split_even_odd(x: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Even-position and odd-position halves of the increasing enumeration."""
    ordered = sorted(set(x))
    return tuple(ordered[0::2]), tuple(ordered[1::2])


def coarsen_intervals(P: FinitePartition) -> IntervalSeq:
    """Coarsen a finite partition into consecutive intervals.

    J_0 ends at max(I_0); each later interval starts right above the previous
    one and is the smallest one covering the next cell together with every
    cell already touched.  When coverage already holds it degenerates to a
    single point (the proof presumes nonempty intervals, so the minimal one
    is taken).
    """
    intervals = [Interval(0, max(P.cells[0]))]
    k = 0
    while intervals[-1].hi < P.n - 1:
        lo = intervals[-1].hi + 1
        required: set[int] = set()
        if k + 1 < len(P.cells):
            required |= set(P.cells[k + 1])
        covered_so_far = set(range(lo))
        for cell in P.cells:
            if set(cell) & covered_so_far:
                required |= set(cell)
        hi = max([lo] + [e for e in required if e >= lo])
        intervals.append(Interval(lo, hi))
        k += 1
    return IntervalSeq(tuple(intervals))


def qpoint_check(x: Iterable[int], P: FinitePartition) -> Optional[int]:
    """None when x meets every cell at most once; else the least violating
    cell index."""
    xs = set(x)
    for m, cell in enumerate(P.cells):
        if len(xs & set(cell)) > 1:
            return m
    return None
