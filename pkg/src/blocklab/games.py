"""The asymptotic game, the Gowers game, and its filter-restricted variant,
as replayable state machines with pluggable strategies.

Player I opens every inning; in the asymptotic game I plays naturals and II
answers with a vector supported above them, in the Gowers games I plays block
sequences and II picks a vector from the played span.  II's vectors must
always extend the outcome as a block sequence.  A strategy is a total
procedure on transcript prefixes: it returns a legal move or None to resign.
Illegal moves are errors, resignations end the round.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable, Optional

from .algebra import Vector, vector_key
from .blockseq import BlockSeq, dominates, span_contains, span_vectors, tail_beyond
from .blockseq import intersect_block
from .errors import ExhaustionError, IllegalMoveError

if TYPE_CHECKING:
    from .filters import FilterBase

__all__ = [
    "GameKind",
    "Move",
    "GameTranscript",
    "Strategy",
    "MoveCheck",
    "nat_move",
    "block_move",
    "vector_move",
    "validate_move",
    "play",
    "replay_validate",
    "outcome_of",
    "legal_II_candidates",
    "canonical_least_II",
    "const_I",
    "tail_I",
    "scripted",
    "compose",
    "random_I",
    "random_II",
    "diagonalizing_strategy_for_I",
    "clopen_diag_membership",
    "StrategyTree",
    "strategy_tree_of",
    "into_tree_strategy_for_II",
    "constant_family",
    "tail_family",
]


class GameKind(Enum):
    ASYMPTOTIC = "asymptotic"
    GOWERS = "gowers"
    RESTRICTED = "restricted"


@dataclass(frozen=True)
class Move:
    """One move: I plays a natural (asymptotic) or a BlockSeq (Gowers
    variants), II plays a Vector."""

    side: str
    n: int | None = None
    Y: BlockSeq | None = None
    v: Vector | None = None

    def __post_init__(self):
        payloads = [p is not None for p in (self.n, self.Y, self.v)]
        if sum(payloads) != 1:
            raise ValueError("a move carries exactly one payload")
        if self.side == "I" and self.v is not None:
            raise ValueError("vector moves belong to II")
        if self.side == "II" and self.v is None:
            raise ValueError("II moves are vectors")
        if self.side not in ("I", "II"):
            raise ValueError(f"unknown side {self.side!r}")


def nat_move(n: int) -> Move:
    return Move("I", n=n)


def block_move(Y: BlockSeq) -> Move:
    return Move("I", Y=Y)


def vector_move(v: Vector) -> Move:
    return Move("II", v=v)


@dataclass(frozen=True)
class GameTranscript:
    """Alternating legal moves below an ambient block sequence, I first.
    Restricted games carry the filter base used to police I's moves."""

    kind: GameKind
    ambient: BlockSeq
    moves: tuple[Move, ...] = ()
    base: Optional["FilterBase"] = None

    def with_move(self, m: Move) -> "GameTranscript":
        return GameTranscript(self.kind, self.ambient, self.moves + (m,), self.base)

    @property
    def inning(self) -> int:
        return len(self.moves) // 2

    def vectors_played(self) -> tuple[Vector, ...]:
        return tuple(m.v for m in self.moves if m.side == "II")

    def last_I(self) -> Optional[Move]:
        for m in reversed(self.moves):
            if m.side == "I":
                return m
        return None


@dataclass
class Strategy:
    """A side plus a total map from transcript prefixes (at that side's turn)
    to a move, or None for explicit resignation."""

    side: str
    act: Callable[[GameTranscript], Optional[Move]]
    name: str = ""


@dataclass(frozen=True)
class MoveCheck:
    ok: bool
    reason: str = ""


def validate_move(t: GameTranscript, m: Move) -> MoveCheck:
    """Legality of m as the next move of t; illegality is a reason, not an
    error."""
    expected = "I" if len(t.moves) % 2 == 0 else "II"
    if m.side != expected:
        return MoveCheck(False, f"it is {expected}'s turn")
    if m.side == "I":
        if t.kind is GameKind.ASYMPTOTIC:
            if m.n is None:
                return MoveCheck(False, "I plays naturals in the asymptotic game")
            if m.n < 0:
                return MoveCheck(False, "naturals only")
            return MoveCheck(True)
        if m.Y is None:
            return MoveCheck(False, "I plays block sequences in the Gowers games")
        if m.Y.field != t.ambient.field:
            return MoveCheck(False, "field mismatch")
        if not dominates(m.Y, t.ambient):
            return MoveCheck(False, "I's block sequence is not below the ambient")
        if t.kind is GameKind.RESTRICTED:
            if t.base is None:
                return MoveCheck(False, "restricted game without an attached base")
            if len(m.Y) < t.base.min_tail:
                return MoveCheck(False, "shorter than the base's min tail")
            if not any(dominates(m.Y, g) for g in t.base.generators):
                return MoveCheck(False, "not dominated by any base generator")
        return MoveCheck(True)
    # II's move
    if m.v.field != t.ambient.field:
        return MoveCheck(False, "field mismatch")
    played = t.vectors_played()
    if played and m.v.min_index <= played[-1].max_index:
        return MoveCheck(
            False,
            f"min support {m.v.min_index} does not extend the outcome "
            f"block sequence (last max {played[-1].max_index})",
        )
    last = t.moves[-1]
    if t.kind is GameKind.ASYMPTOTIC:
        if m.v.min_index <= last.n:
            return MoveCheck(False, f"min support {m.v.min_index} <= {last.n}")
        if span_contains(t.ambient, m.v) is None:
            return MoveCheck(False, "not in the ambient span")
        return MoveCheck(True)
    if span_contains(last.Y, m.v) is None:
        return MoveCheck(False, "not in the span I just played")
    return MoveCheck(True)


def play(
    kind: GameKind,
    ambient: BlockSeq,
    strategy_I: Strategy,
    strategy_II: Strategy,
    rounds: int,
    base: Optional["FilterBase"] = None,
) -> GameTranscript:
    """Run ``rounds`` innings or stop at the first resignation.

    Every move is validated; an illegal move raises IllegalMoveError naming
    the side and inning.
    """
    if strategy_I.side != "I" or strategy_II.side != "II":
        raise ValueError("strategies are on the wrong sides")
    if kind is GameKind.RESTRICTED and base is None:
        raise ValueError("the restricted game needs a filter base")
    t = GameTranscript(kind, ambient, (), base)
    for inning in range(rounds):
        for strat in (strategy_I, strategy_II):
            m = strat.act(t)
            if m is None:
                return t
            check = validate_move(t, m)
            if not check.ok:
                raise IllegalMoveError(strat.side, inning, check.reason)
            t = t.with_move(m)
    return t


def replay_validate(t: GameTranscript) -> Optional[tuple[int, str]]:
    """Re-validate every move from scratch; None when fully legal, else the
    first illegal move's index and reason."""
    fresh = GameTranscript(t.kind, t.ambient, (), t.base)
    for i, m in enumerate(t.moves):
        check = validate_move(fresh, m)
        if not check.ok:
            return i, check.reason
        fresh = fresh.with_move(m)
    return None


def outcome_of(t: GameTranscript) -> BlockSeq:
    """The block sequence of II's moves, in order."""
    return BlockSeq(t.ambient.field, t.vectors_played())


# ---------------------------------------------------------------------------
# Built-in strategies.
# ---------------------------------------------------------------------------


def legal_II_candidates(t: GameTranscript, budget: int | None = None) -> list[Vector]:
    """All legal vectors for II at this turn, canonically ordered."""
    played = t.vectors_played()
    floor = played[-1].max_index if played else -1
    last = t.moves[-1]
    if t.kind is GameKind.ASYMPTOTIC:
        source = t.ambient
        floor = max(floor, last.n)
    else:
        source = last.Y
    return [v for v in span_vectors(source, budget, sort=True) if v.min_index > floor]


def canonical_least_II(budget: int | None = None) -> Strategy:
    """II plays the canonically least legal vector; resigns when none exists."""

    def act(t: GameTranscript) -> Optional[Move]:
        candidates = legal_II_candidates(t, budget)
        return vector_move(candidates[0]) if candidates else None

    return Strategy("II", act, "canonical")


def const_I(n: int) -> Strategy:
    """I plays the same natural every inning (asymptotic game)."""
    return Strategy("I", lambda t: nat_move(n), f"const:{n}")


def tail_I() -> Strategy:
    """I plays the ambient tail above II's last vector (Gowers games)."""

    def act(t: GameTranscript) -> Optional[Move]:
        played = t.vectors_played()
        floor = played[-1].max_index if played else -1
        Y = tail_beyond(t.ambient, floor)
        if len(Y) == 0 or (t.base is not None and len(Y) < t.base.min_tail):
            return None
        return block_move(Y)

    return Strategy("I", act, "tail")


def scripted(side: str, moves: list[Move]) -> Strategy:
    """Play a fixed move list in order; resign when it runs out."""

    def act(t: GameTranscript) -> Optional[Move]:
        count = sum(1 for m in t.moves if m.side == side)
        return moves[count] if count < len(moves) else None

    return Strategy(side, act, "scripted")


def compose(primary: Strategy, fallback: Strategy) -> Strategy:
    """Follow ``primary`` until it resigns, then switch to ``fallback``."""
    if primary.side != fallback.side:
        raise ValueError("composed strategies must share a side")

    def act(t: GameTranscript) -> Optional[Move]:
        m = primary.act(t)
        return m if m is not None else fallback.act(t)

    return Strategy(primary.side, act, f"{primary.name}+{fallback.name}")


def _prefix_rng(seed: int, t: GameTranscript) -> random.Random:
    # a pure function of (seed, prefix length) keeps seeded strategies
    # deterministic per prefix, hence replayable
    return random.Random(seed * 2654435761 + len(t.moves))


def random_I(seed: int) -> Strategy:
    """Seeded I: random naturals, or random generator/ambient tails."""

    def act(t: GameTranscript) -> Optional[Move]:
        rng = _prefix_rng(seed, t)
        if t.kind is GameKind.ASYMPTOTIC:
            return nat_move(rng.randrange(0, t.ambient.max_support + 2))
        if t.kind is GameKind.GOWERS:
            sources = [t.ambient]
        else:
            sources = [g for g in t.base.generators if dominates(g, t.ambient)]
        options = []
        for src in sources:
            cutoffs = sorted({-1} | {x.max_index for x in src})
            for c in cutoffs:
                Y = tail_beyond(src, c)
                if len(Y) == 0:
                    continue
                if t.kind is GameKind.RESTRICTED and len(Y) < t.base.min_tail:
                    continue
                options.append(Y)
        return block_move(rng.choice(options)) if options else None

    return Strategy("I", act, f"random:{seed}")


def random_II(seed: int, budget: int | None = None) -> Strategy:
    """Seeded II: a uniformly random legal vector."""

    def act(t: GameTranscript) -> Optional[Move]:
        candidates = legal_II_candidates(t, budget)
        if not candidates:
            return None
        return vector_move(_prefix_rng(seed, t).choice(candidates))

    return Strategy("II", act, f"random:{seed}")


# ---------------------------------------------------------------------------
# Strategy constructions extracted from the diagonalization proofs.
# ---------------------------------------------------------------------------


def constant_family(X: BlockSeq) -> Callable[[BlockSeq], BlockSeq]:
    return lambda prefix: X


def tail_family(X: BlockSeq) -> Callable[[BlockSeq], BlockSeq]:
    """prefix -> the tail of X above the prefix's support."""
    return lambda prefix: tail_beyond(X, prefix.max_support)


def diagonalizing_strategy_for_I(
    family: Callable[[BlockSeq], BlockSeq],
    base: "FilterBase",
    X: BlockSeq,
    budget: int | None = None,
) -> Strategy:
    """I's diagonalizing strategy in the restricted game.

    The opening move refines both X and the family value at the empty prefix;
    each later move intersects I's previous move with the family value at
    II's current prefix.  Every outcome Y then satisfies the prefix-tail
    contract: the tail of Y beyond a prefix is dominated by the family value
    at that prefix.  The spans I has played are kept per prefix in
    ``strategy.annotations`` for inspection.

    Raises ExhaustionError when a running intersection admits no block
    sequence of the base's minimum length.
    """
    annotations: dict[tuple[Vector, ...], tuple[BlockSeq, ...]] = {}

    def act(t: GameTranscript) -> Optional[Move]:
        prefix = outcome_of(t)
        inning = len(t.moves) // 2
        previous = X if inning == 0 else t.moves[-2].Y
        target = family(prefix)
        Y = intersect_block(previous, target, base.truncation, budget)
        if len(Y) < max(1, base.min_tail):
            raise ExhaustionError(
                f"intersection with the family value at prefix length "
                f"{len(prefix)} has no block vector (inning {inning})",
                index=inning,
            )
        earlier = annotations.get(tuple(prefix.entries[:-1]) if prefix.entries else (), ())
        annotations[tuple(prefix.entries)] = earlier + (Y,) if inning else (Y,)
        return block_move(Y)

    strat = Strategy("I", act, "diagonalizing")
    strat.annotations = annotations
    return strat


def clopen_diag_membership(prefix: BlockSeq, family: list[BlockSeq]) -> bool:
    """Membership of a prefix in the clopen diagonalization set: the second
    vector must lie in every family span indexed up to the first vector's
    max support.  Finitely many checks decide it, which is the point."""
    if len(prefix) < 2:
        raise ValueError("need a prefix of length at least 2")
    bound = prefix[0].max_index
    if len(family) <= bound:
        raise ValueError(f"family not defined up to index {bound}")
    return all(span_contains(family[m], prefix[1]) is not None for m in range(bound + 1))


@dataclass
class StrategyTree:
    """A prefix-closed tree of finite vector sequences; each node keeps the
    I-move witnesses that produced it."""

    ambient: BlockSeq
    depth: int
    nodes: dict[tuple[Vector, ...], tuple[BlockSeq, ...]]

    def __contains__(self, node: tuple[Vector, ...]) -> bool:
        return node in self.nodes

    def children(self, node: tuple[Vector, ...]) -> list[Vector]:
        out = [
            other[-1]
            for other in self.nodes
            if len(other) == len(node) + 1 and other[: len(node)] == node
        ]
        return sorted(out, key=vector_key)

    def maximal_branches(self) -> list[tuple[Vector, ...]]:
        return [n for n in self.nodes if not self.children(n)]


def _witness_transcript(
    X: BlockSeq,
    base: "FilterBase",
    node: tuple[Vector, ...],
    witnesses: tuple[BlockSeq, ...],
) -> GameTranscript:
    t = GameTranscript(GameKind.RESTRICTED, X, (), base)
    for Y, v in zip(witnesses, node):
        t = t.with_move(block_move(Y)).with_move(vector_move(v))
    return t


def strategy_tree_of(
    alpha: Strategy, base: "FilterBase", X: BlockSeq, depth: int
) -> StrategyTree:
    """Build the tree of II's answers under ``alpha`` to base generators.

    Level k+1 extends each node by alpha's answer to every generator below X,
    played after the node's recorded witness history; one witness generator
    is kept per node.  Resignations prune branches.  Maximal branches are by
    construction prefixes of alpha-plays.
    """
    nodes: dict[tuple[Vector, ...], tuple[BlockSeq, ...]] = {(): ()}
    frontier: list[tuple[Vector, ...]] = [()]
    for level in range(depth):
        nxt: list[tuple[Vector, ...]] = []
        for node in frontier:
            witnesses = nodes[node]
            t = _witness_transcript(X, base, node, witnesses)
            for G in base.generators:
                if len(G) < base.min_tail or not dominates(G, X):
                    continue
                t2 = t.with_move(block_move(G))
                m = alpha.act(t2)
                if m is None:
                    continue
                check = validate_move(t2, m)
                if not check.ok:
                    raise IllegalMoveError("II", level, check.reason)
                child = node + (m.v,)
                if child not in nodes:
                    nodes[child] = witnesses + (G,)
                    nxt.append(child)
        frontier = nxt
    return StrategyTree(X, depth, nodes)


def into_tree_strategy_for_II(T: StrategyTree, base: "FilterBase") -> Strategy:
    """II's strategy for the asymptotic game that walks down T.

    After I plays n, the current node is extended by a child found inside the
    span of a base generator's tail above n, so its support clears n; all
    outcomes are branches of T.  Raises ExhaustionError (stuck node and n)
    when the finite tree has no such child.
    """

    def act(t: GameTranscript) -> Optional[Move]:
        node = t.vectors_played()
        if node not in T.nodes:
            raise ExhaustionError(f"position {len(node)} moves deep is off the tree")
        n = t.moves[-1].n
        children = T.children(node)
        for G in base.generators:
            tail = tail_beyond(G, n)
            if len(tail) == 0:
                continue
            for v in children:
                if span_contains(tail, v) is not None:
                    return vector_move(v)
        raise ExhaustionError(
            f"no child extends the node of length {len(node)} above {n}"
        )

    return Strategy("II", act, "into-tree")
