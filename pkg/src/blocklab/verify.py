"""Named invariant suites runnable from the CLI and reused by the tests.

Each suite returns (cases_run, failures) where failures is a list of
JSON-ready counterexample dicts; zero failures is the expected state.  The
seeded generators here are shared with the test corpus so counterexamples
reproduce from a seed alone (the generator is CPython's Mersenne Twister via
``random.Random(seed)``).
"""

from __future__ import annotations

import random
from itertools import product
from typing import Callable, Optional

from .algebra import (
    FieldSpec,
    LinearMap,
    Vector,
    combine,
    complement_of,
    kernel_of,
    projection_along,
    rank_of,
    scale,
    span_of,
    subspace_intersection,
)
from .blockseq import (
    BlockSeq,
    Interval,
    basis_block,
    dominates,
    eventually_dominates,
    fuse_diagonalize,
    lift_from_supports,
    span_contains,
    tail_beyond,
)
from .errors import DEFAULT_BUDGET
from .fin import (
    FinBlockSeq,
    FinSet,
    fin_block_sequences,
    fin_dominates,
    finite_unions,
    finset_key,
    hindman_search,
    milliken_search,
    min_max_trace,
    nonempty_subsets,
    supp_seq,
    table_coloring,
)
from .filters import (
    FilterBase,
    FinitePartition,
    IntervalSeq,
    coarsen_intervals,
    qpoint_check,
    split_even_odd,
    strong_p_diagonalize,
)
from .games import (
    GameKind,
    outcome_of,
    play,
    random_I,
    random_II,
    replay_validate,
    tail_family,
)
from .oscillation import osc, osc_range, parity_pair
from .serialize import encode_blockseq, encode_vector

__all__ = [
    "SUITES",
    "run_suite",
    "window_vectors",
    "window_blockseqs",
    "fin_coarsenings",
    "random_vector",
    "random_blockseq",
    "random_block_below",
    "random_partition",
    "random_interval_partition",
    "random_interval_seq",
]


# ---------------------------------------------------------------------------
# Exhaustive and seeded generators (shared with the test corpus).
# ---------------------------------------------------------------------------


def window_vectors(f: FieldSpec, lo: int, hi: int) -> list[Vector]:
    """Every vector with support inside [lo, hi), by dense enumeration."""
    out = []
    for tup in product(f.all_scalars(), repeat=hi - lo):
        pairs = tuple((lo + i, c) for i, c in enumerate(tup) if c != 0)
        if pairs:
            out.append(Vector(f, pairs))
    return out


def window_blockseqs(f: FieldSpec, hi: int, max_len: int) -> list[BlockSeq]:
    """Every block sequence of length 1..max_len with support in [0, hi)."""
    vectors = window_vectors(f, 0, hi)
    out: list[BlockSeq] = []
    frontier: list[tuple[Vector, ...]] = [()]
    for _ in range(max_len):
        nxt = []
        for prefix in frontier:
            floor = prefix[-1].max_index if prefix else -1
            for v in vectors:
                if v.min_index > floor:
                    nxt.append(prefix + (v,))
        out.extend(BlockSeq(f, p) for p in nxt)
        frontier = nxt
    return out


def fin_coarsenings(sup: FinBlockSeq) -> list[FinBlockSeq]:
    """All nonempty A dominated by sup: entries are unions of sup's entries."""
    k = len(sup)
    out: list[FinBlockSeq] = []

    def rec(i: int, acc: tuple[FinSet, ...], floor: int) -> None:
        if i == k:
            if acc:
                out.append(FinBlockSeq(acc))
            return
        rec(i + 1, acc, floor)
        if sup[i].min > floor:
            rest = range(i + 1, k)
            for mask in range(1 << len(rest)):
                group = [i] + [j for b, j in enumerate(rest) if mask & (1 << b)]
                merged = sup[group[0]]
                for g in group[1:]:
                    merged = merged.union(sup[g])
                rec(max(group) + 1, acc + (merged,), merged.max)

    rec(0, (), -1)
    return out


def random_vector(f: FieldSpec, rng: random.Random, lo: int, hi: int) -> Vector:
    size = rng.randrange(1, min(4, hi - lo) + 1)
    supp = sorted(rng.sample(range(lo, hi), size))
    nonzero = f.nonzero_scalars()
    return Vector(f, tuple((i, rng.choice(nonzero)) for i in supp))


def random_blockseq(
    f: FieldSpec, rng: random.Random, trunc: int, max_len: int
) -> BlockSeq:
    entries = []
    lo = 0
    for _ in range(rng.randrange(1, max_len + 1)):
        if trunc - lo < 1:
            break
        hi = rng.randrange(lo + 1, min(lo + 4, trunc) + 1)
        entries.append(random_vector(f, rng, lo, hi))
        lo = entries[-1].max_index + 1
    return BlockSeq(f, tuple(entries))


def random_block_below(X: BlockSeq, rng: random.Random, min_len: int = 1) -> BlockSeq:
    """A random refinement of X: pick entries, merge some adjacent picks."""
    if len(X) < min_len:
        raise ValueError("X too short")
    f = X.field
    picks = sorted(rng.sample(range(len(X)), rng.randrange(min_len, len(X) + 1)))
    groups: list[list[int]] = []
    for i in picks:
        if groups and rng.random() < 0.3 and groups[-1][-1] == i - 1:
            groups[-1].append(i)
        else:
            groups.append([i])
    entries = [combine(f, [(f.one, X[i]) for i in g]) for g in groups]
    return BlockSeq(f, tuple(entries))


def random_partition(rng: random.Random, n: int, max_cells: int) -> FinitePartition:
    k = rng.randrange(1, max_cells + 1)
    cells: list[list[int]] = [[] for _ in range(k)]
    for e in range(n):
        cells[rng.randrange(k)].append(e)
    filled = [tuple(c) for c in cells if c]
    rng.shuffle(filled)
    return FinitePartition(n, tuple(filled))


def random_interval_partition(
    rng: random.Random, n: int, max_cells: int
) -> FinitePartition:
    k = rng.randrange(1, max_cells + 1)
    cuts = sorted(rng.sample(range(1, n), min(k - 1, n - 1)))
    bounds = [0] + cuts + [n]
    cells = tuple(tuple(range(a, b)) for a, b in zip(bounds, bounds[1:]))
    return FinitePartition(n, cells)


def random_interval_seq(rng: random.Random, n: int) -> IntervalSeq:
    intervals = []
    lo = 0
    while lo < n:
        hi = min(n - 1, lo + rng.randrange(0, 2))
        intervals.append(Interval(lo, hi))
        lo = hi + 1 + rng.randrange(0, 2)
    return IntervalSeq(tuple(intervals))


# ---------------------------------------------------------------------------
# Suites.
# ---------------------------------------------------------------------------


def run_algebra_suite(
    f: FieldSpec, trunc: int, seed: int, budget: int
) -> tuple[int, list[dict]]:
    rng = random.Random(seed)
    cases = 0
    failures: list[dict] = []

    scalars = f.all_scalars()
    sample = scalars if len(scalars) <= 7 else rng.sample(scalars, 7)
    for a, b, c in product(sample, repeat=3):
        cases += 1
        ok = (
            f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            and f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            and f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
            and f.add(a, f.neg(a)) == f.zero
            and (a == 0 or f.mul(a, f.inv(a)) == f.one)
        )
        if not ok:
            failures.append({"law": "field axioms", "triple": [str(a), str(b), str(c)]})

    n = min(trunc, 4)
    if f.is_rationals:
        image_pool: list[Optional[Vector]] = [None] + [
            random_vector(f, rng, 0, n) for _ in range(10)
        ]
    else:
        image_pool = [None] + window_vectors(f, 0, n)
    for _ in range(60):
        T = LinearMap(f, n, n, tuple(rng.choice(image_pool) for _ in range(n)))
        K = kernel_of(T)
        cases += 1
        if K.dim + rank_of(T) != n:
            failures.append(
                {
                    "law": "rank-nullity",
                    "images": [encode_vector(i) if i else None for i in T.images],
                }
            )
            continue
        if not f.is_rationals and f.prime**n <= 100_000:
            # oracle: count zero images over the whole domain
            count = sum(1 for v in window_vectors(f, 0, n) if T.apply(v) is None)
            cases += 1
            if count + 1 != f.prime**K.dim:
                failures.append({"law": "kernel size", "dim": K.dim, "count": count})

    for _ in range(40):
        vs = [random_vector(f, rng, 0, n) for _ in range(rng.randrange(1, n + 1))]
        V = span_of(f, vs)
        C = complement_of(V, n)
        meet = subspace_intersection(V, C, n)
        cases += 1
        if V.dim + C.dim != n or meet.dim != 0:
            failures.append(
                {"law": "complement", "V": [encode_vector(v) for v in V.basis]}
            )
            continue
        if V.dim and C.dim:
            T = projection_along(V, C, n)
            probe = window_vectors(f, 0, n) if not f.is_rationals else vs
            bad = False
            for v in probe:
                once = T.apply(v)
                twice = T.apply(once) if once is not None else None
                if once != twice:
                    bad = True
                    break
            cases += 1
            if bad or not kernel_of(T).same_subspace(V):
                failures.append(
                    {"law": "projection", "V": [encode_vector(v) for v in V.basis]}
                )
    return cases, failures


def run_blockseq_suite(
    f: FieldSpec, trunc: int, seed: int, budget: int
) -> tuple[int, list[dict]]:
    rng = random.Random(seed)
    cases = 0
    failures: list[dict] = []
    hi = min(trunc, 3 if f.is_rationals else 4)
    window = window_vectors(f, 0, hi)
    seqs = window_blockseqs(f, hi, 2)

    for X in seqs:
        # oracle: explicit enumeration of all coefficient tuples
        span_set = set()
        for tup in product(f.all_scalars(), repeat=len(X)):
            v = combine(f, list(zip(tup, X.entries)))
            if v is not None:
                span_set.add(v)
        for v in window:
            cases += 1
            got = span_contains(X, v)
            if (got is not None) != (v in span_set):
                failures.append(
                    {
                        "law": "span_contains",
                        "X": encode_blockseq(X),
                        "v": encode_vector(v),
                    }
                )
            elif got is not None and combine(f, list(zip(got, X.entries))) != v:
                failures.append(
                    {
                        "law": "span coefficients",
                        "X": encode_blockseq(X),
                        "v": encode_vector(v),
                    }
                )

    for _ in range(60):
        X = random_blockseq(f, rng, trunc, 3)
        Y = random_blockseq(f, rng, trunc, 3)
        cases += 1
        if not dominates(X, X):
            failures.append({"law": "reflexivity", "X": encode_blockseq(X)})
        if dominates(X, Y):
            cases += 2
            if eventually_dominates(X, Y, min_tail=1) != 0:
                failures.append(
                    {"law": "eventual domination at 0", "X": encode_blockseq(X)}
                )
            if not fin_dominates(supp_seq(X), supp_seq(Y)):
                failures.append(
                    {"law": "support monotonicity", "X": encode_blockseq(X)}
                )

    for X in seqs:
        sup = supp_seq(X)
        for A in fin_coarsenings(sup):
            cases += 1
            Y = lift_from_supports(X, A)
            if supp_seq(Y) != A or not dominates(Y, X):
                failures.append({"law": "lift", "X": encode_blockseq(X)})

    X = basis_block(f, 0, trunc)
    chain = [tail_beyond(X, k) for k in range(-1, min(3, trunc - 2))]
    Y = fuse_diagonalize(chain)
    for j in range(len(Y)):
        cases += 1
        tail = tail_beyond(Y, Y.prefix(j).max_support)
        if not dominates(tail, chain[j]):
            failures.append({"law": "fusion tail contract", "j": j})
    return cases, failures


def run_fin_suite(
    f: FieldSpec, trunc: int, seed: int, budget: int
) -> tuple[int, list[dict]]:
    rng = random.Random(seed)
    cases = 0
    failures: list[dict] = []
    n = min(trunc, 5)
    for length in (1, 2, 3):
        for A in fin_block_sequences(n, length):
            cases += 2
            if len(finite_unions(A)) != (1 << length) - 1:
                failures.append(
                    {"law": "union count", "A": [list(a.elements) for a in A]}
                )
            lo, hi_trace = min_max_trace(A)
            if lo != frozenset(a.min for a in A) or hi_trace != frozenset(
                a.max for a in A
            ):
                failures.append(
                    {"law": "min/max trace", "A": [list(a.elements) for a in A]}
                )
    for trial in range(100):
        table = {finset_key(s): rng.randrange(2) for s in nonempty_subsets(0, n)}
        coloring = table_coloring(table, n, 2)
        found = hindman_search(coloring, 2)
        cases += 2
        if found is not None:
            A, color = found
            # oracle: recompute every union color straight from the table
            union_colors = {table[finset_key(u)] for u in finite_unions(A)}
            if union_colors != {color}:
                failures.append({"law": "hindman witness", "trial": trial})
        if milliken_search(coloring, 1, 2) != found:
            failures.append({"law": "milliken k=1 reduction", "trial": trial})
    return cases, failures


def run_oscillation_suite(
    f: FieldSpec, trunc: int, seed: int, budget: int
) -> tuple[int, list[dict]]:
    cases = 0
    failures: list[dict] = []
    hi = min(trunc, 5)
    A0, A1 = parity_pair(f)
    for v in window_vectors(f, 0, hi):
        for c in f.nonzero_scalars():
            cases += 1
            if osc(scale(c, v)) != osc(v):
                failures.append(
                    {"law": "scalar invariance", "v": encode_vector(v), "c": str(c)}
                )
        cases += 1
        if not (A0(v) ^ A1(v)):
            failures.append({"law": "parity partition", "v": encode_vector(v)})
        if not f.is_rationals and f.prime == 2:
            runs = 1 + sum(
                1
                for a, b in zip(v.support.elements, v.support.elements[1:])
                if b > a + 1
            )
            cases += 1
            if osc(v) != runs:
                failures.append({"law": "gf2 run count", "v": encode_vector(v)})
    for m in range(1, min(trunc, 6) + 1):
        r = osc_range(basis_block(f, 0, m), budget)
        expected = set()
        for tup in product(f.all_scalars(), repeat=m):
            supp = [i for i, c in enumerate(tup) if c != 0]
            if supp:
                expected.add(
                    sum(
                        1
                        for i in supp
                        if tup[i] != (tup[i + 1] if i + 1 < m else f.zero)
                    )
                )
        cases += 1
        if r != expected:
            failures.append({"law": "osc_range brute force", "m": m})
    return cases, failures


def run_games_suite(
    f: FieldSpec, trunc: int, seed: int, budget: int
) -> tuple[int, list[dict]]:
    rng = random.Random(seed)
    cases = 0
    failures: list[dict] = []
    max_len = 2 if f.is_rationals else 4
    for trial in range(60):
        kind = (GameKind.ASYMPTOTIC, GameKind.GOWERS, GameKind.RESTRICTED)[trial % 3]
        ambient = random_blockseq(f, rng, trunc, max_len)
        generators = (ambient,)
        if len(ambient) > 1:
            generators += (tail_beyond(ambient, ambient[0].max_index),)
        base = FilterBase(f, trunc, generators, min_tail=1)
        t = play(
            kind,
            ambient,
            random_I(rng.randrange(1 << 30)),
            random_II(rng.randrange(1 << 30)),
            3,
            base=base,
        )
        cases += 2
        if replay_validate(t) is not None:
            failures.append({"law": "replay", "trial": trial})
        if not dominates(outcome_of(t), ambient):
            failures.append({"law": "outcome dominated", "trial": trial})
    return cases, failures


def run_filters_suite(
    f: FieldSpec, trunc: int, seed: int, budget: int
) -> tuple[int, list[dict]]:
    rng = random.Random(seed)
    cases = 0
    failures: list[dict] = []
    for trial in range(40):
        P = random_partition(rng, 12, 5)
        J = coarsen_intervals(P)
        for x in separated_selectors(J, 12):
            cases += 1
            if qpoint_check(x, P) is not None:
                failures.append(
                    {"law": "coarsen separation", "trial": trial, "x": sorted(x)}
                )
    for trial in range(40):
        P = random_interval_partition(rng, 12, 4)
        for x in cellwise_selectors(P):
            u, v = split_even_odd(x)
            for half in (u, v):
                cases += 1
                if not half_separated(half, P):
                    failures.append(
                        {"law": "split separation", "trial": trial, "x": sorted(x)}
                    )
    n = min(trunc, 5 if f.is_rationals else 8)
    X = basis_block(f, 0, n)
    B = FilterBase(f, n, (X,), 1)
    for trial in range(10):
        result = strong_p_diagonalize(B, tail_family(X), X, 2, budget)
        cases += 1
        if not all(ok for _, ok in result.checks):
            failures.append({"law": "strong-p verification", "trial": trial})
    return cases, failures


def separated_selectors(J: IntervalSeq, n: int) -> list[frozenset[int]]:
    """Sets whose consecutive members straddle a whole interval of J and whose
    minimum clears J_0; includes the empty set and singletons."""
    out = [frozenset()]

    def rec(acc: tuple[int, ...]) -> None:
        out.append(frozenset(acc))
        last = acc[-1]
        for e in range(last + 1, n):
            if any(K.lo > last and K.hi < e for K in J):
                rec(acc + (e,))

    for s in range(J[0].hi + 1, n):
        rec((s,))
    return out


def cellwise_selectors(P: FinitePartition) -> list[frozenset[int]]:
    """Sets meeting each cell at most once, minimum above the first cell."""
    first_max = max(P.cells[0])
    options: list[list[Optional[int]]] = [
        [None] + [e for e in cell if e > first_max] for cell in P.cells
    ]
    return [
        frozenset(e for e in combo if e is not None) for combo in product(*options)
    ]


def half_separated(half: tuple[int, ...], P: FinitePartition) -> bool:
    """Each consecutive pair has a whole cell strictly between them."""
    return all(
        any(min(c) > a and max(c) < b for c in P.cells)
        for a, b in zip(half, half[1:])
    )


SUITES: dict[str, Callable[[FieldSpec, int, int, int], tuple[int, list[dict]]]] = {
    "algebra": run_algebra_suite,
    "blockseq": run_blockseq_suite,
    "fin": run_fin_suite,
    "oscillation": run_oscillation_suite,
    "games": run_games_suite,
    "filters": run_filters_suite,
}


def run_suite(
    name: str,
    f: FieldSpec,
    trunc: int,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> tuple[int, list[dict]]:
    if name == "all":
        cases = 0
        failures: list[dict] = []
        for suite in SUITES.values():
            c, fl = suite(f, trunc, seed, budget)
            cases += c
            failures.extend(fl)
        return cases, failures
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name](f, trunc, seed, budget)
