"""Oscillation of a vector, the even/odd asymptotic pair, and probes that
ask whether a set of vectors meets every small block subspace.

osc(v) counts the support indices where the coefficient differs from the one
at the next index (missing coefficients count as zero); it is invariant under
multiplication by nonzero scalars.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .algebra import FieldSpec, Vector
from .blockseq import BlockSeq, block_sequences_below, span_vectors
from .errors import Budget

__all__ = [
    "VectorPredicate",
    "osc",
    "osc_range",
    "parity_pair",
    "always_true",
    "always_false",
    "extensional_predicate",
    "predicate_by_name",
    "meets_every_block_subspace",
]


@dataclass(frozen=True)
class VectorPredicate:
    """A named total predicate on vectors; ``scalar_invariant`` is declared,
    not inferred."""

    name: str
    decide: Callable[[Vector], bool] = field(compare=False, repr=False)
    scalar_invariant: bool = False

    def __call__(self, v: Vector) -> bool:
        return bool(self.decide(v))


def osc(v: Vector) -> int:
    """|{i in supp(v) : a_i != a_{i+1}}|, with a_j = 0 off the support."""
    coeffs = v.as_dict()
    zero = v.field.zero
    return sum(1 for i in coeffs if coeffs[i] != coeffs.get(i + 1, zero))


def osc_range(X: BlockSeq, budget: int | None = None) -> set[int]:
    """{osc(v) : v in ⟨X⟩} by exhaustive span enumeration."""
    return {osc(v) for v in span_vectors(X, budget)}


def parity_pair(f: FieldSpec) -> tuple[VectorPredicate, VectorPredicate]:
    """The even/odd oscillation pair (A0, A1); disjoint and jointly exhaustive."""
    even = VectorPredicate("osc-even", lambda v: osc(v) % 2 == 0, scalar_invariant=True)
    odd = VectorPredicate("osc-odd", lambda v: osc(v) % 2 == 1, scalar_invariant=True)
    return even, odd


always_true = VectorPredicate("all", lambda v: True, scalar_invariant=True)
always_false = VectorPredicate("none", lambda v: False, scalar_invariant=True)


def extensional_predicate(name: str, members: list[Vector]) -> VectorPredicate:
    """Predicate given by an explicit vector list (small universes only)."""
    table = frozenset(members)
    return VectorPredicate(name, lambda v: v in table)


def predicate_by_name(name: str) -> VectorPredicate:
    if name == "osc-even":
        return VectorPredicate("osc-even", lambda v: osc(v) % 2 == 0, scalar_invariant=True)
    if name == "osc-odd":
        return VectorPredicate("osc-odd", lambda v: osc(v) % 2 == 1, scalar_invariant=True)
    if name == "all":
        return always_true
    if name == "none":
        return always_false
    raise ValueError(f"unknown predicate {name!r}")


def meets_every_block_subspace(
    P: VectorPredicate, X: BlockSeq, d: int, budget: int | None = None
) -> Optional[BlockSeq]:
    """Finite asymptotic probe below X.

    None when every length-d block sequence Z with entries from ⟨X⟩ has some
    vector of ⟨Z⟩ satisfying P; otherwise the canonically least failing Z.
    Quantifying over block sequences rather than subspaces is the finite
    reading: every infinite-dimensional subspace contains a block sequence.
    """
    guard = Budget(budget)
    for Z in block_sequences_below(X, d, budget):
        hit = False
        for v in span_vectors(Z, budget):
            guard.spend()
            if P(v):
                hit = True
                break
        if not hit:
            return Z
    return None
