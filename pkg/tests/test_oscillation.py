"""Oscillation counting, the even/odd pair, range thickness, and the
block-subspace probes."""

from itertools import product

import pytest

from blocklab.algebra import basis_vector, gf, scale, vector
from blocklab.blockseq import BlockSeq, basis_block
from blocklab.oscillation import (
    always_false,
    always_true,
    extensional_predicate,
    meets_every_block_subspace,
    osc,
    osc_range,
    parity_pair,
    predicate_by_name,
)
from blocklab.verify import window_vectors

F2, F3, F5 = gf(2), gf(3), gf(5)

# osc_range((e0..e_{m-1})) over GF(3), pinned from the dense brute-force
# oracle below during bring-up
THICKNESS = {
    1: {1},
    2: {1, 2},
    3: {1, 2, 3},
    4: {1, 2, 3, 4},
    5: {1, 2, 3, 4, 5},
    6: {1, 2, 3, 4, 5, 6},
}


def e(f, n):
    return basis_vector(f, n)


def dense_osc(tup, f):
    """Oracle: oscillation computed on a dense coefficient list."""
    supp = [i for i, c in enumerate(tup) if c != f.zero]
    return sum(1 for i in supp if tup[i] != (tup[i + 1] if i + 1 < len(tup) else f.zero))


class TestOsc:
    def test_basis_vector_oscillates_once(self):
        assert osc(e(F3, 5)) == 1

    def test_two_steps_gf3(self):
        assert osc(vector(F3, {0: 1, 1: 2})) == 2

    def test_interior_plateau_gf2(self):
        assert osc(vector(F2, {0: 1, 1: 1, 2: 1})) == 1

    @pytest.mark.parametrize("f", [F3, F5])
    def test_scalar_invariance_exhaustive(self, f):
        for v in window_vectors(f, 0, 5):
            for c in f.nonzero_scalars():
                assert osc(scale(c, v)) == osc(v)

    def test_gf2_osc_counts_support_runs(self):
        for v in window_vectors(F2, 0, 8):
            supp = v.support.elements
            runs = 1 + sum(1 for a, b in zip(supp, supp[1:]) if b > a + 1)
            assert osc(v) == runs


class TestOscRange:
    def test_single_generator(self):
        assert osc_range(BlockSeq(F3, (e(F3, 0),))) == {1}

    def test_two_generators_attain_two(self):
        assert osc_range(basis_block(F3, 0, 2)) == {1, 2}

    def test_gap_forces_even(self):
        assert osc_range(BlockSeq(F2, (vector(F2, {0: 1, 2: 1}),))) == {2}

    @pytest.mark.parametrize("m", sorted(THICKNESS))
    def test_thickness_regression(self, m):
        got = osc_range(basis_block(F3, 0, m))
        assert got == THICKNESS[m]
        # independent oracle over dense tuples
        brute = set()
        for tup in product(range(3), repeat=m):
            if any(tup):
                brute.add(dense_osc(tup, F3))
        assert got == brute

    def test_ranges_are_intervals_of_nondecreasing_length(self):
        lengths = []
        for m in sorted(THICKNESS):
            r = sorted(THICKNESS[m])
            assert r == list(range(r[0], r[-1] + 1))
            lengths.append(len(r))
        assert lengths == sorted(lengths)


class TestParityPair:
    def test_even_member(self):
        A0, _ = parity_pair(F3)
        assert A0(vector(F3, {0: 1, 1: 2}))

    def test_odd_member(self):
        _, A1 = parity_pair(F3)
        assert A1(e(F3, 5))

    def test_partition(self):
        A0, A1 = parity_pair(F3)
        for v in window_vectors(F3, 0, 4):
            assert A0(v) ^ A1(v)
        assert A0.scalar_invariant and A1.scalar_invariant


class TestProbe:
    def test_trivial_predicate_never_fails(self):
        assert meets_every_block_subspace(always_true, basis_block(F2, 0, 4), 2) is None

    def test_even_parity_meets_every_plane_gf3(self):
        A0, _ = parity_pair(F3)
        assert meets_every_block_subspace(A0, basis_block(F3, 0, 6), 2) is None

    def test_gf2_span_avoiding_odd_oscillation(self):
        X = BlockSeq(
            F2,
            (
                vector(F2, {0: 1, 2: 1}),
                vector(F2, {4: 1, 6: 1}),
                vector(F2, {8: 1, 10: 1}),
            ),
        )
        _, A1 = parity_pair(F2)
        assert meets_every_block_subspace(A1, X, 3) == X

    def test_always_false_fails_at_the_least_sequence(self):
        X = basis_block(F2, 0, 3)
        got = meets_every_block_subspace(always_false, X, 1)
        assert got.entries == (e(F2, 0),)


class TestPredicateNames:
    def test_builtins(self):
        assert predicate_by_name("osc-even")(vector(F2, {0: 1, 2: 1}))
        assert predicate_by_name("osc-odd")(e(F2, 0))
        assert predicate_by_name("all")(e(F2, 0))
        assert not predicate_by_name("none")(e(F2, 0))
        with pytest.raises(ValueError):
            predicate_by_name("bogus")

    def test_extensional(self):
        P = extensional_predicate("two", [e(F2, 2)])
        assert P(e(F2, 2)) and not P(e(F2, 3))
