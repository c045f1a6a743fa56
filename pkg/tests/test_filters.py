"""Filter bases, diagonalization pipelines, spread witnesses, the
bookkeeping-set membership test, and the two interval-partition algorithms."""

import random
from itertools import product

import pytest

from blocklab.algebra import basis_vector, gf, rationals, vector
from blocklab.blockseq import BlockSeq, Interval, basis_block, dominates, span_contains, tail_beyond
from blocklab.errors import ExhaustionError
from blocklab.filters import (
    FilterBase,
    FinitePartition,
    IntervalSeq,
    b_set_membership,
    check_spread_witness,
    coarsen_intervals,
    density_probe,
    is_directed_base,
    p_diagonalize,
    qpoint_check,
    split_even_odd,
    spread_from_tail_diag,
    strong_family_from_fin,
    strong_p_diagonalize,
)
from blocklab.fin import FinBlockSeq, fin_blocks
from blocklab.games import constant_family, tail_family
from blocklab.oscillation import always_false, always_true, parity_pair

F2, F3 = gf(2), gf(3)


def e(f, n):
    return basis_vector(f, n)


def intervals(*pairs):
    return IntervalSeq(tuple(Interval(a, b) for a, b in pairs))


class TestTypes:
    def test_generators_validated(self):
        with pytest.raises(ValueError):
            FilterBase(F2, 4, (BlockSeq(F2, ()),), 1)
        with pytest.raises(ValueError):
            FilterBase(F2, 2, (basis_block(F2, 0, 4),), 1)

    def test_interval_seq_separation(self):
        with pytest.raises(ValueError):
            intervals((0, 2), (2, 3))

    def test_partition_must_cover(self):
        with pytest.raises(ValueError):
            FinitePartition(4, ((0, 1),))
        with pytest.raises(ValueError):
            FinitePartition(2, ((0, 1), (1,)))


class TestDirectedBase:
    def test_single_generator(self):
        assert is_directed_base(FilterBase(F2, 4, (basis_block(F2, 0, 4),), 1)) is None

    def test_common_refinement(self):
        B = FilterBase(F2, 4, (basis_block(F2, 0, 4), basis_block(F2, 1, 4)), 2)
        assert is_directed_base(B) is None

    def test_disjoint_generators_fail(self):
        B = FilterBase(
            F2, 2, (BlockSeq(F2, (e(F2, 0),)), BlockSeq(F2, (e(F2, 1),))), 1
        )
        assert is_directed_base(B) == (0, 1)


class TestPDiagonalize:
    def test_nested_tails(self):
        B = FilterBase(F2, 6, (basis_block(F2, 0, 6),), 1)
        targets = [basis_block(F2, 0, 6), basis_block(F2, 1, 6), basis_block(F2, 2, 6)]
        assert p_diagonalize(B, targets).entries == (e(F2, 0), e(F2, 1), e(F2, 2))

    def test_single_target_padded_to_min_tail(self):
        B = FilterBase(F2, 6, (basis_block(F2, 0, 6),), 3)
        X = basis_block(F2, 0, 6)
        assert p_diagonalize(B, [X]).entries == (e(F2, 0), e(F2, 1), e(F2, 2))

    def test_incompatible_targets_exhaust(self):
        B = FilterBase(F2, 2, (basis_block(F2, 0, 2),), 1)
        with pytest.raises(ExhaustionError):
            p_diagonalize(B, [BlockSeq(F2, (e(F2, 0),)), BlockSeq(F2, (e(F2, 1),))])

    def test_per_index_membership(self):
        B = FilterBase(F3, 6, (basis_block(F3, 0, 6),), 1)
        targets = [basis_block(F3, 0, 6), basis_block(F3, 2, 6)]
        Y = p_diagonalize(B, targets)
        for j, y in enumerate(Y):
            for target in targets[: j + 1]:
                assert span_contains(target, y) is not None


class TestStrongPDiagonalize:
    def test_constant_family(self):
        X = basis_block(F2, 0, 8)
        B = FilterBase(F2, 8, (X,), 1)
        result = strong_p_diagonalize(B, constant_family(X), X, 3)
        assert dominates(result.outcome, X)
        assert all(ok for _, ok in result.checks)

    def test_tail_family_pinned_outcome(self):
        X = basis_block(F2, 0, 8)
        B = FilterBase(F2, 8, (X,), 1)
        result = strong_p_diagonalize(B, tail_family(X), X, 3)
        assert result.outcome.entries == (e(F2, 0), e(F2, 1), e(F2, 2))
        assert result.checks == ((0, True), (1, True), (2, True))

    def test_disjoint_family_exhausts(self):
        X = BlockSeq(F2, (e(F2, 0),))
        B = FilterBase(F2, 2, (X,), 1)
        with pytest.raises(ExhaustionError):
            strong_p_diagonalize(B, constant_family(BlockSeq(F2, (e(F2, 1),))), X, 1)


class TestSpread:
    I7 = intervals((0, 0), (1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12))

    def test_witness_check_passes(self):
        assert check_spread_witness(BlockSeq(F2, (e(F2, 2), e(F2, 7))), self.I7) is None

    def test_adjacent_supports_fail_at_zero(self):
        I5 = intervals((0, 0), (1, 2), (3, 4), (5, 6), (7, 8))
        assert check_spread_witness(BlockSeq(F2, (e(F2, 1), e(F2, 2))), I5) == 0

    def test_singleton_only_needs_head_clearance(self):
        I5 = intervals((0, 0), (1, 2), (3, 4), (5, 6), (7, 8))
        assert check_spread_witness(BlockSeq(F2, (e(F2, 2),)), I5) is None
        assert check_spread_witness(BlockSeq(F2, (e(F2, 0),)), I5) == 0

    def test_pipeline_produces_checked_witness(self):
        X = basis_block(F2, 0, 13)
        B = FilterBase(F2, 13, (X,), 1)
        Y = spread_from_tail_diag(B, X, self.I7, 2)
        assert Y.entries == (e(F2, 1), e(F2, 5))
        assert check_spread_witness(Y, self.I7) is None

    def test_zero_rounds(self):
        X = basis_block(F2, 0, 13)
        B = FilterBase(F2, 13, (X,), 1)
        assert len(spread_from_tail_diag(B, X, self.I7, 0)) == 0

    def test_small_truncation_exhausts(self):
        X = basis_block(F2, 0, 3)
        B = FilterBase(F2, 3, (X,), 1)
        with pytest.raises(ExhaustionError):
            spread_from_tail_diag(B, X, self.I7, 3)


class TestBSetMembership:
    def test_full_support_vector_inside(self):
        X = basis_block(F2, 0, 2)
        assert b_set_membership(X, lambda a: X, fin_blocks([0, 1]))

    def test_missing_span_detected(self):
        X = basis_block(F2, 0, 2)
        fam = lambda a: BlockSeq(F2, (e(F2, 0),))
        assert not b_set_membership(X, fam, fin_blocks([1]))

    def test_family_equal_to_ambient_always_true(self):
        X = basis_block(F3, 0, 3)
        fam = lambda a: X
        for candidate in [fin_blocks([0], [1]), fin_blocks([0, 1], [2])]:
            assert b_set_membership(X, fam, candidate)

    def test_agrees_with_two_loop_brute_force(self):
        X = basis_block(F3, 0, 3)
        values = {
            0: basis_block(F3, 0, 3),
            1: tail_beyond(basis_block(F3, 0, 3), 0),
            2: BlockSeq(F3, (vector(F3, {0: 1, 1: 1}), e(F3, 2))),
        }
        fam = lambda a: values[len(a) % 3]
        from blocklab.verify import fin_coarsenings
        from blocklab.fin import supp_seq
        from blocklab.verify import window_vectors

        for candidate in fin_coarsenings(supp_seq(X)):
            got = b_set_membership(X, fam, candidate)
            a, b = candidate[: len(candidate) - 1], candidate[len(candidate) - 1]
            expected = True
            for v in window_vectors(F3, 0, 3):
                if v.support != b or span_contains(X, v) is None:
                    continue
                for j in range(len(a) + 1):
                    if span_contains(fam(a[:j]), v) is None:
                        expected = False
            assert got == expected

    def test_rejects_rationals(self):
        X = basis_block(rationals(1), 0, 2)
        with pytest.raises(ValueError, match="finite field"):
            b_set_membership(X, lambda a: X, fin_blocks([0]))


class TestStrongFamilyFromFin:
    def test_constant_family_stays_constant(self):
        X = basis_block(F2, 0, 4)
        B = FilterBase(F2, 4, (X,), 1)
        g = strong_family_from_fin(constant_family(X), B)
        assert g(fin_blocks([0])) == X
        assert g(FinBlockSeq(())) == X

    def test_single_vector_index(self):
        X = basis_block(F2, 0, 4)
        B = FilterBase(F2, 4, (X,), 1)

        def fam(x):
            if len(x) and x[0] == e(F2, 0):
                return basis_block(F2, 1, 4)
            return X

        g = strong_family_from_fin(fam, B)
        assert g(fin_blocks([0])) == basis_block(F2, 1, 4)

    def test_gf3_four_indices_intersected(self):
        X = basis_block(F3, 0, 4)
        B = FilterBase(F3, 4, (X,), 1)
        seen = []

        def fam(x):
            seen.append(x)
            return X

        g = strong_family_from_fin(fam, B)
        out = g(fin_blocks([0, 1]))
        # indices: the four support-filling vectors c0*e0 + c1*e1
        assert len(seen) == 4
        assert all(x[0].support.elements == (0, 1) for x in seen)
        assert out == X
        # the displayed inclusion: out is below every consulted value
        for x in seen:
            assert dominates(out, fam(x))

    def test_inclusion_with_heterogeneous_values(self):
        X = basis_block(F2, 0, 6)
        B = FilterBase(F2, 6, (X,), 1)
        values = [X, tail_beyond(X, 0), tail_beyond(X, 1)]

        def fam(x):
            return values[len(x) % 3]

        g = strong_family_from_fin(fam, B)
        a = fin_blocks([0], [1], [2])
        out = g(a)
        for length in range(1, len(a) + 1):
            # every index of that length shares the same family value here
            assert dominates(out, values[length % 3])

    def test_rejects_rationals(self):
        f = rationals(1)
        X = basis_block(f, 0, 3)
        B = FilterBase(f, 3, (X,), 1)
        with pytest.raises(ValueError, match="finite field"):
            strong_family_from_fin(constant_family(X), B)


class TestDensityProbe:
    def test_trivial_predicate_first_witness(self):
        B = FilterBase(F2, 4, (basis_block(F2, 0, 4),), 1)
        (w,) = density_probe(always_true, B, 2)
        assert w.entries == (e(F2, 0), e(F2, 1))

    def test_even_oscillation_witness_gf2(self):
        B = FilterBase(F2, 11, (basis_block(F2, 0, 11),), 1)
        A0, _ = parity_pair(F2)
        (w,) = density_probe(A0, B, 2)
        # canonical least all-even plane, pinned by the bring-up oracle
        assert w.entries == (
            vector(F2, {0: 1, 1: 1, 2: 1, 3: 1, 4: 1, 6: 1}),
            vector(F2, {8: 1, 10: 1}),
        )
        from blocklab.blockseq import span_vectors
        from blocklab.oscillation import osc

        assert all(osc(v) % 2 == 0 for v in span_vectors(w))

    def test_impossible_predicate_absent(self):
        B = FilterBase(F2, 4, (basis_block(F2, 0, 4),), 1)
        assert density_probe(always_false, B, 1) == (None,)


class TestSplitEvenOdd:
    def test_four_elements(self):
        assert split_even_odd([1, 4, 7, 9]) == ((1, 7), (4, 9))

    def test_singleton(self):
        assert split_even_odd([3]) == ((3,), ())

    def test_empty(self):
        assert split_even_odd([]) == ((), ())


class TestCoarsenIntervals:
    def test_single_cell(self):
        P = FinitePartition(6, (tuple(range(6)),))
        assert coarsen_intervals(P).entries == (Interval(0, 5),)

    def test_covered_cell_degenerates_to_point(self):
        P = FinitePartition(6, ((0, 3), (1, 2), (4, 5)))
        assert coarsen_intervals(P).entries == (
            Interval(0, 3),
            Interval(4, 4),
            Interval(5, 5),
        )

    def test_interval_cells_map_to_themselves(self):
        P = FinitePartition(6, ((0, 1), (2, 3), (4, 5)))
        assert coarsen_intervals(P).entries == (
            Interval(0, 1),
            Interval(2, 3),
            Interval(4, 5),
        )


class TestQPoint:
    def test_selector_passes(self):
        P = FinitePartition(6, ((0, 1), (2, 3), (4, 5)))
        assert qpoint_check([0, 2, 4], P) is None

    def test_doubled_cell_detected(self):
        P = FinitePartition(6, ((0, 1), (2, 3), (4, 5)))
        assert qpoint_check([0, 1], P) == 0

    def test_empty_selector(self):
        P = FinitePartition(6, ((0, 1), (2, 3), (4, 5)))
        assert qpoint_check([], P) is None
