"""Game state machines, move validation, built-in strategies, and the
diagonalization/tree constructions."""

import random

import pytest

from blocklab.algebra import basis_vector, gf, vector
from blocklab.blockseq import BlockSeq, basis_block, dominates, tail_beyond
from blocklab.errors import ExhaustionError, IllegalMoveError
from blocklab.filters import FilterBase
from blocklab.games import (
    GameKind,
    GameTranscript,
    Move,
    block_move,
    canonical_least_II,
    clopen_diag_membership,
    compose,
    const_I,
    constant_family,
    diagonalizing_strategy_for_I,
    into_tree_strategy_for_II,
    nat_move,
    outcome_of,
    play,
    random_I,
    random_II,
    replay_validate,
    scripted,
    strategy_tree_of,
    tail_family,
    tail_I,
    validate_move,
    vector_move,
)
from blocklab.verify import random_blockseq

F2, F3 = gf(2), gf(3)


def e(f, n):
    return basis_vector(f, n)


def empty_t(kind, X, base=None):
    return GameTranscript(kind, X, (), base)


class TestMoves:
    def test_exactly_one_payload(self):
        with pytest.raises(ValueError):
            Move("I", n=1, v=e(F2, 0))
        with pytest.raises(ValueError):
            Move("II", n=1)

    def test_sides(self):
        assert nat_move(3).side == "I"
        assert vector_move(e(F2, 1)).side == "II"


class TestValidateMove:
    def test_asymptotic_support_above_natural(self):
        t = empty_t(GameKind.ASYMPTOTIC, basis_block(F2, 0, 6)).with_move(nat_move(1))
        assert validate_move(t, vector_move(e(F2, 2))).ok

    def test_asymptotic_support_too_low(self):
        t = empty_t(GameKind.ASYMPTOTIC, basis_block(F2, 0, 6)).with_move(nat_move(1))
        check = validate_move(t, vector_move(vector(F2, {0: 1, 1: 1})))
        assert not check.ok and "min support" in check.reason

    def test_gowers_membership(self):
        X = basis_block(F2, 0, 6)
        Y = BlockSeq(F2, (vector(F2, {0: 1, 1: 1}), e(F2, 2)))
        t = empty_t(GameKind.GOWERS, X).with_move(block_move(Y))
        check = validate_move(t, vector_move(e(F2, 0)))
        assert not check.ok and "span" in check.reason

    def test_turn_parity(self):
        t = empty_t(GameKind.ASYMPTOTIC, basis_block(F2, 0, 6))
        assert not validate_move(t, vector_move(e(F2, 0))).ok

    def test_restricted_needs_generator_domination(self):
        X = basis_block(F2, 0, 4)
        base = FilterBase(F2, 4, (tail_beyond(X, 0),), 1)
        t = empty_t(GameKind.RESTRICTED, X, base)
        assert not validate_move(t, block_move(X)).ok
        assert validate_move(t, block_move(tail_beyond(X, 1))).ok

    def test_outcome_must_stay_block(self):
        X = basis_block(F2, 0, 6)
        t = empty_t(GameKind.ASYMPTOTIC, X)
        t = t.with_move(nat_move(0)).with_move(vector_move(e(F2, 3)))
        t = t.with_move(nat_move(0))
        check = validate_move(t, vector_move(e(F2, 2)))
        assert not check.ok and "extend" in check.reason


class TestPlay:
    def test_zero_rounds(self):
        t = play(GameKind.ASYMPTOTIC, basis_block(F2, 0, 4), const_I(0), canonical_least_II(), 0)
        assert t.moves == () and len(outcome_of(t)) == 0

    def test_canonical_play_is_deterministic(self):
        X = basis_block(F2, 0, 6)
        t = play(GameKind.ASYMPTOTIC, X, const_I(0), canonical_least_II(), 3)
        assert outcome_of(t).entries == (e(F2, 1), e(F2, 2), e(F2, 3))

    def test_illegal_scripted_move_reports_inning(self):
        X = basis_block(F2, 0, 6)
        s2 = scripted("II", [vector_move(e(F2, 1)), vector_move(e(F2, 3)), vector_move(e(F2, 2))])
        with pytest.raises(IllegalMoveError) as info:
            play(GameKind.ASYMPTOTIC, X, const_I(0), s2, 3)
        assert info.value.side == "II" and info.value.inning == 2

    def test_scripted_resignation_ends_play(self):
        X = basis_block(F2, 0, 6)
        s2 = scripted("II", [vector_move(e(F2, 1))])
        t = play(GameKind.ASYMPTOTIC, X, const_I(0), s2, 3)
        assert len(outcome_of(t)) == 1

    def test_gowers_tail_player(self):
        X = basis_block(F3, 0, 5)
        t = play(GameKind.GOWERS, X, tail_I(), canonical_least_II(), 2)
        assert replay_validate(t) is None
        assert dominates(outcome_of(t), X)

    def test_compose_falls_back(self):
        X = basis_block(F2, 0, 6)
        s1 = compose(scripted("I", [nat_move(2)]), const_I(0))
        t = play(GameKind.ASYMPTOTIC, X, s1, canonical_least_II(), 3)
        assert outcome_of(t).entries == (e(F2, 3), e(F2, 4), e(F2, 5))


class TestOutcome:
    def test_projection(self):
        X = basis_block(F2, 0, 6)
        t = empty_t(GameKind.ASYMPTOTIC, X)
        t = t.with_move(nat_move(1)).with_move(vector_move(e(F2, 2)))
        t = t.with_move(nat_move(3)).with_move(vector_move(e(F2, 4)))
        assert outcome_of(t).entries == (e(F2, 2), e(F2, 4))

    def test_empty(self):
        assert len(outcome_of(empty_t(GameKind.GOWERS, basis_block(F2, 0, 2)))) == 0


class TestRandomPlays:
    @pytest.mark.parametrize("kind", list(GameKind))
    def test_replay_and_domination(self, kind):
        rng = random.Random(17)
        for trial in range(40):
            ambient = random_blockseq(F3 if trial % 2 else F2, rng, 8, 4)
            base = FilterBase(ambient.field, 8, (ambient,), 1)
            t = play(
                kind,
                ambient,
                random_I(rng.randrange(1 << 30)),
                random_II(rng.randrange(1 << 30)),
                3,
                base=base,
            )
            assert replay_validate(t) is None
            assert dominates(outcome_of(t), ambient)


class TestDiagonalizingStrategy:
    def test_constant_family_outcomes_below_value(self):
        X = basis_block(F2, 0, 8)
        base = FilterBase(F2, 8, (X,), 1)
        s1 = diagonalizing_strategy_for_I(constant_family(X), base, X)
        t = play(GameKind.RESTRICTED, X, s1, canonical_least_II(), 3, base=base)
        assert dominates(outcome_of(t), X)

    def test_tail_family_prefix_contract(self):
        X = basis_block(F2, 0, 8)
        base = FilterBase(F2, 8, (X,), 1)
        fam = tail_family(X)
        s1 = diagonalizing_strategy_for_I(fam, base, X)
        t = play(GameKind.RESTRICTED, X, s1, canonical_least_II(), 3, base=base)
        Y = outcome_of(t)
        assert Y.entries == (e(F2, 0), e(F2, 1), e(F2, 2))
        for j in range(len(Y)):
            prefix = Y.prefix(j)
            assert dominates(tail_beyond(Y, prefix.max_support), fam(prefix))

    def test_disjoint_family_exhausts_at_opening(self):
        X = BlockSeq(F2, (e(F2, 0),))
        base = FilterBase(F2, 2, (X,), 1)
        fam = constant_family(BlockSeq(F2, (e(F2, 1),)))
        s1 = diagonalizing_strategy_for_I(fam, base, X)
        with pytest.raises(ExhaustionError) as info:
            play(GameKind.RESTRICTED, X, s1, canonical_least_II(), 1, base=base)
        assert info.value.index == 0

    def test_annotations_grow_per_prefix(self):
        X = basis_block(F2, 0, 8)
        base = FilterBase(F2, 8, (X,), 1)
        s1 = diagonalizing_strategy_for_I(tail_family(X), base, X)
        play(GameKind.RESTRICTED, X, s1, canonical_least_II(), 2, base=base)
        lengths = {len(k): len(v) for k, v in s1.annotations.items()}
        assert lengths == {0: 1, 1: 2}


class TestClopenMembership:
    def test_first_tail_membership(self):
        fam = [tail_beyond(basis_block(F2, 0, 8), m) for m in range(8)]
        assert clopen_diag_membership(BlockSeq(F2, (e(F2, 0), e(F2, 1))), fam)

    def test_two_constraints(self):
        fam = [tail_beyond(basis_block(F2, 0, 8), m) for m in range(8)]
        assert clopen_diag_membership(BlockSeq(F2, (e(F2, 1), e(F2, 2))), fam)

    def test_membership_fails_when_family_cuts_deeper(self):
        X = basis_block(F2, 0, 8)
        fam = [tail_beyond(X, 5) for _ in range(8)]
        assert not clopen_diag_membership(BlockSeq(F2, (e(F2, 0), e(F2, 1))), fam)

    def test_needs_two_entries_and_family_coverage(self):
        fam = [basis_block(F2, 0, 8)]
        with pytest.raises(ValueError):
            clopen_diag_membership(BlockSeq(F2, (e(F2, 0),)), fam)
        with pytest.raises(ValueError, match="family"):
            clopen_diag_membership(BlockSeq(F2, (e(F2, 3), e(F2, 5))), fam)


class TestStrategyTree:
    def test_depth_zero(self):
        base = FilterBase(F2, 6, (basis_block(F2, 0, 6),), 1)
        T = strategy_tree_of(canonical_least_II(), base, basis_block(F2, 0, 6), 0)
        assert set(T.nodes) == {()}

    def test_single_generator_single_child(self):
        X = basis_block(F2, 0, 6)
        base = FilterBase(F2, 6, (X,), 1)
        T = strategy_tree_of(canonical_least_II(), base, X, 1)
        assert set(T.nodes) == {(), (e(F2, 0),)}

    def test_one_child_per_generator(self):
        X = basis_block(F2, 0, 6)
        base = FilterBase(F2, 6, (X, tail_beyond(X, 0)), 1)
        T = strategy_tree_of(canonical_least_II(), base, X, 1)
        assert set(T.nodes) == {(), (e(F2, 0),), (e(F2, 1),)}

    def test_branches_resimulate_as_alpha_plays(self):
        X = basis_block(F2, 0, 8)
        alpha = canonical_least_II()
        base = FilterBase(F2, 8, (X, tail_beyond(X, 1)), 1)
        T = strategy_tree_of(alpha, base, X, 3)
        for branch in T.maximal_branches():
            witnesses = T.nodes[branch]
            t = GameTranscript(GameKind.RESTRICTED, X, (), base)
            for Y, expected in zip(witnesses, branch):
                t = t.with_move(block_move(Y))
                m = alpha.act(t)
                assert m.v == expected
                t = t.with_move(m)

    def test_extension_property_per_generator(self):
        X = basis_block(F2, 0, 8)
        base = FilterBase(F2, 8, (X, tail_beyond(X, 1)), 1)
        T = strategy_tree_of(canonical_least_II(), base, X, 3)
        from blocklab.blockseq import span_contains

        for node in T.nodes:
            if len(node) >= 3:
                continue
            children = T.children(node)
            for g in base.generators:
                assert any(span_contains(g, v) is not None for v in children)


class TestIntoTreeStrategy:
    def make_tree(self):
        X = basis_block(F2, 0, 6)
        base = FilterBase(F2, 6, (X, tail_beyond(X, 0)), 1)
        return X, base, strategy_tree_of(canonical_least_II(), base, X, 1)

    def test_plays_child_above_natural(self):
        X, base, T = self.make_tree()
        s2 = into_tree_strategy_for_II(T, base)
        t = empty_t(GameKind.ASYMPTOTIC, X).with_move(nat_move(0))
        assert s2.act(t).v == e(F2, 1)

    def test_exhausts_when_natural_too_large(self):
        X, base, T = self.make_tree()
        s2 = into_tree_strategy_for_II(T, base)
        t = empty_t(GameKind.ASYMPTOTIC, X).with_move(nat_move(5))
        with pytest.raises(ExhaustionError):
            s2.act(t)

    def test_depth_zero_tree_fails_immediately(self):
        X = basis_block(F2, 0, 6)
        base = FilterBase(F2, 6, (X,), 1)
        T = strategy_tree_of(canonical_least_II(), base, X, 0)
        s2 = into_tree_strategy_for_II(T, base)
        t = empty_t(GameKind.ASYMPTOTIC, X).with_move(nat_move(0))
        with pytest.raises(ExhaustionError):
            s2.act(t)

    def test_outcomes_are_tree_branches(self):
        X = basis_block(F2, 0, 8)
        base = FilterBase(F2, 8, (X, tail_beyond(X, 1)), 1)
        T = strategy_tree_of(canonical_least_II(), base, X, 3)
        s2 = into_tree_strategy_for_II(T, base)
        t = play(GameKind.ASYMPTOTIC, X, const_I(0), s2, 3)
        assert tuple(outcome_of(t).entries) in T.nodes
