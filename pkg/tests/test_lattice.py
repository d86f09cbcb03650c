import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dagdecode import (
    DecodingPath,
    Hypothesis,
    Instance,
    PathShapeError,
    ShapeError,
    VocabError,
    validate,
)
from dagdecode.lattice import check_tokens
from dagdecode.logmath import LOG_ZERO

from conftest import I2_EMISSIONS, I2_TRANSITIONS, random_batch


class TestInstance:
    def test_valid_instances_pass(self, i2, i4):
        assert validate(i2) == []
        assert validate(i4) == []
        # Cross-check row masses with compensated summation, not logsumexp.
        for t in range(i4.L - 1):
            row = i4.log_transitions[t, t + 1 :]
            mass = math.fsum(math.exp(v) for v in row if v > LOG_ZERO)
            assert abs(mass - 1.0) < 1e-12

    def test_generator_outputs_validate_with_independent_summation(self):
        # Recompute each row mass with math.fsum on exponentials rather
        # than trusting the package's logsumexp.
        for inst in random_batch(5, seed0=11, L=7, V=4, sparsity=0.4):
            assert validate(inst) == []
            for t in range(inst.L - 1):
                row = inst.log_transitions[t, t + 1 :]
                mass = math.fsum(math.exp(v) for v in row if v > LOG_ZERO)
                assert mass == pytest.approx(1.0, abs=1e-9)

    def test_denormalized_row_named_with_row_index(self, i2):
        trans = np.array(i2.log_transitions)
        trans.setflags(write=True)
        trans[0, 1] = math.log(0.5)
        broken = Instance(L=2, V=2, log_transitions=trans, log_emissions=i2.log_emissions)
        violations = validate(broken)
        assert len(violations) == 1
        assert "row 1" in violations[0]
        assert "normalization" in violations[0]

    def test_terminal_row_must_be_empty(self, i2):
        trans = np.array(i2.log_transitions)
        trans.setflags(write=True)
        trans[1, 1] = 0.0
        broken = Instance(L=2, V=2, log_transitions=trans, log_emissions=i2.log_emissions)
        assert any("terminal" in v for v in validate(broken))

    def test_lower_triangle_entries_flagged(self, i4):
        trans = np.array(i4.log_transitions)
        trans.setflags(write=True)
        trans[2, 1] = math.log(0.5)
        broken = Instance(L=4, V=2, log_transitions=trans, log_emissions=i4.log_emissions)
        assert any("non-later" in v for v in validate(broken))

    def test_dead_end_flagged(self, i4):
        trans = np.array(i4.log_transitions)
        trans.setflags(write=True)
        trans[1, :] = LOG_ZERO
        broken = Instance(L=4, V=2, log_transitions=trans, log_emissions=i4.log_emissions)
        assert any("dead end" in v and "row 2" in v for v in validate(broken))

    def test_emission_row_checked(self, i2):
        emis = np.array(i2.log_emissions)
        emis.setflags(write=True)
        emis[1, 1] = math.log(0.5)
        broken = Instance(L=2, V=2, log_transitions=i2.log_transitions, log_emissions=emis)
        assert any("emission row 2" in v for v in validate(broken))

    def test_tables_are_frozen(self, i2):
        with pytest.raises(ValueError):
            i2.log_transitions[0, 1] = 0.0
        with pytest.raises(ValueError):
            i2.log_emissions[0, 0] = 0.0

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            Instance(L=3, V=2, log_transitions=np.zeros((2, 2)), log_emissions=np.zeros((3, 2)))
        with pytest.raises(ShapeError):
            Instance(L=2, V=3, log_transitions=np.zeros((2, 2)), log_emissions=np.zeros((2, 2)))

    def test_vocab_length_checked(self):
        with pytest.raises(ShapeError):
            Instance.from_probs(I2_TRANSITIONS, I2_EMISSIONS, vocab=["a"])

    def test_single_position_lattice(self):
        inst = Instance.from_probs([[0.0]], [[0.25, 0.75]])
        assert validate(inst) == []


class TestDecodingPath:
    def test_must_start_at_one(self):
        with pytest.raises(PathShapeError):
            DecodingPath((2, 3))

    def test_must_increase(self):
        with pytest.raises(PathShapeError):
            DecodingPath((1, 3, 2, 4))
        with pytest.raises(PathShapeError):
            DecodingPath((1, 1))

    def test_terminal_check(self, i4):
        DecodingPath((1, 2, 4)).check_against(4)
        with pytest.raises(PathShapeError):
            DecodingPath((1, 2, 3)).check_against(4)

    def test_single_position_path(self):
        path = DecodingPath((1,))
        path.check_against(1)
        assert len(path) == 1

    @given(st.lists(st.integers(min_value=2, max_value=40), min_size=0, max_size=8,
                    unique=True))
    def test_sorted_interior_always_accepted(self, interior):
        positions = (1, *sorted(interior), 41)
        path = DecodingPath(positions)
        assert list(path) == list(positions)


class TestTokens:
    def test_out_of_range_rejected(self, i2):
        with pytest.raises(VocabError):
            check_tokens(i2, [0, 2])
        with pytest.raises(VocabError):
            check_tokens(i2, [-1])

    def test_valid_pass_through(self, i2):
        assert list(check_tokens(i2, [1, 0])) == [1, 0]


class TestHypothesis:
    def test_from_scores_sums_once(self):
        hyp = Hypothesis.from_scores((1, 2), [0, 1], -1.0, -2.0)
        assert hyp.joint_logprob == -3.0

    def test_inconsistent_joint_rejected(self):
        with pytest.raises(ValueError):
            Hypothesis(
                path=DecodingPath((1, 2)),
                tokens=(0, 1),
                path_logprob=-1.0,
                emission_logprob=-2.0,
                joint_logprob=-2.5,
            )

    def test_token_length_must_match_path(self):
        with pytest.raises(ShapeError):
            Hypothesis.from_scores((1, 2), [0], -1.0, -2.0)
