from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import all_instances, sample_feasible
from helpers import OTP, SATURATING, SATURATING_PARAMS, otp_code
from wiretap2.audit import leak_by_rank
from wiretap2.gf import make_field
from wiretap2.model import InstanceError, ProblemInstance, RateAllocation, RateTuple
from wiretap2.pipeline import plan
from wiretap2.region import IntegerParameters
from wiretap2.synth import (
    ConstructionFailed,
    InvalidParams,
    LinearCode,
    NotFound,
    channel_layout,
    choose_extension_vector,
    reduce_key,
    synthesize,
)


def test_one_time_pad_code():
    code = synthesize(OTP, IntegerParameters(1, 1, 1, (1, 1), (0, 0), (1, 1)))
    assert code == otp_code()
    assert code.generator.tolist() == [[0, 1], [1, 1]]
    assert code.has_block_structure()
    assert [leak_by_rank(code, s) for s in OTP.wiretap_sets] == [0, 0]


def test_no_wiretappers_routes_plainly():
    inst = ProblemInstance((2, 1), 2, ())
    code = synthesize(inst, IntegerParameters(1, 3, 0, (2, 1), (), (2, 1)))
    assert code.generator.tolist() == np.eye(3, dtype=int).tolist()


def test_keyless_code_leaks_exactly_the_slack():
    code = synthesize(OTP, IntegerParameters(1, 2, 0, (1, 1), (1, 1), (1, 1)))
    assert code.generator.tolist() == [[1, 0], [0, 1]]
    assert leak_by_rank(code, (1,)) == 1


def test_extension_vector_examples():
    F3 = make_field(3)
    assert choose_extension_vector(F3, [], 1).tolist() == [0]
    with pytest.raises(NotFound):
        choose_extension_vector(F3, [np.array([[1]])], 1)
    got = choose_extension_vector(F3, [np.array([[1, 0]]), np.array([[0, 1]])], 2)
    assert got.tolist() == [1, 1]


def test_extension_vector_empty_span_excludes_zero():
    F3 = make_field(3)
    assert choose_extension_vector(F3, [np.zeros((0, 2), dtype=np.int64)], 2).tolist() == [0, 1]


@pytest.mark.parametrize(
    "tup, r, R_K",
    [
        (RateTuple(1, 5, (1, 1)), (1, 1), 1),
        (RateTuple(2, 0, (1, 1)), (1, 1), 0),
        (RateTuple(Fraction(2, 3), 7, (Fraction(1, 3),)), (Fraction(1, 3), Fraction(2, 3)), Fraction(1, 3)),
    ],
)
def test_reduce_key(tup, r, R_K):
    out = reduce_key(tup, RateAllocation(r))
    assert out.R_K == R_K and out.R_M == tup.R_M and out.equivocations == tup.equivocations


def test_reduce_key_needs_enough_key():
    with pytest.raises(ValueError):
        reduce_key(RateTuple(1, 0, (1, 1)), RateAllocation((1, 1)))


def test_construction_failure_names_sets():
    with pytest.raises(ConstructionFailed) as exc:
        synthesize(SATURATING, SATURATING_PARAMS)
    assert exc.value.step == 4
    assert exc.value.sets == ((1, 4), (2, 4), (3, 4))
    assert "{1,4} {2,4} {3,4}" in str(exc.value)


def test_invalid_params_rejected():
    with pytest.raises(InvalidParams):
        synthesize(OTP, IntegerParameters(1, 1, 1, (1, 1), (0,), (1, 1)))
    with pytest.raises(InvalidParams):
        synthesize(OTP, IntegerParameters(1, 2, 0, (1, 1), (0, 0), (1, 1)))  # wiretap sees too much


def test_layout():
    assert channel_layout([2, 0, 1]) == [(0, 2), (2, 2), (2, 3)]
    code = otp_code()
    assert code.positions((2, 1)) == [0, 1]


def test_json_round_trip_is_bit_exact(tmp_path):
    code = otp_code()
    text = code.dumps()
    back = LinearCode.from_dict(json.loads(text))
    assert back == code and back.dumps() == text


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("generator"),
        lambda d: d.__setitem__("generator", [[0, 3], [1, 1]]),
        lambda d: d.__setitem__("generator", [[0, 1, 0], [1, 1, 0]]),
        lambda d: d.__setitem__("channel_layout", [[0, 2], [2, 2]]),
    ],
)
def test_malformed_code(mutate):
    data = otp_code().to_dict()
    mutate(data)
    with pytest.raises(InstanceError):
        LinearCode.from_dict(data)


CORPUS = all_instances(max_h=4, max_d=3, max_cap=2)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(0, 2**32 - 1))
def test_synthesized_codes_meet_leak_bounds(inst, seed):
    tup, _ = sample_feasible(inst, np.random.default_rng(seed))
    params = plan(inst, tup)[3]
    code = synthesize(inst, params)
    F = code.field
    assert code.has_block_structure()
    assert F.rank(code.generator) == params.total
    for s, c in zip(inst.wiretap_sets, params.c_prime):
        assert leak_by_rank(code, s) <= c
    # a second run gives the same code
    assert synthesize(inst, params) == code
