"""Small hand-built codes shared by several test modules."""

from __future__ import annotations

import numpy as np

from wiretap2.gf import make_field
from wiretap2.model import ProblemInstance
from wiretap2.region import IntegerParameters
from wiretap2.synth import LinearCode, channel_layout

OTP = ProblemInstance((1, 1), 3, ((1,), (2,)))


def otp_code() -> LinearCode:
    params = IntegerParameters(1, 1, 1, (1, 1), (0, 0), (1, 1))
    G = np.array([[0, 1], [1, 1]], dtype=np.int64)
    return LinearCode(make_field(3), params, G, tuple(channel_layout(params.n_i)))


def identity_code(c_prime=(1, 1)) -> LinearCode:
    params = IntegerParameters(1, 2, 0, (1, 1), tuple(c_prime), (1, 1))
    return LinearCode(make_field(3), params, np.eye(2, dtype=np.int64), tuple(channel_layout(params.n_i)))


# q = 2 is too small for three wiretap sets meeting on channel 4
SATURATING = ProblemInstance((1, 1, 1, 1), 2, ((1, 3), (2, 3), (1, 4), (2, 4), (3, 4)))
SATURATING_PARAMS = IntegerParameters(1, 2, 2, (1, 1, 1, 1), (0,) * 5, (1, 1, 1, 1))
