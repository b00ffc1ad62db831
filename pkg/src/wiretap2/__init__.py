"""Wiretap channel II with imperfect secrecy: exact rate regions, linear
code synthesis over GF(q) and two-way secrecy audits."""

from __future__ import annotations

__version__ = "0.1.0"

from .audit import AuditReport, equivocation_oracle, full_audit, leak_by_rank, leak_rank
from .codec import by_channel, decode, encode, random_key
from .gf import GF, make_field
from .model import (
    InstanceError,
    ProblemInstance,
    RateAllocation,
    RateTuple,
    load_instance,
    load_tuple,
    slack,
    validate_instance,
)
from .pipeline import build_code, plan
from .region import (
    GENERAL,
    KEY_RECOVERED,
    Certificate,
    FeasibilityResult,
    InfeasibleError,
    IntegerParameters,
    RegionQuery,
    check_membership,
    minimize_key_rate,
    scale_to_integers,
)
from .synth import ConstructionFailed, LinearCode, load_code, reduce_key, synthesize

__all__ = [
    "AuditReport", "Certificate", "ConstructionFailed", "FeasibilityResult", "GENERAL", "GF",
    "InfeasibleError", "InstanceError", "IntegerParameters", "KEY_RECOVERED", "LinearCode",
    "ProblemInstance", "RateAllocation", "RateTuple", "RegionQuery", "build_code", "by_channel",
    "check_membership", "decode", "encode", "equivocation_oracle", "full_audit", "leak_by_rank",
    "leak_rank", "load_code", "load_instance", "load_tuple", "make_field", "minimize_key_rate",
    "plan", "random_key", "reduce_key", "scale_to_integers", "slack", "synthesize",
    "validate_instance",
]
