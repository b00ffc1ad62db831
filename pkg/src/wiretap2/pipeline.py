"""From a rate tuple to an audited code."""

from __future__ import annotations

from dataclasses import dataclass

from .audit import AuditReport, full_audit
from .model import ProblemInstance, RateAllocation, RateTuple
from .region import (
    GENERAL,
    FeasibilityResult,
    InfeasibleError,
    IntegerParameters,
    RegionQuery,
    check_membership,
    minimize_key_rate,
    scale_to_integers,
)
from .synth import LinearCode, reduce_key, synthesize


@dataclass
class SynthesisResult:
    membership: FeasibilityResult
    witness: RateAllocation
    reduced: RateTuple
    params: IntegerParameters
    code: LinearCode
    report: AuditReport | None


def plan(instance: ProblemInstance, tuple_: RateTuple) -> tuple[FeasibilityResult, RateAllocation, RateTuple, IntegerParameters]:
    """Decide membership and fix the integer parameters of the code.

    The allocation used is the one minimising the key rate, so the surplus
    key is discarded and the resulting code also lets the receiver decode K.
    """
    try:
        key, witness = minimize_key_rate(instance, tuple_.R_M, tuple_.equivocations)
    except InfeasibleError:
        key = None
    if key is None or tuple_.R_K < key:
        # general-region membership fails; get the certificate from the full check
        res = check_membership(RegionQuery(instance, tuple_, GENERAL))
        assert not res.feasible
        raise InfeasibleError(res.certificate)
    res = FeasibilityResult(True, GENERAL, witness=witness)
    reduced = reduce_key(tuple_, witness)
    params = scale_to_integers(reduced, witness, instance)
    return res, witness, reduced, params


def build_code(
    instance: ProblemInstance,
    tuple_: RateTuple,
    audit: bool = True,
    cap: int | None = None,
    seed: int = 0,
) -> SynthesisResult:
    res, witness, reduced, params = plan(instance, tuple_)
    code = synthesize(instance, params)
    report = full_audit(code, instance, params, cap=cap, seed=seed) if audit else None
    return SynthesisResult(res, witness, reduced, params, code, report)
