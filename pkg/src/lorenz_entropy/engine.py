"""Bisection engine returning a certified log-entropy interval.

The slope interval [1, 2] is halved once per pass: the kneading comparisons
against the uniform family at the midpoint slope decide which half keeps the
entropy.  Comparisons are certified by escalating precision; anything still
inconclusive takes the branch that preserves the upper bracket, so
truncation error only ever biases the estimate upward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import orbit
from .kneading import CriticalItineraries, bisection_probe, critical_itineraries
from .maps import AdmissiblePair, InvalidMapError, LorenzMapSpec, MapLike, validate_lorenz


@dataclass(frozen=True)
class IterationRecord:
    """One interval-halving pass of the bisection."""

    index: int
    a: float
    branch_taken: str  # STEP7 | STEP10A | STEP10B | STEP11 | STEP12
    raised_lower: bool  # True when a1 <- a
    undetermined_comparisons: int
    precision_bits: int
    decision_index: int | None = None
    precision_exhausted: bool = False

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "a": self.a,
            "branch_taken": self.branch_taken,
            "raised_lower": self.raised_lower,
            "undetermined_comparisons": self.undetermined_comparisons,
            "precision_bits": self.precision_bits,
            "decision_index": self.decision_index,
            "precision_exhausted": self.precision_exhausted,
        }


@dataclass(frozen=True)
class EntropyResult:
    """Certified interval [log_lo, log_hi] for the topological entropy."""

    log_lo: float
    log_hi: float
    midpoint_a: float
    iterations: int
    epsilon: float
    truncation_n: int
    undetermined_total: int
    a_lo: float
    a_hi: float
    trace: tuple = field(default_factory=tuple)

    @property
    def midpoint_log(self) -> float:
        return math.log(self.midpoint_a)

    def as_dict(self, map_description=None) -> dict:
        return {
            "map": map_description,
            "epsilon": self.epsilon,
            "n": self.truncation_n,
            "log_lo": self.log_lo,
            "log_hi": self.log_hi,
            "midpoint_log": self.midpoint_log,
            "iterations": self.iterations,
            "undetermined_total": self.undetermined_total,
            "trace": [r.as_dict() for r in self.trace],
        }


def expected_iterations(epsilon: float) -> int:
    """Number of bisection passes, including the terminal evaluation pass."""
    return math.ceil(math.log2(2.0 / epsilon))


def estimate_entropy(
    map_like: MapLike,
    epsilon: float,
    n: int = 1000,
    base_prec: int = orbit.BASE_PREC,
    max_prec: int = orbit.MAX_PREC,
    validate: bool = True,
) -> EntropyResult:
    """Bisection estimate of h(T) for a Lorenz map, to tolerance epsilon.

    Each pass compares the critical itineraries (truncated at n symbols) with
    those of the midpoint-slope uniform family and halves the slope bracket
    accordingly; the loop stops once the bracket is narrower than epsilon and
    returns the log interval around its midpoint.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if n < 3:
        raise ValueError(f"truncation term n must be at least 3, got {n}")
    if validate and isinstance(map_like, LorenzMapSpec):
        report = validate_lorenz(map_like, grid_size=512)
        if not report.structural_ok:
            raise InvalidMapError(
                "map fails structural Lorenz conditions:\n" + report.summary()
            )
    crit = critical_itineraries(map_like, n)
    return _run_bisection(crit, epsilon, n, base_prec, max_prec)


def estimate_entropy_from_critical(
    crit: CriticalItineraries,
    epsilon: float,
    n: int | None = None,
    base_prec: int = orbit.BASE_PREC,
    max_prec: int = orbit.MAX_PREC,
) -> EntropyResult:
    """Run the bisection from precomputed critical itineraries."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    n = crit.n if n is None else n
    if n < 3 or n > crit.n:
        raise ValueError(f"need 3 <= n <= {crit.n}, got {n}")
    return _run_bisection(crit, epsilon, n, base_prec, max_prec)


_BRANCH_LABEL = {
    "step7": "STEP7",
    "step10a": "STEP10A",
    "step10b": "STEP10B",
    "step11": "STEP11",
    "step12": "STEP12",
}


def _run_bisection(crit, epsilon, n, base_prec, max_prec) -> EntropyResult:
    a1, a2 = 1.0, 2.0
    records = []
    undetermined_total = 0
    while True:
        a = (a1 + a2) / 2.0
        if a2 - a1 < epsilon:
            break
        probe = bisection_probe(crit, a, n, base_prec, max_prec)
        undetermined_total += probe.undetermined
        if probe.lower_a2:
            a2 = a
        else:
            a1 = a
        records.append(
            IterationRecord(
                index=len(records) + 1,
                a=a,
                branch_taken=_BRANCH_LABEL[probe.path],
                raised_lower=not probe.lower_a2,
                undetermined_comparisons=probe.undetermined,
                precision_bits=probe.precision_bits,
                decision_index=probe.decision_index,
                precision_exhausted=probe.exhausted,
            )
        )
    mid = (a1 + a2) / 2.0
    return EntropyResult(
        log_lo=math.log(mid - epsilon / 2.0),
        log_hi=math.log(mid + epsilon / 2.0),
        midpoint_a=mid,
        iterations=len(records) + 1,
        epsilon=epsilon,
        truncation_n=n,
        undetermined_total=undetermined_total,
        a_lo=a1,
        a_hi=a2,
        trace=tuple(records),
    )


def entropy_bracket_invariant_check(result: EntropyResult, oracle_value: float) -> bool:
    """Replay the trace and verify ln(a1) <= h <= ln(a2) after every pass.

    oracle_value is a trusted value of h(T) (Markov spectral radius, Parry).
    """
    a1, a2 = 1.0, 2.0
    for rec in result.trace:
        expected_a = (a1 + a2) / 2.0
        if rec.a != expected_a:
            return False
        if rec.raised_lower:
            a1 = rec.a
        else:
            a2 = rec.a
        if not (math.log(a1) <= oracle_value <= math.log(a2)):
            return False
    return (a1, a2) == (result.a_lo, result.a_hi)
