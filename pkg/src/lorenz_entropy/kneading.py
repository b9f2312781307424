"""Critical itineraries and the lexicographic machinery built on them.

The two critical itineraries determine the whole address space of a Lorenz
map; everything here either extracts them, tests words against them, or
compares them with the critical words of uniform maps.  The comparison
probes are shared with the bisection engine and escalate their working
precision until a verdict is certified or a cap is reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import orbit
from .maps import (
    AdmissiblePair,
    InvalidMapError,
    MapLike,
    Orientation,
    boundary_flags,
    compute_orbit,
)
from .words import SymbolWord, WordOrder

ENUMERATION_GUARD = 26  # max word length for exhaustive 2^n enumeration


class Membership(Enum):
    ADMITTED = "admitted"
    REJECTED = "rejected"
    UNDETERMINED = "undetermined"


class EmbedStatus(Enum):
    EMBEDS_ALL_P = "embeds_all_p"
    EMBEDS_UNIQUE_P = "embeds_unique_p"
    NO = "no"
    UNDETERMINED = "undetermined"


@dataclass
class CriticalItineraries:
    """Truncated critical itineraries alpha (lower) and beta (upper).

    The boundary flags record the exact degeneracies f0(q) = 1 and f1(q) = 0,
    which are decided from the map data directly, never from comparing the
    truncated words against 01... or 10... patterns.
    """

    alpha: SymbolWord
    beta: SymbolWord
    n: int
    alpha_is_0_1bar: bool
    beta_is_1_0bar: bool
    source: Optional[MapLike] = None
    _orbit_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.alpha_is_0_1bar and self.beta_is_1_0bar:
            raise InvalidMapError(
                "f0(q) = 1 and f1(q) = 0 simultaneously: not a Lorenz map"
            )
        if len(self.alpha) and self.alpha[0] != 0:
            raise ValueError("alpha must start with 0")
        if len(self.beta) and self.beta[0] != 1:
            raise ValueError("beta must start with 1")

    def orbits(self, n: int, F: int) -> tuple[orbit.InputOrbit, orbit.InputOrbit]:
        """(alpha, beta) orbit data at truncation n and precision F."""
        key = (n, F)
        if key not in self._orbit_cache:
            if self.source is not None:
                alpha = compute_orbit(self.source, Orientation.LOWER, None, n, F)
                beta = compute_orbit(self.source, Orientation.UPPER, None, n, F)
            else:
                # words supplied without a map: tail coordinate unknown in [0,1]
                half = 1 << (F - 1)
                alpha = orbit.InputOrbit(self.alpha.symbols[:n], n, half, half + 1, F, False)
                beta = orbit.InputOrbit(self.beta.symbols[:n], n, half, half + 1, F, False)
            self._orbit_cache[key] = (alpha, beta)
        return self._orbit_cache[key]


def critical_itineraries(map_like: MapLike, n: int) -> CriticalItineraries:
    """Both critical itineraries of the shared branch data, truncated at n."""
    if n < 1:
        raise ValueError("truncation length must be positive")
    flag0, flag1 = boundary_flags(map_like)
    if flag0 and flag1:
        raise InvalidMapError("f0(q) = 1 and f1(q) = 0 simultaneously: not a Lorenz map")
    F = orbit.BASE_PREC
    alpha = compute_orbit(map_like, Orientation.LOWER, None, n, F)
    beta = compute_orbit(map_like, Orientation.UPPER, None, n, F)
    crit = CriticalItineraries(
        SymbolWord(alpha.symbols),
        SymbolWord(beta.symbols),
        n,
        flag0,
        flag1,
        source=map_like,
    )
    crit._orbit_cache[(n, F)] = (alpha, beta)
    return crit


# ---------------------------------------------------------------------------
# Hubbard-Sparrow membership and word counting


def _prefix_ints(word: SymbolWord, n: int) -> list:
    pref = [0] * (n + 1)
    v = 0
    for m in range(1, n + 1):
        v = (v << 1) | word[m - 1]
        pref[m] = v
    return pref


def hs_member(
    word: SymbolWord,
    crit: CriticalItineraries,
    orientation: Orientation = Orientation.UPPER,
) -> Membership:
    """Test a finite word against the address-space characterization.

    Every shift of the word must sit strictly below alpha or at-or-above
    beta (weak/strict placement swaps for the lower space, but at finite
    truncation the decidable outcomes coincide for both orientations: ties
    surface as UNDETERMINED either way).  REJECTED needs a shift that
    decidably violates both disjuncts; ADMITTED needs every shift decidably
    satisfied; anything else is UNDETERMINED.
    """
    n = len(word)
    if n == 0:
        return Membership.UNDETERMINED
    if n > crit.n:
        raise ValueError(f"word length {n} exceeds critical truncation {crit.n}")
    a_pref = _prefix_ints(crit.alpha, n)
    b_pref = _prefix_ints(crit.beta, n)
    w = word.prefix_int(n)
    all_decided = True
    for k in range(n):
        m = n - k
        suf = w & ((1 << m) - 1)
        am, bm = a_pref[m], b_pref[m]
        if am < suf < bm:
            return Membership.REJECTED
        if not (suf < am or suf > bm):
            all_decided = False
    return Membership.ADMITTED if all_decided else Membership.UNDETERMINED


def count_words(crit: CriticalItineraries, n: int) -> int:
    """Number of length-n words not REJECTED (ties count as admitted).

    Exhaustive enumeration over all 2^n words, vectorized; guarded so the
    oracle stays desk-scale.
    """
    if n < 1:
        raise ValueError("word length must be positive")
    if n > ENUMERATION_GUARD:
        raise ValueError(f"enumeration guard: n must be <= {ENUMERATION_GUARD}")
    if n > crit.n:
        raise ValueError(f"word length {n} exceeds critical truncation {crit.n}")
    a_pref = _prefix_ints(crit.alpha, n)
    b_pref = _prefix_ints(crit.beta, n)
    checks = [
        (n - k, a_pref[n - k], b_pref[n - k])
        for k in range(n)
        if b_pref[n - k] - a_pref[n - k] > 1
    ]
    total = 1 << n
    count = 0
    chunk = 1 << 22
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        words = np.arange(start, stop, dtype=np.int64)
        rejected = np.zeros(stop - start, dtype=bool)
        for m, am, bm in checks:
            suf = words & ((1 << m) - 1)
            rejected |= (suf > am) & (suf < bm)
        count += int((stop - start) - rejected.sum())
    return count


def entropy_estimate_wordcount(crit: CriticalItineraries, n: int) -> float:
    """(1/n) ln of the admitted-word count: the definition-level estimator."""
    return math.log(count_words(crit, n)) / n


# ---------------------------------------------------------------------------
# kneading comparisons against uniform critical words


_CODE_TO_ORDER = {
    orbit.CMP_LESS: WordOrder.LESS,
    orbit.CMP_GREATER: WordOrder.GREATER,
    orbit.CMP_EQUAL_PREFIX: WordOrder.EQUAL_PREFIX,
}

_INVERT = {
    WordOrder.LESS: WordOrder.GREATER,
    WordOrder.GREATER: WordOrder.LESS,
    WordOrder.EQUAL_PREFIX: WordOrder.EQUAL_PREFIX,
}


@dataclass(frozen=True)
class KneadingComparison:
    """Three-way outcomes of alpha vs mu-_{a,p}(p) and mu+_{a,p}(p) vs beta."""

    alpha_vs_mu_minus: WordOrder
    mu_plus_vs_beta: WordOrder


def kneading_compare(
    crit: CriticalItineraries,
    pair: AdmissiblePair,
    n: int,
    base_prec: int = orbit.BASE_PREC,
    max_prec: int = orbit.MAX_PREC,
) -> KneadingComparison:
    """Compare the critical words of U_{a,p} with alpha and beta at length n.

    Precision escalates until both comparisons certify; if the cap is hit the
    unresolved side reports EQUAL_PREFIX (inconclusive).
    """
    if n < 3:
        raise ValueError("comparison length must be at least 3")
    if n > crit.n:
        raise ValueError(f"comparison length {n} exceeds critical truncation {crit.n}")
    for F in orbit.precision_levels(base_prec, max_prec):
        alpha_orb, beta_orb = crit.orbits(n, F)
        p_fx = orbit.float_to_fx(pair.p, F)
        c_minus, _ = orbit.trial_compare(pair.a, p_fx, 0, False, alpha_orb, n, F)
        c_plus, _ = orbit.trial_compare(pair.a, p_fx, 0, True, beta_orb, n, F)
        if c_minus is not None and c_plus is not None:
            return KneadingComparison(_INVERT[_CODE_TO_ORDER[c_minus]], _CODE_TO_ORDER[c_plus])
    return KneadingComparison(
        WordOrder.EQUAL_PREFIX if c_minus is None else _INVERT[_CODE_TO_ORDER[c_minus]],
        WordOrder.EQUAL_PREFIX if c_plus is None else _CODE_TO_ORDER[c_plus],
    )


# ---------------------------------------------------------------------------
# the per-slope probe driving both the bisection and the embedding check


@dataclass
class ProbeResult:
    """One certified evaluation of the algorithm's branch logic at slope a."""

    a: float
    path: str  # step7 | step10a | step10b | step11 | step12
    lower_a2: bool
    undetermined: int
    exhausted: bool
    precision_bits: int
    decision_index: Optional[int] = None
    boundary_cmp: Optional[WordOrder] = None
    alpha_vs_mu_minus: Optional[WordOrder] = None
    mu_plus_vs_beta: Optional[WordOrder] = None
    t1: Optional[float] = None
    t2: Optional[float] = None
    p: Optional[float] = None
    alpha_clipped: bool = False
    beta_clipped: bool = False


def bisection_probe(
    crit: CriticalItineraries,
    a: float,
    n: int,
    base_prec: int = orbit.BASE_PREC,
    max_prec: int = orbit.MAX_PREC,
) -> ProbeResult:
    """Steps (4)-(12) of the bisection at trial slope a, certified.

    Comparisons that stay inconclusive after the precision cap take the
    conservative branch (raise the lower bound) and are flagged.
    """
    for F in orbit.precision_levels(base_prec, max_prec):
        res = _probe_at(crit, a, n, F)
        if res is not None:
            return res
    if crit.alpha_is_0_1bar and not crit.beta_is_1_0bar:
        path = "step11"
    elif crit.beta_is_1_0bar:
        path = "step12"
    else:
        path = "step10b"
    return ProbeResult(a, path, False, 1, True, max_prec)


def _probe_at(crit: CriticalItineraries, a: float, n: int, F: int) -> Optional[ProbeResult]:
    one = 1 << F
    num, s = a.as_integer_ratio()[0], a.as_integer_ratio()[1].bit_length() - 1
    inv = (one << s) // num  # 1/a, error <= 1 ulp
    aflag, bflag = crit.alpha_is_0_1bar, crit.beta_is_1_0bar

    if aflag and not bflag:
        _, beta_orb = crit.orbits(n, F)
        code, idx = orbit.trial_compare(a, inv, 1, True, beta_orb, n, F)
        if code is None:
            return None
        order = _CODE_TO_ORDER[code]
        return ProbeResult(
            a,
            "step11",
            order is WordOrder.LESS,
            int(order is WordOrder.EQUAL_PREFIX),
            False,
            F,
            decision_index=idx,
            boundary_cmp=order,
            p=1.0 / a,
        )
    if bflag:
        alpha_orb, _ = crit.orbits(n, F)
        code, idx = orbit.trial_compare(a, one - inv, 1, False, alpha_orb, n, F)
        if code is None:
            return None
        # code compares mu- against alpha; the step needs alpha < mu-
        order = _INVERT[_CODE_TO_ORDER[code]]
        return ProbeResult(
            a,
            "step12",
            order is WordOrder.LESS,
            int(order is WordOrder.EQUAL_PREFIX),
            False,
            F,
            decision_index=idx,
            boundary_cmp=order,
            p=1.0 - 1.0 / a,
        )

    alpha_orb, beta_orb = crit.orbits(n, F)
    pa, pa_err = orbit.pi_tilde(a, alpha_orb, n, F)
    pb, pb_err = orbit.pi_tilde(a, beta_orb, n, F)
    lo, hi = one - inv, inv
    alpha_clipped = pa < lo
    beta_clipped = pb > hi
    t1, t1_err = (lo, 1) if alpha_clipped else (pa, pa_err)
    t2, t2_err = (hi, 1) if beta_clipped else (pb, pb_err)
    if abs(t1 - t2) <= t1_err + t2_err:
        return None  # sign of the t-gap not certified at this precision
    if t1 >= t2:
        return ProbeResult(
            a, "step7", False, 0, False, F,
            t1=t1 / one, t2=t2 / one,
            alpha_clipped=alpha_clipped, beta_clipped=beta_clipped,
        )
    p_fx = (t1 + t2) >> 1
    p_err = (t1_err + t2_err) // 2 + 1
    c_minus, i1 = orbit.trial_compare(a, p_fx, p_err, False, alpha_orb, n, F)
    c_plus, i2 = orbit.trial_compare(a, p_fx, p_err, True, beta_orb, n, F)
    if c_minus is None or c_plus is None:
        return None
    alpha_vs = _INVERT[_CODE_TO_ORDER[c_minus]]
    plus_vs = _CODE_TO_ORDER[c_plus]
    both_less = alpha_vs is WordOrder.LESS and plus_vs is WordOrder.LESS
    undet = int(alpha_vs is WordOrder.EQUAL_PREFIX) + int(plus_vs is WordOrder.EQUAL_PREFIX)
    idxs = [i for i in (i1, i2) if i is not None]
    return ProbeResult(
        a,
        "step10a" if both_less else "step10b",
        both_less,
        undet,
        False,
        F,
        decision_index=max(idxs) if idxs else None,
        alpha_vs_mu_minus=alpha_vs,
        mu_plus_vs_beta=plus_vs,
        t1=t1 / one,
        t2=t2 / one,
        p=p_fx / one,
        alpha_clipped=alpha_clipped,
        beta_clipped=beta_clipped,
    )


# ---------------------------------------------------------------------------
# embedding check


@dataclass(frozen=True)
class EmbeddingReport:
    """Verdict of the embedding conditions at a fixed slope a."""

    a: float
    status: EmbedStatus
    interval: Optional[tuple] = None  # (t1, t2) on the main path
    unique_p: Optional[float] = None
    alpha_clipped: bool = False
    beta_clipped: bool = False


def check_embedding(
    crit: CriticalItineraries,
    a: float,
    n: int,
    base_prec: int = orbit.BASE_PREC,
    max_prec: int = orbit.MAX_PREC,
) -> EmbeddingReport:
    """Decide whether the address spaces embed into the slope-a uniform family.

    Boundary-degenerate maps have a unique admissible p (1/a or 1 - 1/a) and
    are tested there; otherwise the t-interval is formed and its midpoint is
    tested, which by the embedding theorems witnesses all p in the interval.
    """
    if not 1.0 < a < 2.0:
        raise ValueError(f"a must lie in (1, 2), got {a}")
    probe = bisection_probe(crit, a, n, base_prec, max_prec)
    if probe.path == "step11":
        if probe.exhausted or probe.boundary_cmp is WordOrder.EQUAL_PREFIX:
            return EmbeddingReport(a, EmbedStatus.UNDETERMINED, unique_p=1.0 / a)
        status = (
            EmbedStatus.EMBEDS_UNIQUE_P
            if probe.boundary_cmp is WordOrder.LESS
            else EmbedStatus.NO
        )
        return EmbeddingReport(a, status, unique_p=1.0 / a)
    if probe.path == "step12":
        if probe.exhausted or probe.boundary_cmp is WordOrder.EQUAL_PREFIX:
            return EmbeddingReport(a, EmbedStatus.UNDETERMINED, unique_p=1.0 - 1.0 / a)
        status = (
            EmbedStatus.EMBEDS_UNIQUE_P
            if probe.boundary_cmp is WordOrder.LESS
            else EmbedStatus.NO
        )
        return EmbeddingReport(a, status, unique_p=1.0 - 1.0 / a)
    if probe.exhausted:
        return EmbeddingReport(a, EmbedStatus.UNDETERMINED)
    interval = (probe.t1, probe.t2)
    if probe.path == "step7":
        return EmbeddingReport(
            a, EmbedStatus.NO, interval,
            alpha_clipped=probe.alpha_clipped, beta_clipped=probe.beta_clipped,
        )
    if probe.path == "step10a":
        status = EmbedStatus.EMBEDS_ALL_P
    elif (
        probe.alpha_vs_mu_minus is WordOrder.GREATER
        or probe.mu_plus_vs_beta is WordOrder.GREATER
    ):
        status = EmbedStatus.NO
    else:
        status = EmbedStatus.UNDETERMINED
    return EmbeddingReport(
        a, status, interval,
        alpha_clipped=probe.alpha_clipped, beta_clipped=probe.beta_clipped,
    )
