"""Certified orbit and coding-sum arithmetic used by the entropy engine.

Itinerary symbols decide everything downstream, so this module computes them
with controlled error instead of bare doubles:

* exact rationals while the orbit stays rational (decimal map constants keep
  genuinely periodic critical orbits exactly periodic, and a detected cycle
  yields symbols to any length for free);
* fixed-point integers (values scaled by 2^F) for affine/uniform dynamics,
  with per-step error bounds in integer ulps;
* mpmath for transcendental branches, with error growth estimated from local
  difference-quotient slopes.

A symbol is "trusted" while the tracked error is safely below the distance
to the critical point; comparisons and coding sums report when they would
need more precision, and the engine escalates F until they resolve or a cap
is hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import mpmath

from .expressions import EvalDomainError, ExactnessError, MapExpression

# Boundary clamp: an iterate may leave [0,1] by at most this much (rounding
# or a boundary-case map); larger excursions are errors.
CLAMP_TOL = Fraction(1, 10**12)

BASE_PREC = 192
MAX_PREC = 1 << 14

# comparison outcomes for trial_compare (trial word vs input word)
CMP_LESS = -1
CMP_EQUAL_PREFIX = 0
CMP_GREATER = 1
CMP_NEED_PRECISION = None


class OrbitEscapeError(EvalDomainError):
    """An iterate left [0,1] by more than the clamp tolerance."""


@dataclass
class InputOrbit:
    """Symbols of a critical (or general) orbit plus the data the sums need."""

    symbols: bytes          # n best-effort symbols
    trusted: int            # symbols[:trusted] are certified
    xn_fx: int              # final orbit coordinate, scaled by 2^F
    xn_err: int             # error bound on xn_fx in ulps (capped at 2^F)
    F: int                  # fixed-point fraction bits
    exact: bool             # True when the whole orbit was followed exactly


def _dyadic(a: float) -> tuple[int, int]:
    """a as num / 2^shift, exactly."""
    num, den = a.as_integer_ratio()
    return num, den.bit_length() - 1


def float_to_fx(x: float, F: int) -> int:
    num, den = x.as_integer_ratio()
    return (num << F) // den  # exact for any double once F >= 52 + |exponent|


def fraction_to_fx(x: Fraction, F: int) -> int:
    return (x.numerator << F) // x.denominator  # floor; error < 1 ulp


def mpf_to_fx(x, F: int) -> int:
    return int(mpmath.floor(mpmath.ldexp(x, F)))


# ---------------------------------------------------------------------------
# uniform (affine) orbits in fixed point


def uniform_orbit_fx(
    a: float,
    p_fx: int,
    p_err: int,
    x0_fx: int,
    x0_err: int,
    upper: bool,
    n: int,
    F: int,
    x0_is_crit: bool = False,
) -> InputOrbit:
    """Orbit of the slope-a uniform map, symbols tested against p_fx.

    When x0 is the critical point itself the first symbol is forced by the
    orientation, not by an (ill-posed) comparison of a value with itself.
    """
    num, s = _dyadic(a)
    one = 1 << F
    a_fx = num << (F - s)
    clamp_fx = (one // 10**12) + 1
    x, err = x0_fx, x0_err
    syms = bytearray()
    trusted = n
    for k in range(n):
        if k == 0 and x0_is_crit:
            sym = 1 if upper else 0
        else:
            margin = x - p_fx
            if trusted == n and abs(margin) <= err + p_err:
                trusted = k
            if upper:
                sym = 0 if x < p_fx else 1
            else:
                sym = 0 if x <= p_fx else 1
        syms.append(sym)
        x = (x * num) >> s
        err = ((err * num) >> s) + 2
        if sym == 1:
            x += one - a_fx
        if x > one:
            if x <= one + clamp_fx + err:
                x = one
            else:
                raise OrbitEscapeError(f"orbit left [0,1] at step {k + 1}")
        elif x < 0:
            if x >= -(clamp_fx + err):
                x = 0
            else:
                raise OrbitEscapeError(f"orbit left [0,1] at step {k + 1}")
    return InputOrbit(bytes(syms), trusted, x, min(err, 1 << F), F, exact=False)


# ---------------------------------------------------------------------------
# expression-map orbits: exact rationals first, mpmath afterwards


def _clamp_fraction(x: Fraction, step: int) -> Fraction:
    if x > 1:
        if x <= 1 + CLAMP_TOL:
            return Fraction(1)
        raise OrbitEscapeError(f"orbit left [0,1] at step {step}")
    if x < 0:
        if x >= -CLAMP_TOL:
            return Fraction(0)
        raise OrbitEscapeError(f"orbit left [0,1] at step {step}")
    return x


def _clamp_mpf(x, err_log2: float, step: int):
    if x > 1:
        if x <= 1 + mpmath.mpf(10) ** -12 + mpmath.ldexp(1, int(err_log2) + 2):
            return mpmath.mpf(1)
        raise OrbitEscapeError(f"orbit left [0,1] at step {step}")
    if x < 0:
        if x >= -(mpmath.mpf(10) ** -12 + mpmath.ldexp(1, int(err_log2) + 2)):
            return mpmath.mpf(0)
        raise OrbitEscapeError(f"orbit left [0,1] at step {step}")
    return x


def _log2add(a: float, b: float) -> float:
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log2(1.0 + 2.0 ** (lo - hi)) if hi - lo < 60 else hi


def _safe_log2(v) -> float:
    """log2 of a positive mpf without overflowing the float conversion."""
    if v <= 0:
        return -1000.0
    m = int(mpmath.mag(v))
    if abs(m) > 900:
        return float(m)  # ceil(log2 v): an upper bound
    return math.log2(float(v))


def spec_orbit(
    f0: MapExpression,
    f1: MapExpression,
    q: Fraction,
    upper: bool,
    x0: Fraction,
    n: int,
    F: int,
    bitcap: int = 30000,
    x0_is_crit: bool = False,
) -> InputOrbit:
    """Orbit of a two-branch expression map with symbols tested against q.

    Runs exactly over the rationals while it can (detecting cycles, in which
    case all n symbols come from the cycle), then switches to mpmath with
    slope-tracked error bounds.
    """
    syms = bytearray()
    trusted_rational = -1  # sentinel: all rational symbols are exact
    seen: dict[Fraction, int] = {}
    values: list[Fraction] = []
    x = x0
    k = 0
    mp_start: Optional[Fraction] = None
    while k < n:
        if x in seen:
            # exact cycle: continue symbols periodically without iterating
            start = seen[x]
            period = k - start
            while k < n:
                values.append(values[start + (k - start) % period])
                k += 1
            cyc_val = values[start + (n - start) % period] if n > start else values[n]
            return InputOrbit(
                _fill_symbols_rational(values[:n], q, upper, x0_is_crit),
                n,
                fraction_to_fx(cyc_val, F),
                1,
                F,
                exact=True,
            )
        seen[x] = k
        values.append(x)
        branch = f0 if _rational_symbol(x, q, upper, k, x0_is_crit) == 0 else f1
        try:
            nx = branch.eval_rational(x)
        except ExactnessError:
            mp_start = x
            break
        nx = _clamp_fraction(nx, k + 1)
        if nx.numerator.bit_length() + nx.denominator.bit_length() > bitcap:
            mp_start = x
            break
        x = nx
        k += 1
    if mp_start is None:
        # pure rational orbit, no cycle found within n steps
        xn = x
        return InputOrbit(
            _fill_symbols_rational(values[:n], q, upper, x0_is_crit),
            n,
            fraction_to_fx(xn, F),
            1,
            F,
            exact=True,
        )
    # mp continuation from values[k] == mp_start
    syms = bytearray(
        _rational_symbol(v, q, upper, i, x0_is_crit) for i, v in enumerate(values[:k])
    )
    return _spec_orbit_mp(f0, f1, q, upper, mp_start, syms, k, n, F, x0_is_crit)


def _rational_symbol(x: Fraction, q: Fraction, upper: bool, k: int, x0_is_crit: bool) -> int:
    if k == 0 and x0_is_crit:
        return 1 if upper else 0
    if upper:
        return 0 if x < q else 1
    return 0 if x <= q else 1


def _fill_symbols_rational(values, q: Fraction, upper: bool, x0_is_crit: bool) -> bytes:
    return bytes(
        _rational_symbol(v, q, upper, i, x0_is_crit) for i, v in enumerate(values)
    )


def _spec_orbit_mp(f0, f1, q, upper, x_rat, syms, k0, n, F, x0_is_crit):
    P = F + 32
    with mpmath.workprec(P):
        qm = mpmath.mpf(q.numerator) / q.denominator
        x = mpmath.mpf(x_rat.numerator) / x_rat.denominator
        err_log2 = float(-(F + 24))
        h = mpmath.ldexp(1, -(P // 2))
        trusted = n
        for k in range(k0, n):
            margin = x - qm
            if trusted == n and not (k == 0 and x0_is_crit):
                mmag = mpmath.mag(margin) if margin != 0 else -10**9
                if mmag - 4 <= err_log2:
                    trusted = k
            if k == 0 and x0_is_crit:
                sym = 1 if upper else 0
            elif upper:
                sym = 0 if x < qm else 1
            else:
                sym = 0 if x <= qm else 1
            syms.append(sym)
            branch = f0 if sym == 0 else f1
            x2 = branch.eval_mp(x)
            step = h if x + h <= 1 else -h
            slope = abs((branch.eval_mp(x + step) - x2) / step)
            # per-step slack covers the difference-quotient slope estimate
            err_log2 = _log2add(err_log2 + _safe_log2(slope) + 0.002, float(-P + 4))
            x = _clamp_mpf(x2, err_log2, k + 1)
        xn_fx = mpf_to_fx(x, F)
        xn_err = 1 << F
        if err_log2 + F < 62:
            xn_err = min(1 << F, (1 << max(0, int(err_log2) + F + 2)) + 2)
    return InputOrbit(bytes(syms), trusted, xn_fx, xn_err, F, exact=False)


# ---------------------------------------------------------------------------
# coding sums with the orbit-coordinate tail correction


def fx_inv_pow(a: float, k: int, F: int) -> tuple[int, int]:
    """a^-k in fixed point with an ulp error bound."""
    num, s = _dyadic(a)
    one = 1 << F
    inv = (one << s) // num
    result, err = one, 0
    base, base_err = inv, 1
    e = k
    while e:
        if e & 1:
            result = (result * base) >> F
            err = err + base_err + 2
        e >>= 1
        if e:
            base = (base * base) >> F
            base_err = 2 * base_err + 2
    return result, err


def pi_tilde(a: float, orbit: InputOrbit, n: int, F: int) -> tuple[int, int]:
    """Tail-corrected coding value (1-1/a)*Horner(word|n) + a^-n * x_n.

    Returns (value, error) in fixed point; the error accounts for rounding,
    the uncertainty of x_n, and a full window for any untrusted symbols.
    """
    num, s = _dyadic(a)
    one = 1 << F
    word = orbit.symbols
    S = 0
    for sym in reversed(word[:n]):
        S = (sym << F) + ((S << s) // num)
    err_S = n + 2
    inv = (one << s) // num
    lead = one - inv
    val = (lead * S) >> F
    err = err_S + (S >> F) + 3
    apow, apow_err = fx_inv_pow(a, n, F)
    xn_err = orbit.xn_err
    tail = (apow * orbit.xn_fx) >> F
    err += apow_err + ((apow * xn_err) >> F) + 2
    val += tail
    if orbit.trusted < n:
        wtr, wtr_err = fx_inv_pow(a, orbit.trusted, F)
        err += 2 * wtr + wtr_err + 2
    return val, err


# ---------------------------------------------------------------------------
# lazy trial-word comparison


def trial_compare(
    a: float,
    p_fx: int,
    p_err: int,
    upper: bool,
    input_orbit: InputOrbit,
    n: int,
    F: int,
) -> tuple[Optional[int], Optional[int]]:
    """Compare the critical itinerary of U_{a,p} (started at p) with an input word.

    Returns (outcome, index): outcome is CMP_LESS / CMP_GREATER for
    trial-word < / > input-word decided at `index`, CMP_EQUAL_PREFIX when the
    words agree on all n symbols, or CMP_NEED_PRECISION when either side's
    symbols stop being certified before a difference is found.
    """
    num, s = _dyadic(a)
    one = 1 << F
    a_fx = num << (F - s)
    clamp_fx = (one // 10**12) + 1
    word = input_orbit.symbols
    x, err = p_fx, 0
    for k in range(n):
        if k == 0:
            sym = 1 if upper else 0
        else:
            if abs(x - p_fx) <= err + p_err:
                return CMP_NEED_PRECISION, k
            if upper:
                sym = 0 if x < p_fx else 1
            else:
                sym = 0 if x <= p_fx else 1
        if k >= input_orbit.trusted:
            return CMP_NEED_PRECISION, k
        ref = word[k]
        if sym != ref:
            return (CMP_LESS if sym < ref else CMP_GREATER), k
        x = (x * num) >> s
        err = ((err * num) >> s) + 2
        if sym == 1:
            x += one - a_fx
        if x > one:
            if x <= one + clamp_fx + err:
                x = one
            else:
                raise OrbitEscapeError(f"trial orbit left [0,1] at step {k + 1}")
        elif x < 0:
            if x >= -(clamp_fx + err):
                x = 0
            else:
                raise OrbitEscapeError(f"trial orbit left [0,1] at step {k + 1}")
    return CMP_EQUAL_PREFIX, None


def precision_levels(base: int = BASE_PREC, cap: int = MAX_PREC):
    F = base
    while F <= cap:
        yield F
        F *= 2
