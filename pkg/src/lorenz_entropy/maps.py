"""Lorenz interval maps: representation, validation, evaluation, itineraries.

A map is either a two-branch expression map (LorenzMapSpec) or a uniform
slope-a map given by an admissible pair (a, p).  The upper/lower orientation
decides which branch owns the critical point; entropy estimation always uses
both orientations of the same branch data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from . import orbit
from .expressions import EvalDomainError, MapExpression, parse_expression
from .words import SymbolWord

BOUNDARY_TOL = 1e-12


class Orientation(Enum):
    UPPER = "upper"
    LOWER = "lower"


class InvalidMapError(ValueError):
    """The supplied map violates a structural Lorenz-map condition."""


@dataclass(frozen=True)
class AdmissiblePair:
    """Slope/critical-point pair (a, p) of a uniform map, 1-1/a <= p <= 1/a.

    Boundary values of p are allowed within a 1e-12 tolerance so that float
    representatives of p = 1/a or p = 1 - 1/a are accepted.
    """

    a: float
    p: float

    def __post_init__(self) -> None:
        if not 1.0 < self.a < 2.0:
            raise ValueError(f"slope a must lie in (1, 2), got {self.a}")
        lo, hi = 1.0 - 1.0 / self.a, 1.0 / self.a
        if not lo - BOUNDARY_TOL <= self.p <= hi + BOUNDARY_TOL:
            raise ValueError(
                f"(a={self.a}, p={self.p}) is not admissible: "
                f"p must lie in [{lo}, {hi}]"
            )


@dataclass(frozen=True)
class LorenzMapSpec:
    """Two-branch expression map with critical point q.

    q is kept as an exact rational so that decimal inputs (say q = 0.64) mean
    the decimal number, letting exactly periodic critical orbits be followed
    exactly.  Pass a string, Fraction, or int for exact decimal semantics; a
    float is lifted bit-exactly.
    """

    f0: MapExpression
    f1: MapExpression
    q_exact: Fraction
    orientation: Orientation = Orientation.UPPER
    expansivity_witness: Optional[float] = None

    @property
    def q(self) -> float:
        return float(self.q_exact)

    @classmethod
    def from_strings(
        cls,
        f0: str,
        f1: str,
        q: Union[str, float, Fraction, int],
        orientation: Union[str, Orientation] = Orientation.UPPER,
        expansivity_witness: Optional[float] = None,
    ) -> "LorenzMapSpec":
        if isinstance(orientation, str):
            orientation = Orientation(orientation.lower())
        qx = q if isinstance(q, Fraction) else Fraction(str(q) if not isinstance(q, float) else q)
        if not 0 < qx < 1:
            raise ValueError(f"critical point q must lie in (0, 1), got {q}")
        return cls(parse_expression(f0), parse_expression(f1), qx, orientation, expansivity_witness)

    def with_orientation(self, orientation: Orientation) -> "LorenzMapSpec":
        return replace(self, orientation=orientation)

    def describe(self) -> dict:
        return {
            "f0": self.f0.source,
            "f1": self.f1.source,
            "q": self.q,
            "orientation": self.orientation.value,
        }


MapLike = Union[LorenzMapSpec, AdmissiblePair]


def load_map_spec(source: Union[str, dict]) -> MapLike:
    """Load a map from a JSON file path or an already-parsed dict.

    Schema: {"f0": str, "f1": str, "q": number, "orientation": "upper"|"lower"}
    or {"uniform": {"a": number, "p": number}}.  Decimal numbers in the file
    are taken exactly.
    """
    if isinstance(source, str):
        with open(source) as f:
            data = json.load(f, parse_float=Fraction)
    else:
        data = source
    if "uniform" in data:
        u = data["uniform"]
        return AdmissiblePair(float(u["a"]), float(u["p"]))
    try:
        return LorenzMapSpec.from_strings(
            data["f0"],
            data["f1"],
            data["q"] if isinstance(data["q"], Fraction) else Fraction(str(data["q"])),
            data.get("orientation", "upper"),
        )
    except KeyError as e:
        raise ValueError(f"map spec is missing field {e}") from None


# ---------------------------------------------------------------------------
# evaluation


def eval_uniform(pair: AdmissiblePair, orientation: Orientation, x: float) -> float:
    """One step of U^+/-_{a,p}: ax below p, ax + 1 - a above."""
    a, p = pair.a, pair.p
    on_left = x < p if orientation is Orientation.UPPER else x <= p
    y = a * x if on_left else a * x + 1.0 - a
    return _clamp_unit(y)


def eval_map(spec: LorenzMapSpec, x: float, orientation: Optional[Orientation] = None) -> float:
    """One step of T^+/-; result clamped only within 1e-12 of the boundary."""
    o = orientation or spec.orientation
    on_left = x < spec.q if o is Orientation.UPPER else x <= spec.q
    y = (spec.f0 if on_left else spec.f1).evaluate(x)
    return _clamp_unit(y)


def _clamp_unit(y: float) -> float:
    if y > 1.0:
        if y <= 1.0 + BOUNDARY_TOL:
            return 1.0
        raise EvalDomainError(f"map value {y} left [0,1]")
    if y < 0.0:
        if y >= -BOUNDARY_TOL:
            return 0.0
        raise EvalDomainError(f"map value {y} left [0,1]")
    return y


def critical_values(map_like: MapLike) -> tuple[float, float]:
    """(f0(q), f1(q)) of the shared branch data."""
    if isinstance(map_like, AdmissiblePair):
        return map_like.a * map_like.p, map_like.a * map_like.p + 1.0 - map_like.a
    q = map_like.q
    return map_like.f0.evaluate(q), map_like.f1.evaluate(q)


def boundary_flags(map_like: MapLike) -> tuple[bool, bool]:
    """Exact-as-possible tests f0(q) >= 1 - 1e-12 and f1(q) <= 1e-12."""
    tol = Fraction(1, 10**12)
    if isinstance(map_like, AdmissiblePair):
        a, p = Fraction(map_like.a), Fraction(map_like.p)
        return (a * p >= 1 - tol, a * p + 1 - a <= tol)
    q = map_like.q_exact
    try:
        v0 = map_like.f0.eval_rational(q)
        flag0 = v0 >= 1 - tol
    except ArithmeticError:
        flag0 = map_like.f0.evaluate(float(q)) >= 1.0 - BOUNDARY_TOL
    try:
        v1 = map_like.f1.eval_rational(q)
        flag1 = v1 <= tol
    except ArithmeticError:
        flag1 = map_like.f1.evaluate(float(q)) <= BOUNDARY_TOL
    return flag0, flag1


# ---------------------------------------------------------------------------
# itineraries


def compute_orbit(
    map_like: MapLike,
    orientation: Orientation,
    x0: Union[float, Fraction, None],
    n: int,
    F: int = orbit.BASE_PREC,
) -> orbit.InputOrbit:
    """Certified orbit machinery behind itinerary(); x0=None means the critical point."""
    upper = orientation is Orientation.UPPER
    if isinstance(map_like, AdmissiblePair):
        if isinstance(x0, Fraction):
            # exact-rational path so boundary-exact orbits keep exact symbols
            f0, f1 = _uniform_expressions(map_like.a)
            return orbit.spec_orbit(f0, f1, Fraction(map_like.p), upper, x0, n, F)
        p_fx = orbit.float_to_fx(map_like.p, F)
        if x0 is None:
            return orbit.uniform_orbit_fx(
                map_like.a, p_fx, 0, p_fx, 0, upper, n, F, x0_is_crit=True
            )
        return orbit.uniform_orbit_fx(
            map_like.a, p_fx, 0, orbit.float_to_fx(x0, F), 1, upper, n, F
        )
    crit = x0 is None
    start = map_like.q_exact if crit else (x0 if isinstance(x0, Fraction) else Fraction(x0))
    return orbit.spec_orbit(
        map_like.f0, map_like.f1, map_like.q_exact, upper, start, n, F, x0_is_crit=crit
    )


def _uniform_expressions(a: float) -> tuple[MapExpression, MapExpression]:
    from .expressions import Binary, Const, Var

    fa = Fraction(a)
    left = MapExpression(f"{a!r}*x", Binary("*", Const(fa), Var()))
    right = MapExpression(
        f"{a!r}*x + 1 - {a!r}",
        Binary("-", Binary("+", Binary("*", Const(fa), Var()), Const(Fraction(1))), Const(fa)),
    )
    return left, right


def itinerary(
    map_like: MapLike,
    x: Union[float, Fraction],
    n: int,
    orientation: Optional[Orientation] = None,
) -> SymbolWord:
    """First n itinerary symbols of x: 0 where the orbit sits left of the
    critical point (strictly for the upper map, weakly for the lower one)."""
    if n < 1:
        raise ValueError("itinerary length must be at least 1")
    o = orientation or (
        map_like.orientation if isinstance(map_like, LorenzMapSpec) else Orientation.UPPER
    )
    res = compute_orbit(map_like, o, x, n)
    return SymbolWord(res.symbols)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    """Per-condition outcomes of the Lorenz-map checks on a sampling grid."""

    conditions: dict = field(default_factory=dict)
    expansivity_constant: float = math.inf
    expansivity_order: int = 1
    messages: list = field(default_factory=list)

    @property
    def structural_ok(self) -> bool:
        return all(v for k, v in self.conditions.items() if k != "expansive")

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())

    def summary(self) -> str:
        lines = [
            f"  {name}: {'pass' if passed else 'FAIL'}" for name, passed in self.conditions.items()
        ]
        lines.append(
            f"  estimated expansivity constant: {self.expansivity_constant:.6g}"
            f" (order {self.expansivity_order})"
        )
        lines.extend(f"  note: {m}" for m in self.messages)
        return "\n".join(lines)


def validate_lorenz(
    spec: LorenzMapSpec, grid_size: int = 10_000, tol: float = 1e-9
) -> ValidationReport:
    """Sampled check of the Lorenz-map conditions.

    Fixed endpoints, strict monotonicity of both branches, the branch
    ordering at q, and expansivity.  The one-step expansivity constant is the
    minimum difference quotient over adjacent grid points; when it is not
    above 1 the check retries with products of quotients along short orbit
    segments (an expanding-on-return map such as a square-root branch paired
    with a steep affine branch passes at order 2 or 3).
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    rep = ValidationReport()
    q = spec.q
    f0, f1 = spec.f0.evaluate, spec.f1.evaluate

    try:
        rep.conditions["f0_fixes_zero"] = abs(f0(0.0)) <= tol
        rep.conditions["f1_fixes_one"] = abs(f1(1.0) - 1.0) <= tol
        g0 = [q * i / (grid_size - 1) for i in range(grid_size)]
        g1 = [q + (1 - q) * i / (grid_size - 1) for i in range(grid_size)]
        v0 = [f0(x) for x in g0]
        v1 = [f1(x) for x in g1]
    except EvalDomainError as e:
        rep.conditions["evaluates"] = False
        rep.messages.append(str(e))
        return rep
    rep.conditions["evaluates"] = True
    rep.conditions["f0_increasing"] = all(b > a for a, b in zip(v0, v0[1:]))
    rep.conditions["f1_increasing"] = all(b > a for a, b in zip(v1, v1[1:]))

    f0q, f1q = v0[-1], v1[0]
    near_one = f0q >= 1.0 - BOUNDARY_TOL
    near_zero = f1q <= BOUNDARY_TOL
    rep.conditions["branch_order"] = (
        f0q > f1q and f0q <= 1.0 + tol and f1q >= -tol and not (near_one and near_zero)
    )
    if near_one and near_zero:
        rep.messages.append("f0(q) = 1 and f1(q) = 0 simultaneously: not a Lorenz map")

    quot0 = [(b - a) / h for a, b, h in zip(v0, v0[1:], _steps(g0))]
    quot1 = [(b - a) / h for a, b, h in zip(v1, v1[1:], _steps(g1))]
    one_step = min(min(quot0), min(quot1))
    rep.expansivity_constant = one_step
    if one_step > 1.0:
        rep.conditions["expansive"] = True
        return rep

    # orbit-product fallback: multiply local quotients along the orbit until
    # the product clears 1 (bounded number of steps)
    def local_quotient(x: float) -> float:
        if x < q:
            xs, vs, qs = g0, v0, quot0
        else:
            xs, vs, qs = g1, v1, quot1
        lo, hi = xs[0], xs[-1]
        idx = int((x - lo) / (hi - lo) * (len(qs) - 1)) if hi > lo else 0
        return qs[min(max(idx, 0), len(qs) - 1)]

    max_order = 6
    worst = math.inf
    order_used = 1
    ok = True
    for x in g0[1:-1] + g1[1:-1]:
        prod, y = 1.0, x
        k = 0
        while k < max_order:
            prod *= local_quotient(y)
            k += 1
            if prod > 1.0:
                break
            try:
                y = eval_map(spec, y, Orientation.UPPER)
            except EvalDomainError:
                break
        worst = min(worst, prod)
        order_used = max(order_used, k)
        if prod <= 1.0:
            ok = False
    rep.conditions["expansive"] = ok
    rep.expansivity_order = order_used if ok else max_order
    if ok:
        rep.messages.append(
            f"one-step quotient dips to {one_step:.4g}; expanding along orbits "
            f"of length <= {order_used} (min product {worst:.4g})"
        )
    return rep


def _steps(grid):
    return [b - a for a, b in zip(grid, grid[1:])]
