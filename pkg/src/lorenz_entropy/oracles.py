"""Independent entropy references: Markov spectral radius and the Parry value.

These never touch the bisection path, so they can serve as acceptance
oracles for it.  The word-count estimator from the kneading module is
re-exported as the third, definition-level reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .expressions import ExactnessError
from .kneading import entropy_estimate_wordcount  # noqa: F401  (re-export)
from .maps import AdmissiblePair, LorenzMapSpec, MapLike, Orientation, eval_map

DETECT_TOL = 1e-9


class NotMarkovError(RuntimeError):
    """No periodic critical orbit was found: the Markov oracle does not apply."""


@dataclass
class MarkovPartitionModel:
    """Markov partition of [0,1] with its 0/1 transition (covering) matrix."""

    interval_endpoints: list
    adjacency: np.ndarray

    def __post_init__(self) -> None:
        e = self.interval_endpoints
        if e[0] != 0.0 or e[-1] != 1.0 or any(b <= a for a, b in zip(e, e[1:])):
            raise ValueError("endpoints must increase strictly from 0 to 1")
        m = np.asarray(self.adjacency)
        cells = len(e) - 1
        if m.shape != (cells, cells):
            raise ValueError("adjacency shape must match the cell count")
        if not ((m == 0) | (m == 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")

    def entropy(self, tol: float = 1e-12) -> float:
        return math.log(spectral_radius(self.adjacency, tol))


def _critical_orbit_points(map_like: MapLike, orientation: Orientation, n_detect: int):
    """Forward orbit of q under one orientation up to (approximate) recurrence."""
    if isinstance(map_like, AdmissiblePair):
        a, q = map_like.a, map_like.p
        step = lambda x: a * x if (x < q if orientation is Orientation.UPPER else x <= q) else a * x + 1.0 - a

        def stepper(x):
            y = step(x)
            return min(max(y, 0.0), 1.0) if -1e-12 <= y <= 1 + 1e-12 else y

        exact = None
    else:
        q = map_like.q
        stepper = lambda x: eval_map(map_like, x, orientation)
        exact = _exact_orbit_points(map_like, orientation, n_detect)
        if exact is not None:
            return exact
    pts = [q]
    x = q
    for _ in range(n_detect):
        x = stepper(x)
        if any(abs(x - y) <= DETECT_TOL for y in pts):
            return pts
        pts.append(x)
    raise NotMarkovError(
        f"critical orbit not periodic within {n_detect} iterates (tol {DETECT_TOL})"
    )


def _exact_orbit_points(spec: LorenzMapSpec, orientation: Orientation, n_detect: int):
    """Exact-rational recurrence detection when the branch arithmetic permits."""
    q = spec.q_exact
    x = q
    pts = [q]
    upper = orientation is Orientation.UPPER
    for _ in range(n_detect):
        branch = spec.f0 if (x < q if upper else x <= q) else spec.f1
        try:
            x = branch.eval_rational(x)
        except ExactnessError:
            return None
        if x > 1:
            if x <= 1 + Fraction(1, 10**12):
                x = Fraction(1)
            else:
                return None
        if x in pts:
            return [float(p) for p in pts]
        pts.append(x)
    raise NotMarkovError(
        f"critical orbit not periodic within {n_detect} iterates (exact)"
    )


def build_markov(map_like: MapLike, n_detect: int = 200) -> MarkovPartitionModel:
    """Markov partition from the closure of both critical orbits.

    Endpoints are 0, 1, q and the forward orbit points of q under both
    orientations up to recurrence; the adjacency has a 1 where a cell's
    branch image covers a cell.  Raises NotMarkovError when no recurrence is
    found or the images fail to align with the partition.
    """
    q = map_like.p if isinstance(map_like, AdmissiblePair) else map_like.q
    pts = set()
    for o in (Orientation.UPPER, Orientation.LOWER):
        pts.update(_critical_orbit_points(map_like, o, n_detect))
    pts.update((0.0, 1.0, q))
    endpoints = []
    for x in sorted(pts):
        if not endpoints or x - endpoints[-1] > DETECT_TOL:
            endpoints.append(x)
    if abs(endpoints[-1] - 1.0) <= DETECT_TOL:
        endpoints[-1] = 1.0
    endpoints[0] = 0.0

    if isinstance(map_like, AdmissiblePair):
        a = map_like.a
        f0 = lambda x: a * x
        f1 = lambda x: a * x + 1.0 - a
    else:
        f0, f1 = map_like.f0.evaluate, map_like.f1.evaluate

    cells = len(endpoints) - 1
    adj = np.zeros((cells, cells), dtype=np.int64)
    for i in range(cells):
        left, right = endpoints[i], endpoints[i + 1]
        branch = f0 if right <= q + DETECT_TOL else f1
        y_lo, y_hi = branch(left), branch(right)
        if not (_on_grid(y_lo, endpoints) and _on_grid(y_hi, endpoints)):
            raise NotMarkovError(
                f"cell [{left}, {right}] maps to [{y_lo}, {y_hi}], "
                "which is not a union of cells"
            )
        for j in range(cells):
            if y_lo <= endpoints[j] + DETECT_TOL and endpoints[j + 1] <= y_hi + DETECT_TOL:
                adj[i, j] = 1
    if not adj.any(axis=1).all():
        raise NotMarkovError("some cell image covers no cell")
    return MarkovPartitionModel(endpoints, adj)


def _on_grid(y: float, endpoints) -> bool:
    return any(abs(y - e) <= 10 * DETECT_TOL for e in endpoints)


def spectral_radius(adjacency, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Dominant eigenvalue of a nonnegative matrix by power iteration.

    Successive Rayleigh quotients must agree within tol.  If the iteration
    fails to settle (reducible or periodic structure), the matrix is squared
    repeatedly (up to 64 times, with rescaling) and the iteration retried,
    undoing the squarings on the way out.
    """
    m = np.asarray(adjacency, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("adjacency must be a square matrix")
    if (m < 0).any():
        raise ValueError("adjacency must be nonnegative")
    if not m.any(axis=1).any():
        raise ValueError("adjacency needs at least one nonzero row")

    lam = _power_iterate(m, tol, max_iter)
    if lam is not None:
        return lam
    # squaring fallback: rho(A^(2^k)) = rho(A)^(2^k), with rescaling so the
    # powers stay representable; log_div tracks the accumulated divisor
    log_div = 0.0
    b = m.copy()
    for k in range(1, 65):
        b = b @ b
        norm = b.max()
        if norm == 0:
            return 0.0
        b /= norm
        log_div = 2.0 * log_div + math.log(norm)
        lam = _power_iterate(b, tol, max_iter)
        if lam is not None:
            if lam <= 0:
                return 0.0
            return math.exp((math.log(lam) + log_div) / (1 << k))
    raise ArithmeticError("spectral radius iteration failed to converge")


def _power_iterate(m: np.ndarray, tol: float, max_iter: int):
    v = np.ones(m.shape[0])
    v /= np.linalg.norm(v)
    prev = None
    for _ in range(max_iter):
        w = m @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        v = w / norm
        lam = float(v @ (m @ v))
        if prev is not None and abs(lam - prev) < tol:
            return lam
        prev = lam
    return None


def parry_reference(pair: AdmissiblePair) -> float:
    """ln(a): the entropy of every uniform map with slope a."""
    return math.log(pair.a)
