"""Numerical kernels shared by the physics modules.

Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals, a
positive-root quadratic solver, and log-log table interpolation.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadratureSpec",
    "InterpolationTable",
    "QuadratureResult",
    "NumericsError",
    "ConvergenceError",
    "InvalidIntegrandError",
    "NoRealRootError",
    "AmbiguousRootError",
    "OutOfRangeError",
    "integrate_adaptive",
    "integrate",
    "solve_quadratic_positive",
    "interp_loglog",
]


class NumericsError(ValueError):
    pass


class ConvergenceError(NumericsError):
    """Adaptive refinement ran out of subdivisions.

    ``estimate`` and ``error`` hold the best integral estimate reached and its
    error bound.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


class InvalidIntegrandError(NumericsError):
    pass


class NoRealRootError(NumericsError):
    pass


class AmbiguousRootError(NumericsError):
    pass


class OutOfRangeError(NumericsError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-6
    abs_tol: float = 1e-14
    max_subdivisions: int = 500

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if not self.abs_tol > 0.0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_subdivisions < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")


DIELECTRIC_QUAD = QuadratureSpec(rel_tol=1e-6)
FORCE_QUAD = QuadratureSpec(rel_tol=1e-5)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    subdivisions: int


# 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_EPS = np.finfo(float).eps
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod abscissae.
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = np.asarray(f(mid + half * _NODES), dtype=float)
    if y.shape != (15,):
        y = np.broadcast_to(y, (15,))
    if not np.all(np.isfinite(y)):
        raise InvalidIntegrandError(f"integrand is not finite on [{a}, {b}]")
    kron_unit = float(_KWEIGHTS @ y)
    kron = half * kron_unit
    err = abs(half * (kron_unit - float(_GWEIGHTS @ y)))
    # QUADPACK qk15 error heuristic: pessimistic on unresolved panels,
    # never below the roundoff floor of the panel
    half = abs(half)
    resabs = half * float(_KWEIGHTS @ np.abs(y))
    resasc = half * float(_KWEIGHTS @ np.abs(y - 0.5 * kron_unit))
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, 50.0 * _EPS * resabs)
    return kron, err


def _compactify(f, lo: float):
    """Map (lo, inf) onto (0, 1) via x = lo + t/(1-t)."""

    def g(t):
        s = 1.0 - t
        return f(lo + t / s) / (s * s)

    return g


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    spec: QuadratureSpec = DIELECTRIC_QUAD,
    points: Sequence[float] | None = None,
) -> QuadratureResult:
    """Adaptive G7-K15 quadrature returning value, error bound and work done.

    ``f`` must accept a 1-d array of abscissae and return values of the same
    shape. ``hi`` may be ``math.inf``; the half-line is then compactified so
    that no node ever lands on an endpoint. ``points`` seeds the initial
    partition of a finite interval (kinks, table nodes).
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got lo={lo}, hi={hi}")
    if math.isinf(lo):
        raise ValueError("lower limit must be finite")
    if math.isinf(hi):
        if points:
            raise ValueError("breakpoints are only supported on finite intervals")
        g, edges = _compactify(f, lo), [0.0, 1.0]
    else:
        g = f
        inner = sorted(p for p in (points or ()) if lo < p < hi)
        edges = [lo, *inner, hi]

    heap: list[tuple[float, float, float, float]] = []
    total = 0.0
    err_total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        val, err = _gk15(g, a, b)
        total += val
        err_total += err
        heapq.heappush(heap, (-err, a, b, val))

    n_split = 0
    while err_total > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if n_split >= spec.max_subdivisions:
            raise ConvergenceError(
                f"no convergence after {n_split} subdivisions", total, err_total
            )
        neg_err, a, b, val = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not a < m < b:
            raise ConvergenceError("interval collapsed below float resolution", total, err_total)
        v1, e1 = _gk15(g, a, m)
        v2, e2 = _gk15(g, m, b)
        total += v1 + v2 - val
        err_total += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, a, m, v1))
        heapq.heappush(heap, (-e2, m, b, v2))
        n_split += 1

    # Running sums drift; recompute from the final partition.
    total = math.fsum(item[3] for item in heap)
    err_total = math.fsum(-item[0] for item in heap)
    return QuadratureResult(total, err_total, n_split)


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    spec: QuadratureSpec = DIELECTRIC_QUAD,
    points: Sequence[float] | None = None,
) -> float:
    """Integral of ``f`` over ``(lo, hi)``; see :func:`integrate`."""
    return integrate(f, lo, hi, spec, points).value


def solve_quadratic_positive(a2: float, a1: float, a0: float) -> float:
    """Return the unique strictly positive root of ``a2 x^2 + a1 x + a0``.

    Uses the cancellation-free form of the quadratic formula, so the small
    root stays accurate when the coefficients span many decades.
    """
    if a2 == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    disc = a1 * a1 - 4.0 * a2 * a0
    if disc < 0.0:
        raise NoRealRootError(f"negative discriminant {disc!r}")
    if disc == 0.0:
        roots = [-a1 / (2.0 * a2)]
    else:
        q = -0.5 * (a1 + math.copysign(math.sqrt(disc), a1))
        roots = [q / a2, a0 / q]
    positive = [r for r in roots if r > 0.0]
    if len(positive) != 1:
        raise AmbiguousRootError(f"expected one positive root, found {sorted(roots)}")
    return positive[0]


@dataclass(frozen=True)
class InterpolationTable:
    abscissae: tuple[float, ...]
    ordinates: tuple[float, ...]

    def __post_init__(self):
        x = tuple(float(v) for v in self.abscissae)
        y = tuple(float(v) for v in self.ordinates)
        object.__setattr__(self, "abscissae", x)
        object.__setattr__(self, "ordinates", y)
        if len(x) != len(y):
            raise ValueError(f"abscissae/ordinates length mismatch: {len(x)} != {len(y)}")
        if len(x) < 2:
            raise ValueError("interpolation table needs at least 2 points")
        if x[0] < 0.0:
            raise ValueError("abscissae must be non-negative")
        if any(b <= a for a, b in zip(x[:-1], x[1:])):
            raise ValueError("abscissae must be strictly increasing")

    @cached_property
    def _x(self) -> np.ndarray:
        return np.array(self.abscissae)

    @cached_property
    def _y(self) -> np.ndarray:
        return np.array(self.ordinates)

    @cached_property
    def _logs(self) -> tuple[np.ndarray, np.ndarray]:
        if self._x[0] <= 0.0 or np.any(self._y <= 0.0):
            raise ValueError("log-log interpolation needs positive abscissae and ordinates")
        return np.log(self._x), np.log(self._y)

    def _check_range(self, x: np.ndarray) -> None:
        if np.any(x < self._x[0]) or np.any(x > self._x[-1]):
            raise OutOfRangeError(
                f"x outside table range [{self._x[0]}, {self._x[-1]}]"
            )

    def linear(self, x):
        x = np.asarray(x, dtype=float)
        self._check_range(x)
        return np.interp(x, self._x, self._y)


def interp_loglog(table: InterpolationTable, x):
    """Piecewise power-law interpolation, exact at the table nodes."""
    xa = np.asarray(x, dtype=float)
    table._check_range(xa)
    lx, ly = table._logs
    y = np.exp(np.interp(np.log(xa), lx, ly))
    idx = np.clip(np.searchsorted(table._x, xa), 0, len(table._x) - 1)
    on_node = table._x[idx] == xa
    y = np.where(on_node, table._y[idx], y)
    return float(y) if np.ndim(y) == 0 else y
