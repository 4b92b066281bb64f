"""Effective permittivity of two-phase composites.

All rule functions take permittivities already evaluated on the imaginary
axis (real, >= 1): ``eps_i`` for the inclusions, ``eps_h`` for the host, and
the inclusion volume fraction ``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .dielectric import DielectricModel, eval_model
from .numerics import AmbiguousRootError, NoRealRootError, solve_quadratic_positive

__all__ = [
    "RULE_NAMES",
    "UnphysicalInputError",
    "SingularSpectralDomainError",
    "InclusionShape",
    "CompositeSpec",
    "SpectralFunction",
    "MixingRule",
    "wiener_bounds",
    "hashin_shtrikman_bounds",
    "maxwell_garnett",
    "bruggeman_sphere",
    "bruggeman_residual",
    "looyenga",
    "spectral_eval",
    "depolarization_prolate",
    "maxwell_garnett_ellipsoid",
    "bruggeman_ellipsoid",
    "effective_epsilon",
]

RULE_NAMES = (
    "wiener-lower",
    "wiener-upper",
    "hs-lower",
    "hs-upper",
    "maxwell-garnett",
    "bruggeman",
    "looyenga",
    "spectral",
    "mg-ellipsoid",
    "bruggeman-ellipsoid",
)


class UnphysicalInputError(ValueError):
    pass


class SingularSpectralDomainError(ValueError):
    pass


def _check_f(f: float) -> float:
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"filling fraction must lie in [0, 1], got {f}")
    return float(f)


def wiener_bounds(eps_i: float, eps_h: float, f: float) -> tuple[float, float]:
    """Harmonic (lower) and arithmetic (upper) averages."""
    f = _check_f(f)
    lower = eps_i * eps_h / (f * eps_h + (1.0 - f) * eps_i)
    upper = f * eps_i + (1.0 - f) * eps_h
    return lower, upper


def hashin_shtrikman_bounds(eps_i: float, eps_h: float, f: float) -> tuple[float, float]:
    """Hashin-Shtrikman bounds for spherical inclusions, returned as (lower, upper).

    The host-referenced expression is the lower bound when ``eps_i > eps_h``
    and the upper one otherwise; the pair is ordered before returning.
    """
    f = _check_f(f)
    if eps_i == eps_h:
        return eps_h, eps_h
    host_ref = eps_h + eps_h * f / (eps_h / (eps_i - eps_h) + (1.0 - f) / 3.0)
    incl_ref = eps_i + (1.0 - f) * eps_i / (eps_i / (eps_h - eps_i) + f / 3.0)
    return (host_ref, incl_ref) if host_ref <= incl_ref else (incl_ref, host_ref)


def maxwell_garnett(eps_i: float, eps_h: float, f: float) -> float:
    f = _check_f(f)
    alpha = (eps_i - eps_h) / (eps_i + 2.0 * eps_h)
    return eps_h * (1.0 + 2.0 * f * alpha) / (1.0 - f * alpha)


def _bruggeman_root(eps_i: float, eps_h: float, f: float, screening: float) -> float:
    # screening = 1/L - 1 (2 for spheres); clearing the denominators gives
    # screening*x^2 - [(f*s - (1-f)) eps_i + ((1-f)*s - f) eps_h] x - eps_i eps_h = 0
    if f == 0.0:
        return float(eps_h)
    if f == 1.0:
        return float(eps_i)
    if eps_i == eps_h:
        return float(eps_h)
    s = screening
    b = (f * s - (1.0 - f)) * eps_i + ((1.0 - f) * s - f) * eps_h
    try:
        return solve_quadratic_positive(s, -b, -eps_i * eps_h)
    except (AmbiguousRootError, NoRealRootError) as exc:
        raise UnphysicalInputError(
            f"no unique positive Bruggeman root for eps_i={eps_i}, eps_h={eps_h}, f={f}"
        ) from exc


def bruggeman_sphere(eps_i: float, eps_h: float, f: float) -> float:
    """Positive root of the symmetric self-consistent condition for spheres."""
    return _bruggeman_root(eps_i, eps_h, _check_f(f), 2.0)


def bruggeman_residual(eps_eff: float, eps_i: float, eps_h: float, f: float, L: float = 1.0 / 3.0) -> float:
    """Left-hand side of the Bruggeman condition; zero at the solution."""
    s = 1.0 / L - 1.0
    return (f * (eps_i - eps_eff) / (eps_i + s * eps_eff)
            + (1.0 - f) * (eps_h - eps_eff) / (eps_h + s * eps_eff))


def looyenga(eps_i: float, eps_h: float, f: float) -> float:
    f = _check_f(f)
    return (f * np.cbrt(eps_i) + (1.0 - f) * np.cbrt(eps_h)) ** 3


@dataclass(frozen=True)
class SpectralFunction:
    """Geometry-only spectral density G(L) over depolarization L in [0, 1].

    Discrete poles are (position, weight) pairs; the optional continuous part
    is a density sampled on ``grid`` and integrated by the trapezoid rule.
    The total weight must be 1.
    """

    poles: tuple[tuple[float, float], ...] = ()
    grid: tuple[float, ...] = ()
    density: tuple[float, ...] = ()

    def __post_init__(self):
        poles = tuple((float(p), float(w)) for p, w in self.poles)
        grid = tuple(float(v) for v in self.grid)
        density = tuple(float(v) for v in self.density)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "density", density)
        for pos, weight in poles:
            if not 0.0 <= pos <= 1.0:
                raise ValueError(f"pole position must lie in [0, 1], got {pos}")
            if not weight > 0.0:
                raise ValueError(f"pole weight must be positive, got {weight}")
        if len(grid) != len(density):
            raise ValueError("continuous part: grid and density lengths differ")
        if grid:
            if len(grid) < 2 or grid[0] < 0.0 or grid[-1] > 1.0:
                raise ValueError("continuous part needs >= 2 grid points inside [0, 1]")
            if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
                raise ValueError("continuous-part grid must be strictly increasing")
            if min(density) < 0.0:
                raise ValueError("spectral density must be non-negative")
        total = sum(w for _, w in poles) + self.continuous_weight()
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"spectral function must integrate to 1, got {total}")

    def continuous_weight(self) -> float:
        if not self.grid:
            return 0.0
        return float(np.trapezoid(self.density, self.grid))

    @classmethod
    def maxwell_garnett(cls, f: float) -> SpectralFunction:
        """Single pole at L = (1 - f)/3, which reproduces Maxwell-Garnett."""
        return cls(poles=(((1.0 - _check_f(f)) / 3.0, 1.0),))


def spectral_eval(G: SpectralFunction, eps_i: float, eps_h: float, f: float) -> float:
    """eps_h * (1 - f * int G(L) / (t - L) dL) with t = eps_h / (eps_h - eps_i)."""
    f = _check_f(f)
    if f == 0.0 or eps_i == eps_h:
        return float(eps_h)
    t = eps_h / (eps_h - eps_i)
    if 0.0 <= t <= 1.0:
        raise SingularSpectralDomainError(f"t = {t} lies inside [0, 1]; spectral integral is singular")
    s = math.fsum(w / (t - pos) for pos, w in G.poles)
    if G.grid:
        grid = np.asarray(G.grid)
        s += float(np.trapezoid(np.asarray(G.density) / (t - grid), grid))
    return eps_h * (1.0 - f * s)


def depolarization_prolate(e: float) -> tuple[float, float, float]:
    """Depolarization factors (long axis, short, short) of a prolate spheroid.

    ``e`` is the eccentricity. Small ``e`` uses the Taylor series to avoid
    cancellation between the logarithm and 2e.
    """
    if not 0.0 <= e < 1.0:
        raise ValueError(f"eccentricity must lie in [0, 1), got {e}")
    if e == 0.0:
        return (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    if e < 0.1:
        # 1/3 - sum_n 2 e^(2n) / ((2n+1)(2n+3)); the closed form loses ~eps/e^3
        e2 = e * e
        La = 1.0 / 3.0
        for n in range(12, 0, -1):
            La -= 2.0 * e2 ** n / ((2 * n + 1) * (2 * n + 3))
    else:
        La = (1.0 - e * e) / (2.0 * e ** 3) * (math.log((1.0 + e) / (1.0 - e)) - 2.0 * e)
    Lb = 0.5 * (1.0 - La)
    return (La, Lb, Lb)


def _check_depolarization(L) -> tuple[float, float, float]:
    L = tuple(float(v) for v in L)
    if len(L) != 3:
        raise ValueError("need three depolarization factors")
    if any(not 0.0 <= v <= 1.0 for v in L):
        raise ValueError(f"depolarization factors must lie in [0, 1], got {L}")
    if abs(sum(L) - 1.0) > 1e-12:
        raise ValueError(f"depolarization factors must sum to 1, got {sum(L)}")
    return L


def maxwell_garnett_ellipsoid(eps_i: float, eps_h: float, f: float, L, axis_average: bool = True):
    """Maxwell-Garnett for ellipsoidal inclusions with depolarization factors ``L``.

    Each axis has the dimensionless polarizability
    alpha_j = (eps_i - eps_h) / (3 (eps_h + L_j (eps_i - eps_h))), which is the
    sphere's (eps_i - eps_h)/(eps_i + 2 eps_h) at L_j = 1/3. With
    ``axis_average`` (randomly oriented inclusions) the mean of the three is
    used in eps_h (1 + 2 f alpha) / (1 - f alpha); otherwise the three per-axis
    values of an aligned composite are returned.

    Strongly elongated inclusions at high filling push f alpha past 1, where
    the closure has a pole; that raises :class:`UnphysicalInputError`.
    """
    f = _check_f(f)
    L = _check_depolarization(L)
    d = eps_i - eps_h
    alpha = [d / (3.0 * (eps_h + Lj * d)) for Lj in L]

    def closure(a):
        if f * a >= 1.0:
            raise UnphysicalInputError(f"f * alpha = {f * a} >= 1: Maxwell-Garnett closure has no positive value")
        return eps_h * (1.0 + 2.0 * f * a) / (1.0 - f * a)

    if axis_average:
        return closure(sum(alpha) / 3.0)
    return tuple(closure(a) for a in alpha)


def bruggeman_ellipsoid(eps_i: float, eps_h: float, f: float, L: float) -> float:
    """Bruggeman solution with the sphere's 2 replaced by 1/L - 1."""
    if not 0.0 < L < 1.0:
        raise ValueError(f"depolarization factor must lie in (0, 1), got {L}")
    return _bruggeman_root(eps_i, eps_h, _check_f(f), 1.0 / L - 1.0)


@dataclass(frozen=True)
class InclusionShape:
    """Inclusion geometry: ``sphere``, ``prolate`` (by eccentricity) or ``explicit`` factors."""

    kind: Literal["sphere", "prolate", "explicit"] = "sphere"
    eccentricity: float = 0.0
    factors: tuple[float, float, float] = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)

    def __post_init__(self):
        if self.kind == "sphere":
            factors = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
        elif self.kind == "prolate":
            factors = depolarization_prolate(self.eccentricity)
        elif self.kind == "explicit":
            factors = _check_depolarization(self.factors)
        else:
            raise ValueError(f"unknown inclusion shape {self.kind!r}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def sphere(cls) -> InclusionShape:
        return cls("sphere")

    @classmethod
    def prolate(cls, e: float) -> InclusionShape:
        return cls("prolate", eccentricity=float(e))

    @classmethod
    def explicit(cls, L1: float, L2: float, L3: float) -> InclusionShape:
        return cls("explicit", factors=(L1, L2, L3))


@dataclass(frozen=True)
class CompositeSpec:
    host: DielectricModel
    inclusion: DielectricModel
    f: float
    shape: InclusionShape = InclusionShape()
    radius_nm: float = 20.0

    def __post_init__(self):
        _check_f(self.f)
        if not self.radius_nm > 0.0:
            raise ValueError(f"inclusion radius must be positive, got {self.radius_nm}")


@dataclass(frozen=True)
class MixingRule:
    """A mixing rule by canonical name.

    ``spectral`` is required for the ``spectral`` rule: either a fixed
    :class:`SpectralFunction` or the string ``"maxwell-garnett"`` for the
    filling-dependent single pole. ``orientation`` applies to the ellipsoid
    rules: ``"average"`` for random orientation, or ``"aligned"`` to use
    only the first (long-axis) depolarization factor.
    """

    name: str
    spectral: SpectralFunction | Literal["maxwell-garnett"] | None = None
    orientation: Literal["average", "aligned"] = "average"

    def __post_init__(self):
        if self.name not in RULE_NAMES:
            raise ValueError(f"unknown mixing rule {self.name!r}; expected one of {RULE_NAMES}")
        if self.name == "spectral" and self.spectral is None:
            raise ValueError("the spectral rule needs a spectral function")
        if self.orientation not in ("average", "aligned"):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    def apply(self, eps_i: float, eps_h: float, f: float, shape: InclusionShape = InclusionShape()) -> float:
        name = self.name
        if name == "wiener-lower":
            return wiener_bounds(eps_i, eps_h, f)[0]
        if name == "wiener-upper":
            return wiener_bounds(eps_i, eps_h, f)[1]
        if name == "hs-lower":
            return hashin_shtrikman_bounds(eps_i, eps_h, f)[0]
        if name == "hs-upper":
            return hashin_shtrikman_bounds(eps_i, eps_h, f)[1]
        if name == "maxwell-garnett":
            return maxwell_garnett(eps_i, eps_h, f)
        if name == "bruggeman":
            return bruggeman_sphere(eps_i, eps_h, f)
        if name == "looyenga":
            return looyenga(eps_i, eps_h, f)
        if name == "spectral":
            G = SpectralFunction.maxwell_garnett(f) if self.spectral == "maxwell-garnett" else self.spectral
            return spectral_eval(G, eps_i, eps_h, f)
        L = shape.factors
        if name == "mg-ellipsoid":
            if self.orientation == "average":
                return maxwell_garnett_ellipsoid(eps_i, eps_h, f, L, axis_average=True)
            return maxwell_garnett_ellipsoid(eps_i, eps_h, f, L, axis_average=False)[0]
        # bruggeman-ellipsoid
        if self.orientation == "aligned":
            return bruggeman_ellipsoid(eps_i, eps_h, f, L[0])
        return sum(bruggeman_ellipsoid(eps_i, eps_h, f, Lj) for Lj in L) / 3.0


def effective_epsilon(spec: CompositeSpec, rule: MixingRule | str, zeta: float) -> float:
    """Evaluate host and inclusion at ``zeta`` (eV) and mix them with ``rule``."""
    if isinstance(rule, str):
        rule = MixingRule(rule)
    eps_h = float(eval_model(spec.host, zeta))
    eps_i = float(eval_model(spec.inclusion, zeta))
    return float(rule.apply(eps_i, eps_h, spec.f, spec.shape))
