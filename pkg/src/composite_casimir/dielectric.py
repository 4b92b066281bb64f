"""Permittivities on the imaginary frequency axis, eps(i*zeta).

Frequencies are photon energies in eV throughout. Each model is an immutable
dataclass that can be called with ``zeta``; :func:`eval_model` is the uniform
entry point used by the mixing and force code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Union

import numpy as np

from .numerics import (
    DIELECTRIC_QUAD,
    InterpolationTable,
    QuadratureSpec,
    integrate_adaptive,
    interp_loglog,
)

__all__ = [
    "HBAR_EV_S",
    "DivergentAtZeroError",
    "IncompleteSpectrumError",
    "Vacuum",
    "Drude",
    "Oscillators",
    "SpectrumTable",
    "Tabulated",
    "DielectricModel",
    "eval_drude_imag",
    "eval_oscillator_imag",
    "drude_loss",
    "kk_rotate",
    "eval_model",
]

HBAR_EV_S = 6.582119569e-16  # converts rad/s to eV at ingestion


class DivergentAtZeroError(ValueError):
    pass


class IncompleteSpectrumError(ValueError):
    pass


def _check_zeta(zeta):
    z = np.asarray(zeta, dtype=float)
    if np.any(z < 0.0) or not np.all(np.isfinite(z)):
        raise ValueError(f"imaginary frequency must be finite and >= 0, got {zeta!r}")
    return z


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def eval_drude_imag(omega_p: float, gamma: float, zeta):
    """1 + omega_p^2 / (zeta (zeta + gamma))."""
    z = _check_zeta(zeta)
    if np.any(z == 0.0):
        raise DivergentAtZeroError("Drude permittivity diverges at zeta = 0")
    return _scalar(1.0 + omega_p * omega_p / (z * (z + gamma)))


def drude_loss(omega_p: float, gamma: float, omega):
    """Real-axis Drude loss eps''(omega) = omega_p^2 gamma / (omega (omega^2 + gamma^2))."""
    w = np.asarray(omega, dtype=float)
    return _scalar(omega_p * omega_p * gamma / (w * (w * w + gamma * gamma)))


def eval_oscillator_imag(terms, zeta):
    """1 + sum_k C_k / (1 + (zeta/omega_k)^2) for ``terms`` of (C_k, omega_k)."""
    z = _check_zeta(zeta)
    out = np.ones_like(z)
    for strength, omega in terms:
        out = out + strength / (1.0 + (z / omega) ** 2)
    return _scalar(out)


@dataclass(frozen=True)
class Vacuum:
    name: str = "vacuum"
    provenance: str = ""

    def __call__(self, zeta):
        z = _check_zeta(zeta)
        return _scalar(np.ones_like(z))


@dataclass(frozen=True)
class Drude:
    omega_p: float
    gamma: float
    name: str = "drude"
    provenance: str = ""

    def __post_init__(self):
        if not self.omega_p > 0.0:
            raise ValueError(f"plasma frequency must be positive, got {self.omega_p}")
        if not self.gamma >= 0.0:
            raise ValueError(f"damping must be non-negative, got {self.gamma}")

    def __call__(self, zeta):
        return eval_drude_imag(self.omega_p, self.gamma, zeta)

    def loss(self, omega):
        return drude_loss(self.omega_p, self.gamma, omega)


@dataclass(frozen=True)
class Oscillators:
    """Sum of undamped oscillators, each term a (strength, frequency) pair."""

    terms: tuple[tuple[float, float], ...]
    name: str = "oscillators"
    provenance: str = ""

    def __post_init__(self):
        terms = tuple((float(c), float(w)) for c, w in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("oscillator model needs at least one (C, omega) term")
        for c, w in terms:
            if not (c > 0.0 and w > 0.0):
                raise ValueError(f"oscillator strength and frequency must be positive, got ({c}, {w})")

    def __call__(self, zeta):
        return eval_oscillator_imag(self.terms, zeta)


@dataclass(frozen=True)
class SpectrumTable:
    """Sampled loss eps''(omega) with low- and high-frequency closures.

    Below the first sample the loss follows ``extrapolation`` (a Drude model)
    when one is given; above the last sample it falls off as
    ``omega**-tail_exponent``.
    """

    omega: tuple[float, ...]
    eps2: tuple[float, ...]
    extrapolation: Drude | None = None
    tail_exponent: float = 3.0

    def __post_init__(self):
        w = tuple(float(v) for v in self.omega)
        e = tuple(float(v) for v in self.eps2)
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "eps2", e)
        if len(w) != len(e):
            raise ValueError(f"omega/eps2 length mismatch: {len(w)} != {len(e)}")
        if len(w) < 2:
            raise ValueError("spectrum table needs at least 2 samples")
        if w[0] <= 0.0:
            raise ValueError("omega must be positive")
        for i, (a, b) in enumerate(zip(w[:-1], w[1:])):
            if b <= a:
                raise ValueError(f"omega must be strictly increasing (row {i + 2}: {b} after {a})")
        for i, v in enumerate(e):
            if v < 0.0 or not math.isfinite(v):
                raise ValueError(f"eps2 must be finite and >= 0 (passivity), row {i + 1}: {v}")
        if not self.tail_exponent > 0.0:
            raise ValueError(f"tail exponent must be positive, got {self.tail_exponent}")

    @cached_property
    def _table(self) -> InterpolationTable:
        return InterpolationTable(self.omega, self.eps2)

    @cached_property
    def _loglog(self) -> bool:
        return min(self.eps2) > 0.0

    def loss(self, omega):
        """Interpolated eps'' inside the sampled range."""
        if self._loglog:
            return interp_loglog(self._table, omega)
        return self._table.linear(omega)


def kk_rotate(table: SpectrumTable, zeta: float, quad: QuadratureSpec = DIELECTRIC_QUAD) -> float:
    """eps(i zeta) from the loss spectrum by the Kramers-Kronig integral.

    The integral 1 + (2/pi) int_0^inf omega eps''(omega) / (omega^2 + zeta^2)
    is split at the ends of the table: the Drude extrapolation covers
    [0, omega_min], the interpolated samples cover the table, and the power-law
    tail covers (omega_max, inf).
    """
    zeta = float(zeta)
    if not zeta > 0.0:
        raise DivergentAtZeroError("KK rotation is evaluated only at zeta > 0")
    z2 = zeta * zeta
    w_min, w_max = table.omega[0], table.omega[-1]

    low = 0.0
    if table.extrapolation is not None:
        wp2g = table.extrapolation.omega_p ** 2 * table.extrapolation.gamma
        g2 = table.extrapolation.gamma ** 2
        # omega * Drude loss, with the 1/omega pole cancelled analytically
        low = integrate_adaptive(
            lambda w: wp2g / ((w * w + g2) * (w * w + z2)), 0.0, w_min, quad
        )
    elif table.eps2[0] > 0.0 and w_min > 0.01 * zeta:
        raise IncompleteSpectrumError(
            f"table starts at {w_min} eV with nonzero loss and has no low-frequency "
            f"extrapolation; cannot rotate at zeta={zeta} eV"
        )

    mid = integrate_adaptive(
        lambda w: w * table.loss(w) / (w * w + z2),
        w_min,
        w_max,
        quad,
        points=table.omega,
    )

    # omega = w_max / x maps the tail onto (0, 1]
    e_max, p = table.eps2[-1], table.tail_exponent
    tail = 0.0
    if e_max > 0.0:
        wm2 = w_max * w_max
        tail = integrate_adaptive(
            lambda x: e_max * wm2 * x ** (p - 1.0) / (wm2 + z2 * x * x), 0.0, 1.0, quad
        )

    return 1.0 + (2.0 / math.pi) * (low + mid + tail)


@lru_cache(maxsize=1 << 16)
def _kk_cached(table: SpectrumTable, zeta: float, quad: QuadratureSpec) -> float:
    return kk_rotate(table, zeta, quad)


@dataclass(frozen=True)
class Tabulated:
    table: SpectrumTable
    name: str = "tabulated"
    provenance: str = ""
    quad: QuadratureSpec = field(default=DIELECTRIC_QUAD, compare=False)

    def __call__(self, zeta):
        z = _check_zeta(zeta)
        if z.ndim == 0:
            return _kk_cached(self.table, float(z), self.quad)
        return np.array([_kk_cached(self.table, float(v), self.quad) for v in z.ravel()]).reshape(z.shape)


DielectricModel = Union[Vacuum, Drude, Oscillators, Tabulated]


def eval_model(model: DielectricModel, zeta):
    """Evaluate any dielectric model at imaginary frequency ``zeta`` (eV)."""
    return model(zeta)
