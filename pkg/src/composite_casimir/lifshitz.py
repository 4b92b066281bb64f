"""Zero-temperature Lifshitz force between two half-space slabs across a gap.

Internally both integration variables are made dimensionless with the gap
width: u = 2 L zeta / (hbar c) and v = 2 L Q. In those units the force per
area is

    F = -hbar c / (2 pi^2 (2L)^4) * sum_pol int du int dv v w r1 r2 / (e^w - r1 r2)

with w = sqrt(eps_gap u^2 + v^2), and the ideal-conductor value of the double
integral is 2 pi^4 / 15.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dielectric import DielectricModel, Vacuum, eval_model
from .mixing import CompositeSpec, MixingRule, effective_epsilon
from .numerics import FORCE_QUAD, QuadratureSpec, integrate

__all__ = [
    "HBAR_C_EV_NM",
    "EV_PER_NM3_TO_PA",
    "IDEAL",
    "Slab",
    "SlabSystem",
    "ForceResult",
    "k_layer",
    "fresnel_r",
    "casimir_ideal_force",
    "force_per_area",
    "reduction_factor",
    "validity_check",
]

HBAR_C_EV_NM = 197.3269804
EV_PER_NM3_TO_PA = 1.602176634e8
IDEAL = "ideal"
_IDEAL_INTEGRAL = 2.0 * math.pi ** 4 / 15.0


def k_layer(eps, zeta, Q):
    """Normal wavevector sqrt(eps (zeta/hbar c)^2 + Q^2) in 1/nm; zeta in eV, Q in 1/nm."""
    q = np.asarray(zeta, dtype=float) / HBAR_C_EV_NM
    return np.sqrt(eps * q * q + np.asarray(Q, dtype=float) ** 2)


def fresnel_r(eps_a, eps_b, zeta, Q, pol: str):
    """Reflection coefficient at the a|b interface seen from medium a.

    Conventions give r_p -> +1 and r_s -> -1 for a perfect conductor b.
    """
    ka = k_layer(eps_a, zeta, Q)
    kb = k_layer(eps_b, zeta, Q)
    return _fresnel(eps_a, eps_b, ka, kb, pol)


def _fresnel(eps_a, eps_b, ka, kb, pol):
    if pol == "s":
        return (ka - kb) / (ka + kb)
    if pol == "p":
        return (eps_b * ka - eps_a * kb) / (eps_b * ka + eps_a * kb)
    raise ValueError(f"polarization must be 's' or 'p', got {pol!r}")


@dataclass(frozen=True)
class Slab:
    """A half-space made of a composite mixed by ``rule``, or an ideal conductor.

    ``rule == "ideal"`` makes the slab a perfect reflector and ``composite``
    may then be omitted.
    """

    composite: CompositeSpec | None
    rule: MixingRule | str = "bruggeman"

    def __post_init__(self):
        if isinstance(self.rule, str) and self.rule != IDEAL:
            object.__setattr__(self, "rule", MixingRule(self.rule))
        if self.composite is None and not self.is_ideal:
            raise ValueError("a non-ideal slab needs a composite")

    @property
    def is_ideal(self) -> bool:
        return self.rule == IDEAL

    @property
    def rule_name(self) -> str:
        return IDEAL if self.is_ideal else self.rule.name

    def epsilon(self, zeta: float) -> float:
        return effective_epsilon(self.composite, self.rule, zeta)


@dataclass(frozen=True)
class SlabSystem:
    slab1: Slab
    slab2: Slab
    separation_nm: float
    gap: DielectricModel = field(default_factory=Vacuum)

    def __post_init__(self):
        if not self.separation_nm > 0.0:
            raise ValueError(f"separation must be positive, got {self.separation_nm}")

    def swapped(self) -> SlabSystem:
        return SlabSystem(self.slab2, self.slab1, self.separation_nm, self.gap)


@dataclass(frozen=True)
class ForceResult:
    force_pa: float
    eta: float
    error_pa: float
    eta_error: float
    validity_ok: bool


def casimir_ideal_force(separation_nm: float) -> float:
    """Ideal-conductor force per area in Pa (negative: attractive)."""
    L = separation_nm
    return -math.pi ** 2 * HBAR_C_EV_NM / (240.0 * L ** 4) * EV_PER_NM3_TO_PA


def validity_check(system: SlabSystem) -> bool:
    """True when 4 pi L exceeds the inclusion radius of both slabs."""
    for slab in (system.slab1, system.slab2):
        if slab.composite is not None and not 4.0 * math.pi * system.separation_nm > slab.composite.radius_nm:
            return False
    return True


def _reflection_products(system: SlabSystem, u: float, v: np.ndarray, eps_gap: float, eps1, eps2):
    w = np.sqrt(eps_gap * u * u + v * v)
    prods = []
    for pol in ("s", "p"):
        r = []
        for slab, eps in ((system.slab1, eps1), (system.slab2, eps2)):
            if slab.is_ideal:
                r.append(-1.0 if pol == "s" else 1.0)
            else:
                k = np.sqrt(eps * u * u + v * v)
                r.append(_fresnel(eps_gap, eps, w, k, pol))
        prods.append(r[0] * r[1])
    return w, prods


def _double_integral(system: SlabSystem, quad: QuadratureSpec) -> tuple[float, float]:
    scale = HBAR_C_EV_NM / (2.0 * system.separation_nm)  # zeta in eV per unit u
    # value-weighted inner relative error: sum(err_i) / sum(|I_i|) over all nodes
    inner_acc = [0.0, 0.0]

    def slab_eps(slab: Slab, zeta: float):
        return None if slab.is_ideal else slab.epsilon(zeta)

    def inner(u: float) -> float:
        zeta = u * scale
        eps_gap = float(eval_model(system.gap, zeta))
        eps1 = slab_eps(system.slab1, zeta)
        eps2 = eps1 if system.slab2 == system.slab1 else slab_eps(system.slab2, zeta)

        def integrand(v):
            w, prods = _reflection_products(system, u, v, eps_gap, eps1, eps2)
            decay = np.exp(-w)
            total = 0.0
            for rr in prods:
                total = total + rr * decay / (1.0 - rr * decay)
            return v * w * total

        res = integrate(integrand, 0.0, math.inf, quad)
        inner_acc[0] += res.error
        inner_acc[1] += abs(res.value)
        return res.value

    outer = integrate(lambda us: np.array([inner(float(u)) for u in us]), 0.0, math.inf, quad)
    inner_rel = inner_acc[0] / inner_acc[1] if inner_acc[1] > 0.0 else 0.0
    err = outer.error + inner_rel * abs(outer.value)
    return outer.value, err


def force_per_area(system: SlabSystem, quad: QuadratureSpec = FORCE_QUAD) -> ForceResult:
    """Lifshitz force per area between the two slabs of ``system``.

    The sign follows the ideal-conductor convention (negative is attractive),
    ``eta`` is F / F_ideal at the same separation. The 4 pi L > a condition is
    reported through ``validity_ok`` but never blocks the computation.
    """
    value, err = _double_integral(system, quad)
    L = system.separation_nm
    prefactor = HBAR_C_EV_NM / (2.0 * math.pi ** 2 * (2.0 * L) ** 4) * EV_PER_NM3_TO_PA
    force = -prefactor * value
    return ForceResult(
        force_pa=force,
        eta=value / _IDEAL_INTEGRAL,
        error_pa=prefactor * err,
        eta_error=err / _IDEAL_INTEGRAL,
        validity_ok=validity_check(system),
    )


def reduction_factor(system: SlabSystem, quad: QuadratureSpec = FORCE_QUAD) -> float:
    return force_per_area(system, quad).eta
