"""Effective-medium permittivities of metal-dielectric composites and the
Lifshitz force between composite slabs."""

__version__ = "0.1.0"

from .dielectric import Drude, Oscillators, SpectrumTable, Tabulated, Vacuum, eval_model, kk_rotate
from .lifshitz import ForceResult, Slab, SlabSystem, force_per_area, reduction_factor, validity_check
from .mixing import RULE_NAMES, CompositeSpec, InclusionShape, MixingRule, SpectralFunction, effective_epsilon
from .numerics import QuadratureSpec

__all__ = [
    "CompositeSpec",
    "Drude",
    "ForceResult",
    "InclusionShape",
    "MixingRule",
    "Oscillators",
    "QuadratureSpec",
    "RULE_NAMES",
    "Slab",
    "SlabSystem",
    "SpectralFunction",
    "SpectrumTable",
    "Tabulated",
    "Vacuum",
    "effective_epsilon",
    "eval_model",
    "force_per_area",
    "kk_rotate",
    "reduction_factor",
    "validity_check",
]
