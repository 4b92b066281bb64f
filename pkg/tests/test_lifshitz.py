import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from composite_casimir.dielectric import Drude, Oscillators, Vacuum
from composite_casimir.lifshitz import (
    EV_PER_NM3_TO_PA,
    HBAR_C_EV_NM,
    IDEAL,
    Slab,
    SlabSystem,
    casimir_ideal_force,
    force_per_area,
    fresnel_r,
    k_layer,
    reduction_factor,
    validity_check,
)
from composite_casimir.mixing import CompositeSpec
from composite_casimir.numerics import QuadratureSpec

IDEAL_SLAB = Slab(None, IDEAL)


def drude_slab(f=1.0, host=Vacuum(), rule="maxwell-garnett"):
    return Slab(CompositeSpec(host, Drude(9.0, 0.035), f), rule)


def textbook_force(eps1, eps2, L, eps_gap=lambda z: 1.0):
    """Lifshitz force in the (xi, p) variables with p >= 1, integrated by mpmath.

    Independent of the package: different variables, different reflection
    formulas, different quadrature.
    """
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 15

    def inner(z):
        e1, e2, e3 = eps1(z), eps2(z), eps_gap(z)
        n = mp.sqrt(e3)

        def r(e, p):
            s = mp.sqrt(e / e3 - 1 + p * p)
            return (s - p) / (s + p), (e / e3 * p - s) / (e / e3 * p + s)

        def g(p):
            x = mp.exp(-2 * p * n * z * L / HBAR_C_EV_NM)
            (s1, p1), (s2, p2) = r(e1, p), r(e2, p)
            return p * p * (s1 * s2 * x / (1 - s1 * s2 * x) + p1 * p2 * x / (1 - p1 * p2 * x))

        return n ** 3 * z ** 3 * mp.quad(g, [1, 2, 10, mp.inf])

    k = HBAR_C_EV_NM / L
    val = mp.quad(inner, [0, k / 4, k, 10 * k, mp.inf])
    return -float(val) / (2 * math.pi ** 2 * HBAR_C_EV_NM ** 3) * EV_PER_NM3_TO_PA


class TestReflection:
    def test_k_layer(self):
        assert k_layer(1.0, 0.0, 0.3) == pytest.approx(0.3)
        assert k_layer(4.0, HBAR_C_EV_NM, 0.0) == pytest.approx(2.0)

    def test_k_layer_right_triangle(self):
        assert k_layer(1.0, HBAR_C_EV_NM * 0.03, 0.04) == pytest.approx(0.05, rel=1e-14)

    def test_static_limit(self):
        assert fresnel_r(1.0, 5.0, 0.0, 0.02, "s") == 0.0
        assert fresnel_r(1.0, 5.0, 0.0, 0.02, "p") == pytest.approx(4.0 / 6.0, rel=1e-14)

    def test_large_permittivity(self):
        assert fresnel_r(1.0, 1e8, 0.5, 0.01, "p") == pytest.approx(1.0, abs=1e-3)
        assert fresnel_r(1.0, 1e8, 0.5, 0.01, "s") == pytest.approx(-1.0, abs=1e-3)

    def test_identical_media_do_not_reflect(self):
        for pol in "sp":
            assert fresnel_r(3.0, 3.0, 1.0, 0.01, pol) == 0.0

    def test_perfect_conductor_limit(self):
        assert fresnel_r(1.0, 1e14, 1.0, 0.01, "s") == pytest.approx(-1.0, abs=1e-6)
        assert fresnel_r(1.0, 1e14, 1.0, 0.01, "p") == pytest.approx(1.0, abs=1e-6)

    def test_normal_incidence(self):
        # both polarizations reduce to (1 - n)/(1 + n) up to sign at Q = 0
        rs = fresnel_r(1.0, 4.0, 1.0, 0.0, "s")
        rp = fresnel_r(1.0, 4.0, 1.0, 0.0, "p")
        assert rs == pytest.approx(-1.0 / 3.0)
        assert rp == pytest.approx(1.0 / 3.0)

    @given(st.floats(1.0, 1e4), st.floats(1.0, 1e4), st.floats(1e-4, 10.0), st.floats(0.0, 1.0))
    def test_bounded(self, ea, eb, zeta, Q):
        for pol in "sp":
            assert abs(fresnel_r(ea, eb, zeta, Q, pol)) <= 1.0

    def test_bad_polarization(self):
        with pytest.raises(ValueError):
            fresnel_r(1.0, 2.0, 1.0, 0.1, "x")


class TestAnchors:
    @pytest.mark.parametrize("L", [50.0, 100.0, 300.0])
    def test_ideal_conductors(self, L):
        r = force_per_area(SlabSystem(IDEAL_SLAB, IDEAL_SLAB, L))
        assert r.eta == pytest.approx(1.0, abs=1e-6)
        assert r.force_pa == pytest.approx(casimir_ideal_force(L), rel=1e-6)

    def test_ideal_force_value(self):
        # pi^2 hbar c / (240 L^4) at 100 nm is about 13 Pa
        assert casimir_ideal_force(100.0) == pytest.approx(-13.0, abs=0.05)

    def test_vacuum_slab_gives_no_force(self):
        vac = Slab(CompositeSpec(Vacuum(), Vacuum(), 0.3), "bruggeman")
        r = force_per_area(SlabSystem(vac, drude_slab(), 100.0))
        assert r.force_pa == 0.0
        assert r.eta == 0.0

    def test_gap_matched_to_slab_gives_no_force(self):
        glass = Oscillators(((1.098, 13.38),))
        slab = Slab(CompositeSpec(glass, glass, 0.0), "bruggeman")
        r = force_per_area(SlabSystem(slab, drude_slab(), 100.0, gap=glass))
        assert r.force_pa == pytest.approx(0.0, abs=1e-15)

    def test_zero_filling_is_host_slab(self, sio2):
        composite = Slab(CompositeSpec(sio2, Drude(9.0, 0.035), 0.0), "bruggeman")
        pure = Slab(CompositeSpec(sio2, sio2, 1.0), "maxwell-garnett")
        a = force_per_area(SlabSystem(composite, composite, 100.0))
        b = force_per_area(SlabSystem(pure, pure, 100.0))
        assert a.force_pa == pytest.approx(b.force_pa, rel=1e-12)


class TestIndependentOracle:
    def test_drude_pair(self):
        d = Drude(9.0, 0.035)
        expected = textbook_force(d, d, 100.0)
        got = force_per_area(SlabSystem(drude_slab(), drude_slab(), 100.0))
        assert got.force_pa == pytest.approx(expected, rel=1e-5)
        assert abs(got.force_pa - expected) <= max(got.error_pa, 1e-5 * abs(expected))

    def test_glass_and_metal_across_dielectric_gap(self, sio2):
        d = Drude(9.0, 0.035)
        gap = Oscillators(((0.5, 10.0),))
        glass = Slab(CompositeSpec(sio2, sio2, 0.0), "bruggeman")
        expected = textbook_force(sio2, d, 150.0, eps_gap=gap)
        got = force_per_area(SlabSystem(glass, drude_slab(), 150.0, gap=gap))
        assert got.force_pa == pytest.approx(expected, rel=1e-5)
        # the dispersive gap medium weakens the attraction
        vacuum_gap = force_per_area(SlabSystem(glass, drude_slab(), 150.0))
        assert abs(got.force_pa) < abs(vacuum_gap.force_pa)


class TestProperties:
    def test_eta_in_unit_interval_and_decreasing_force(self, sio2, au):
        forces = []
        for L in (50.0, 100.0, 200.0, 400.0):
            slab = Slab(CompositeSpec(sio2, au, 0.25), "bruggeman")
            r = force_per_area(SlabSystem(slab, slab, L))
            assert 0.0 < r.eta < 1.0
            forces.append(abs(r.force_pa))
        assert all(b < a for a, b in zip(forces, forces[1:]))

    def test_metal_approaches_ideal_with_separation(self):
        etas = [reduction_factor(SlabSystem(drude_slab(), drude_slab(), L)) for L in (50.0, 200.0, 1000.0)]
        assert etas[0] < etas[1] < etas[2] < 1.0

    def test_swap_symmetry(self, sio2, au):
        a = Slab(CompositeSpec(sio2, au, 0.1), "looyenga")
        b = Slab(CompositeSpec(sio2, au, 0.4), "wiener-upper")
        s = SlabSystem(a, b, 120.0)
        assert force_per_area(s).force_pa == pytest.approx(force_per_area(s.swapped()).force_pa, rel=1e-12)

    def test_tighter_tolerance_stays_within_error_bound(self):
        s = SlabSystem(drude_slab(), drude_slab(), 100.0)
        coarse = force_per_area(s, QuadratureSpec(rel_tol=1e-4))
        fine = force_per_area(s, QuadratureSpec(rel_tol=1e-8))
        assert abs(coarse.force_pa - fine.force_pa) <= coarse.error_pa

    def test_separation_must_be_positive(self):
        with pytest.raises(ValueError):
            SlabSystem(IDEAL_SLAB, IDEAL_SLAB, 0.0)

    def test_non_ideal_slab_needs_composite(self):
        with pytest.raises(ValueError):
            Slab(None, "bruggeman")


class TestValidity:
    def test_examples(self):
        slab = Slab(CompositeSpec(Vacuum(), Drude(9.0, 0.035), 0.1, radius_nm=20.0), "bruggeman")
        assert validity_check(SlabSystem(slab, slab, 100.0))
        assert validity_check(SlabSystem(slab, slab, 1.6))
        assert not validity_check(SlabSystem(slab, slab, 1.5))
        assert not validity_check(SlabSystem(slab, slab, 1.0))

    def test_reported_not_blocking(self):
        slab = Slab(CompositeSpec(Vacuum(), Drude(9.0, 0.035), 0.1, radius_nm=2000.0), "bruggeman")
        r = force_per_area(SlabSystem(slab, slab, 100.0))
        assert not r.validity_ok
        assert r.eta > 0.0

    def test_ideal_slabs_always_valid(self):
        assert validity_check(SlabSystem(IDEAL_SLAB, IDEAL_SLAB, 1e-3))
