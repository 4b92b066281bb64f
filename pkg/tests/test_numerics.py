import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from composite_casimir.numerics import (
    AmbiguousRootError,
    ConvergenceError,
    InterpolationTable,
    InvalidIntegrandError,
    NoRealRootError,
    OutOfRangeError,
    QuadratureSpec,
    integrate,
    integrate_adaptive,
    interp_loglog,
    solve_quadratic_positive,
)


def bose_kernel(x):
    # x^3 / (e^x - 1) written to avoid overflow at large x
    return x ** 3 * np.exp(-x) / -np.expm1(-x)


class TestIntegrateAdaptive:
    def test_constant(self):
        assert integrate_adaptive(lambda x: np.ones_like(x), 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_exponential_half_line(self):
        spec = QuadratureSpec(rel_tol=1e-8)
        assert integrate_adaptive(lambda x: np.exp(-x), 0.0, math.inf, spec) == pytest.approx(1.0, rel=1e-8)

    def test_bose_kernel(self):
        spec = QuadratureSpec(rel_tol=1e-8)
        res = integrate(bose_kernel, 0.0, math.inf, spec)
        assert res.value == pytest.approx(math.pi ** 4 / 15, rel=1e-8)
        assert abs(res.value - math.pi ** 4 / 15) <= res.error

    def test_shifted_half_line(self):
        val = integrate_adaptive(lambda x: np.exp(-x), 2.0, math.inf, QuadratureSpec(rel_tol=1e-9))
        assert val == pytest.approx(math.exp(-2.0), rel=1e-9)

    def test_breakpoints_handle_kinks(self):
        f = lambda x: np.abs(x - 0.3) + np.abs(x - 0.7)
        exact = 0.5 * 0.3 ** 2 + 0.5 * 0.7 ** 2 + 0.5 * 0.7 ** 2 + 0.5 * 0.3 ** 2
        val = integrate(f, 0.0, 1.0, points=[0.3, 0.7])
        assert val.value == pytest.approx(exact, rel=1e-13)
        assert val.subdivisions == 0

    def test_endpoint_singularity(self):
        val = integrate_adaptive(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0, QuadratureSpec(rel_tol=1e-7, max_subdivisions=2000))
        assert val == pytest.approx(2.0, rel=1e-6)

    def test_nan_integrand(self):
        with pytest.raises(InvalidIntegrandError):
            integrate_adaptive(lambda x: np.full_like(x, np.nan), 0.0, 1.0)

    def test_nonconvergence_carries_estimate(self):
        spec = QuadratureSpec(rel_tol=1e-14, max_subdivisions=3)
        with pytest.raises(ConvergenceError) as info:
            integrate_adaptive(lambda x: np.sin(40 * x) ** 2, 0.0, 10.0, spec)
        assert info.value.estimate == pytest.approx(5.0, rel=0.2)
        assert info.value.error > 0

    def test_error_bound_stable_under_more_subdivisions(self):
        f = lambda x: np.sin(25 * x) ** 2 / (1 + x * x)
        def estimate(n):
            try:
                r = integrate(f, 0.0, math.inf, QuadratureSpec(rel_tol=1e-13, max_subdivisions=n))
                return r.value, r.error
            except ConvergenceError as exc:
                return exc.estimate, exc.error
        for n in (20, 40, 80):
            v1, e1 = estimate(n)
            v2, _ = estimate(2 * n)
            assert abs(v2 - v1) < 2 * e1

    def test_bad_limits(self):
        with pytest.raises(ValueError):
            integrate_adaptive(lambda x: x, 1.0, 0.0)

    @pytest.mark.parametrize("kw", [dict(rel_tol=0.0), dict(rel_tol=1.0), dict(abs_tol=0.0), dict(max_subdivisions=0)])
    def test_spec_invariants(self, kw):
        with pytest.raises(ValueError):
            QuadratureSpec(**kw)


class TestQuadratic:
    @pytest.mark.parametrize(
        "coeffs, root",
        [((1, 0, -4), 2.0), ((2, -5.5, -10), 4.0), ((1, -2, 1), 1.0)],
    )
    def test_examples(self, coeffs, root):
        assert solve_quadratic_positive(*coeffs) == root

    def test_bruggeman_instance_satisfies_condition(self):
        r = solve_quadratic_positive(2, -5.5, -10)
        ei, eh, f = 10.0, 1.0, 0.5
        assert f * (ei - r) / (ei + 2 * r) + (1 - f) * (eh - r) / (eh + 2 * r) == 0.0

    def test_no_real_root(self):
        with pytest.raises(NoRealRootError):
            solve_quadratic_positive(1, 0, 4)

    @pytest.mark.parametrize("coeffs", [(1, -3, 2), (1, 3, 2)])
    def test_ambiguous(self, coeffs):
        with pytest.raises(AmbiguousRootError):
            solve_quadratic_positive(*coeffs)

    @settings(max_examples=300)
    @given(
        st.floats(1e-3, 1e4),
        st.floats(-1e8, 1e8),
        st.floats(1e-6, 1e12),
    )
    def test_residual(self, a2, a1, c):
        # a0 < 0 < a2 guarantees exactly one positive root
        a0 = -c
        r = solve_quadratic_positive(a2, a1, a0)
        scale = max(abs(a2 * r * r), abs(a1 * r), abs(a0))
        assert abs(a2 * r * r + a1 * r + a0) <= 1e-10 * scale


class TestInterpolation:
    def test_examples(self):
        assert interp_loglog(InterpolationTable((1, 10), (1, 10)), 1.0) == 1.0
        assert interp_loglog(InterpolationTable((1, 100), (1, 10000)), 10.0) == pytest.approx(100.0, rel=1e-14)
        assert interp_loglog(InterpolationTable((1, 10), (5, 5)), 3.0) == pytest.approx(5.0, rel=1e-15)

    def test_nodes_exact(self):
        x = (0.1, 0.37, 2.0, 9.5)
        y = (3.3, 0.0071, 12.0, 1e5)
        t = InterpolationTable(x, y)
        np.testing.assert_array_equal(interp_loglog(t, np.array(x)), np.array(y))

    def test_out_of_range(self):
        t = InterpolationTable((1, 10), (1, 10))
        with pytest.raises(OutOfRangeError):
            interp_loglog(t, 0.5)
        with pytest.raises(OutOfRangeError):
            interp_loglog(t, 10.5)

    @pytest.mark.parametrize("x, y", [((1,), (1,)), ((1, 2), (1,)), ((2, 1), (1, 1)), ((-1, 1), (1, 1))])
    def test_table_invariants(self, x, y):
        with pytest.raises(ValueError):
            InterpolationTable(x, y)

    @given(
        c=st.floats(1e-3, 1e3),
        p=st.floats(-4, 4),
        nodes=st.lists(st.floats(1e-2, 1e2), min_size=2, max_size=8, unique=True),
        frac=st.floats(0, 1),
    )
    def test_power_law_reproduced(self, c, p, nodes, frac):
        x = sorted(nodes)
        if x[-1] / x[0] < 1.0001:
            return
        t = InterpolationTable(x, [c * v ** p for v in x])
        q = x[0] * (x[-1] / x[0]) ** frac
        q = min(max(q, x[0]), x[-1])
        assert interp_loglog(t, q) == pytest.approx(c * q ** p, rel=1e-12)
