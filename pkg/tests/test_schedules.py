import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieopt.schedules import ConstantGamma, Corrected, NagC, damp_factor, kick_weight

SCHEDULES = [
    ConstantGamma(0.0),
    ConstantGamma(1.0),
    ConstantGamma(2.5),
    NagC(),
    Corrected(ConstantGamma(1.0), 0.01),
    Corrected(NagC(), 0.01),
    Corrected(ConstantGamma(1.0), 0.5),
]


def brute_force_weight(schedule, t_a, t_b, panels=20000):
    """Trapezoid quadrature of r(s)/r(t_mid); independent of the closed forms."""
    t_mid = 0.5 * (t_a + t_b)

    def ratio(s):
        if isinstance(schedule, ConstantGamma):
            return math.exp(schedule.gamma * (s - t_mid))
        if isinstance(schedule, NagC):
            return (s / t_mid) ** 3 if t_mid != 0 else 0.0
        base = schedule.base
        extra = math.exp(0.5 * schedule.c * (s * s - t_mid * t_mid))
        if isinstance(base, ConstantGamma):
            return math.exp(base.gamma * (s - t_mid)) * extra
        return ((s / t_mid) ** 3 if t_mid != 0 else 0.0) * extra

    grid = np.linspace(t_a, t_b, panels + 1)
    vals = np.array([ratio(s) for s in grid])
    return float(np.trapezoid(vals, grid))


class TestDampFactor:
    def test_constant_gamma_value(self):
        assert math.isclose(damp_factor(ConstantGamma(1.0), 0.0, 0.05), math.exp(-0.05))

    def test_nag_c_value(self):
        # (t_a/t_b)^3 at t_a=0.1, t_b=0.15 equals (2/3)^3
        assert math.isclose(damp_factor(NagC(), 0.1, 0.15), (2.0 / 3.0) ** 3)

    @pytest.mark.parametrize("schedule", SCHEDULES)
    def test_zero_interval_is_one(self, schedule):
        assert damp_factor(schedule, 0.0, 0.0) == 1.0
        assert damp_factor(schedule, 0.7, 0.7) == 1.0

    def test_nag_c_zero_start(self):
        assert damp_factor(NagC(), 0.0, 0.05) == 0.0
        assert damp_factor(Corrected(NagC(), 0.01), 0.0, 0.05) == 0.0

    def test_corrected_combines_base_and_extra(self):
        sched = Corrected(ConstantGamma(2.0), 0.1)
        t_a, t_b = 0.3, 0.8
        expect = math.exp(-2.0 * 0.5) * math.exp(-0.1 * (t_b**2 - t_a**2) / 2)
        assert math.isclose(damp_factor(sched, t_a, t_b), expect)

    def test_backward_interval_amplifies(self):
        assert damp_factor(ConstantGamma(1.0), 0.5, 0.4) > 1.0

    def test_large_times_no_overflow(self):
        # ratios stay bounded even where r itself would overflow
        sched = Corrected(ConstantGamma(1.0), 0.01)
        factor = damp_factor(sched, 5000.0, 5000.5)
        assert 0.0 < factor < 1.0


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(SCHEDULES),
    st.floats(0.0, 50.0),
    st.floats(0.0, 2.0),
    st.floats(0.0, 2.0),
)
def test_damp_factor_range_and_composition(schedule, start, d1, d2):
    t_a, t_b, t_c = start, start + d1, start + d1 + d2
    f_ab = damp_factor(schedule, t_a, t_b)
    f_bc = damp_factor(schedule, t_b, t_c)
    f_ac = damp_factor(schedule, t_a, t_c)
    assert 0.0 <= f_ab <= 1.0
    assert math.isclose(f_ab * f_bc, f_ac, rel_tol=1e-12, abs_tol=1e-300)


class TestKickWeight:
    def test_no_friction_reduces_to_interval(self):
        assert kick_weight(ConstantGamma(0.0), 0.3, 0.7) == 0.7 - 0.3

    def test_zero_interval(self):
        assert kick_weight(NagC(), 0.2, 0.2) == 0.0

    @pytest.mark.parametrize("schedule", SCHEDULES)
    @pytest.mark.parametrize("t_a,t_b", [(0.0, 0.08), (0.5, 0.62), (3.0, 3.4), (1.0, 0.9)])
    def test_matches_brute_force_quadrature(self, schedule, t_a, t_b):
        got = kick_weight(schedule, t_a, t_b)
        want = brute_force_weight(schedule, t_a, t_b)
        assert got == pytest.approx(want, rel=1e-7, abs=1e-12)

    def test_exactness_makes_damped_kick_flow_exact(self):
        # damp(t_a, mid) -> kick_weight impulse -> damp(mid, t_b) must equal
        # the analytic solution of xi' = -gamma xi + f with frozen f
        gamma, f = 1.3, 0.77
        t_a, t_b = 0.25, 0.85
        sched = ConstantGamma(gamma)
        t_mid = 0.5 * (t_a + t_b)
        xi = 0.4
        xi = xi * damp_factor(sched, t_a, t_mid)
        xi = xi + kick_weight(sched, t_a, t_b) * f
        xi = xi * damp_factor(sched, t_mid, t_b)
        span = t_b - t_a
        exact = 0.4 * math.exp(-gamma * span) + f * (1 - math.exp(-gamma * span)) / gamma
        assert math.isclose(xi, exact, rel_tol=1e-14)


def test_corrected_validation():
    with pytest.raises(ValueError):
        Corrected(ConstantGamma(1.0), 0.0)
    with pytest.raises(TypeError):
        Corrected("nope", 0.1)
    with pytest.raises(ValueError):
        ConstantGamma(-0.5)
