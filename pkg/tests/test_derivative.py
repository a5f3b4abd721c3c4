import math

import numpy as np
import pytest

from noncoh import capacity
from noncoh.channel import ChannelParams, TwoPointInput
from noncoh.errors import DegenerateInput, DomainError, NearSingularAlpha
from noncoh.mi import mi_derivative_a2, mutual_information
from noncoh.oracle import FDOrder, fd_derivative


def _mi_capacity(a2, snr, sigma2=1.0):
    ch = ChannelParams(sigma2=sigma2, power_budget=snr * sigma2)
    return mutual_information(TwoPointInput(a2, math.sqrt(ch.power_budget / a2)), ch).nats


class TestFixedX2Mode:
    def test_example_point(self):
        ch = ChannelParams(1.0)
        inp = TwoPointInput(0.4, 2.0)
        ana = mi_derivative_a2(inp, ch)
        num = fd_derivative(
            lambda t: mutual_information(TwoPointInput(t, 2.0), ch).nats,
            0.4,
            FDOrder.CENTRAL5,
        )
        assert ana == pytest.approx(num, rel=1e-5)

    def test_more_points(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            a2 = float(rng.uniform(0.1, 0.9))
            x2 = float(10 ** rng.uniform(-0.4, 0.8))
            ch = ChannelParams(1.0)
            try:
                ana = mi_derivative_a2(TwoPointInput(a2, x2), ch)
            except NearSingularAlpha:
                continue
            num = fd_derivative(
                lambda t: mutual_information(TwoPointInput(t, x2), ch).nats,
                a2,
                FDOrder.CENTRAL5,
            )
            assert ana == pytest.approx(num, rel=1e-5)


class TestCapacityMode:
    @pytest.mark.parametrize(
        "a2,snr", [(0.3, 1.0), (0.7, 10.0), (0.15, 0.5), (0.5, 1000.0)]
    )
    def test_against_finite_differences(self, a2, snr):
        ch = ChannelParams(sigma2=1.0, power_budget=snr)
        inp = TwoPointInput(a2, math.sqrt(snr / a2))
        ana = mi_derivative_a2(inp, ch)
        num = fd_derivative(lambda t: _mi_capacity(t, snr), a2, FDOrder.CENTRAL5)
        assert ana == pytest.approx(num, rel=1e-5)

    def test_x2_tie_enforced(self):
        ch = ChannelParams(sigma2=1.0, power_budget=1.0)
        with pytest.raises(DomainError):
            mi_derivative_a2(TwoPointInput(0.5, 3.0), ch)

    def test_zero_at_solved_optimum(self):
        pt = capacity.solve_a2_star(1.0)
        ch = ChannelParams(sigma2=1.0, power_budget=1.0)
        inp = TwoPointInput(pt.a2_star, math.sqrt(1.0 / pt.a2_star))
        assert abs(mi_derivative_a2(inp, ch)) <= 1e-10

    def test_sign_pattern_at_5db(self):
        # a single interior maximum: positive below a2*, negative above
        snr = 10.0**0.5
        pt = capacity.solve_a2_star(snr)
        ch = ChannelParams(sigma2=1.0, power_budget=snr)
        below = TwoPointInput(0.1, math.sqrt(snr / 0.1))
        above = TwoPointInput(min(0.95, pt.a2_star + 0.2),
                              math.sqrt(snr / min(0.95, pt.a2_star + 0.2)))
        assert mi_derivative_a2(below, ch) > 0.0
        assert mi_derivative_a2(above, ch) < 0.0

    def test_degenerate(self):
        ch = ChannelParams(sigma2=1.0, power_budget=1.0)
        with pytest.raises(DegenerateInput):
            mi_derivative_a2(TwoPointInput(0.0, 1.0), ch)

    def test_guard_band(self):
        # sigma^2/x2^2 integer => alpha = 1/n
        ch = ChannelParams(sigma2=1.0)
        with pytest.raises(NearSingularAlpha):
            mi_derivative_a2(TwoPointInput(0.4, 1.0), ch)


class TestRandomGrid:
    def test_fifty_points(self):
        from noncoh.verify import check_derivative

        res = check_derivative(points=50, seed=99)
        assert res.passed, res.line()
        assert res.worst <= 1e-5


class TestFdDerivative:
    def test_square(self):
        assert fd_derivative(lambda t: t * t, 3.0, FDOrder.CENTRAL5) == pytest.approx(
            6.0, abs=1e-9
        )
        assert fd_derivative(lambda t: t * t, 3.0, FDOrder.CENTRAL3) == pytest.approx(
            6.0, abs=1e-8
        )

    def test_constant(self):
        assert abs(fd_derivative(lambda t: 4.2, 0.3, FDOrder.CENTRAL5)) <= 1e-12

    def test_cross_oracle_on_mi(self):
        ch = ChannelParams(1.0)
        num = fd_derivative(
            lambda t: mutual_information(TwoPointInput(t, 2.0), ch).nats,
            0.4,
            FDOrder.CENTRAL5,
        )
        assert mi_derivative_a2(TwoPointInput(0.4, 2.0), ch) == pytest.approx(
            num, rel=1e-5
        )
