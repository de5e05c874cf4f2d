import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weakzeno import tunneling_time as tt
from weakzeno.constants import HBAR
from weakzeno.dissipation import EnergyTriple, decay_gamma
from weakzeno.errors import DomainError, DomainWarning

COTH, TANH = tt.DwellForm.PAPER_COTH, tt.DwellForm.DERIVED_TANH


def window(tau):
    return tt.MeasurementWindow.of_length(tau)


class TestMeasurementWindow:
    def test_tau_m(self):
        assert tt.MeasurementWindow(1.0, 3.5).tau_m == 2.5

    @pytest.mark.parametrize("t_i,t_f", [(1.0, 1.0), (2.0, 1.0)])
    def test_rejects_empty(self, t_i, t_f):
        with pytest.raises(DomainError):
            tt.MeasurementWindow(t_i, t_f)


class TestDwellIntegrand:
    def test_endpoints(self):
        w = tt.MeasurementWindow(1.0, 3.0)
        assert tt.dwell_integrand(1.0, 0.7, w) == pytest.approx(1.0)
        assert tt.dwell_integrand(3.0, 0.7, w) == 0.0

    def test_zero_gamma_ramp(self):
        w = tt.MeasurementWindow(0.0, 2.0)
        assert tt.dwell_integrand(1.0, 0.0, w) == 0.5

    def test_tiny_gamma_continuous(self):
        w = window(2.0)
        assert tt.dwell_integrand(1.0, 1e-12, w) == pytest.approx(0.5, rel=1e-9)

    def test_negative_gamma(self):
        with pytest.raises(DomainError):
            tt.dwell_integrand(0.5, -1.0, window(1.0))

    def test_outside_window(self):
        with pytest.raises(DomainError):
            tt.dwell_integrand(2.0, 1.0, window(1.0))


class TestDwellTimes:
    def test_numeric_example(self):
        assert tt.dwell_weak_numeric(1.0, window(2.0)) == pytest.approx(0.761594156, rel=1e-9)

    def test_numeric_zero_gamma(self):
        assert tt.dwell_weak_numeric(0.0, window(3.0)) == 1.5

    def test_numeric_saturates(self):
        assert tt.dwell_weak_numeric(100.0, window(1.0)) == pytest.approx(0.01, rel=1e-6)

    def test_numeric_picosecond_scale(self):
        gamma, tau = 6.5e10, 3e-11
        numeric = tt.dwell_weak_numeric(gamma, window(tau))
        assert numeric == pytest.approx(math.tanh(gamma * tau / 2) / gamma, rel=1e-10)

    def test_closed_examples(self):
        assert tt.dwell_closed(1.0, window(2.0), COTH) == pytest.approx(1.313035285, rel=1e-9)
        assert tt.dwell_closed(1.0, window(2.0), TANH) == pytest.approx(0.761594156, rel=1e-9)

    def test_default_form_is_coth(self):
        assert tt.dwell_closed(1.0, window(2.0)) == tt.dwell_closed(1.0, window(2.0), COTH)

    def test_coth_saturates(self):
        assert tt.dwell_closed(2.0, window(100.0), COTH) == pytest.approx(0.5)

    def test_coth_pole(self):
        with pytest.raises(DomainError, match="coth"):
            tt.dwell_closed(0.0, window(1.0), COTH)

    def test_tanh_zero_gamma(self):
        assert tt.dwell_closed(0.0, window(4.0), TANH) == 2.0

    def test_form_values(self):
        assert tt.DwellForm("paper-coth") is COTH
        assert tt.DwellForm("derived-tanh") is TANH

    @given(gamma=st.floats(1e-3, 1e3), tau=st.floats(1e-3, 1e2))
    def test_duality(self, gamma, tau):
        w = window(tau)
        product = tt.dwell_closed(gamma, w, COTH) * tt.dwell_closed(gamma, w, TANH) * gamma**2
        assert product == pytest.approx(1.0, rel=1e-12)

    @given(gamma=st.floats(1e-3, 1e3), tau=st.floats(1e-3, 1e2))
    def test_tanh_bounds(self, gamma, tau):
        d = tt.dwell_closed(gamma, window(tau), TANH)
        assert d <= 1 / gamma * (1 + 1e-15)
        assert d <= tau / 2 * (1 + 1e-15)

    @given(gamma=st.floats(1e-3, 1e3), tau=st.floats(1e-3, 1e2), factor=st.floats(1.01, 10))
    def test_tanh_increasing_in_tau(self, gamma, tau, factor):
        assert tt.dwell_closed(gamma, window(tau * factor), TANH) >= tt.dwell_closed(gamma, window(tau), TANH)

    @pytest.mark.parametrize("g_tau", [0.1, 0.03, 0.01, 0.001])
    def test_product_rule(self, g_tau):
        gamma = 2.0
        tau = g_tau / gamma
        product = tt.dwell_closed(gamma, window(tau), COTH) * tau
        assert abs(product * gamma**2 / 2 - 1) <= g_tau**2 / 12 * 3


class TestEnergyVariance:
    def test_eigenstate(self):
        assert tt.energy_variance(2.0, 4.0) == 0.0

    def test_square_root(self):
        assert tt.energy_variance(0.0, 1e-46) == pytest.approx(1e-23)

    def test_rounding_clamped(self):
        assert tt.energy_variance(1.0, 1.0 - 1e-15) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            tt.energy_variance(1.0, 0.5)


class TestSurvival:
    def test_short(self):
        assert tt.survival_short(1e-23, 0.0) == 1.0
        assert tt.survival_short(1e-23, 0.1 * HBAR / 1e-23) == pytest.approx(0.99)

    def test_short_boundary_flagged(self):
        with pytest.warns(DomainWarning):
            assert tt.survival_short(1e-23, HBAR / 1e-23) == pytest.approx(0.0, abs=1e-15)

    def test_short_clamped(self):
        with pytest.warns(DomainWarning):
            assert tt.survival_short(1e-23, 3 * HBAR / 1e-23) == 0.0

    def test_pulsed_examples(self):
        assert tt.survival_pulsed(0.1, 1.0, 10.0) == pytest.approx(0.99**100, rel=1e-12)
        assert tt.survival_pulsed(0.1, 1.0, 10.0) == pytest.approx(0.36603, rel=1e-5)
        assert tt.survival_pulsed(0.01, 1.0, 1.0) == pytest.approx(0.990049, abs=5e-7)

    def test_pulsed_frozen_limit(self):
        assert tt.survival_pulsed(0.0, 1.0, 5.0) == 1.0
        assert tt.survival_pulsed(1e-9, 1.0, 1.0) == pytest.approx(1.0, abs=1e-8)

    def test_pulsed_real_exponent(self):
        # T/tau_m = 2.5 is used as is
        assert tt.survival_pulsed(0.2, 1.0, 0.5) == pytest.approx(0.96**2.5, rel=1e-14)

    def test_pulsed_domain(self):
        with pytest.raises(DomainError):
            tt.survival_pulsed(2.0, 1.0, 4.0)
        with pytest.raises(DomainError):
            tt.survival_pulsed(0.1, 0.0, 4.0)

    def test_integer_mode(self):
        p, rest = tt.survival_pulsed_integer(0.2, 1.0, 0.5)
        assert p == pytest.approx(0.96**2)
        assert rest == pytest.approx(0.1)

    def test_integer_mode_exact_multiple(self):
        p, rest = tt.survival_pulsed_integer(0.1, 1.0, 0.3)
        assert p == pytest.approx(0.99**3)
        assert rest == pytest.approx(0.0, abs=1e-15)

    def test_exponential(self):
        assert tt.survival_exponential(0.0, 1.0, 3.0) == 1.0
        assert tt.survival_exponential(0.01, 1.0, 1.0) == pytest.approx(0.990050, abs=5e-7)
        assert tt.survival_exponential(1.0, 1.0, 1.0) == pytest.approx(math.exp(-1))

    @given(ratio=st.floats(1e-3, 0.1), n=st.floats(1, 1e4))
    def test_pulsed_near_exponential(self, ratio, n):
        tau_m = ratio
        total = n * tau_m
        gap = abs(tt.survival_pulsed(tau_m, 1.0, total) - tt.survival_exponential(tau_m, 1.0, total))
        assert gap <= 2 * ratio**4 * n

    @given(ratio=st.floats(1e-4, 0.99), total=st.floats(1e-3, 1e2))
    def test_more_pulses_more_survival(self, ratio, total):
        assert tt.survival_pulsed(ratio / 2, 1.0, total) >= tt.survival_pulsed(ratio, 1.0, total)

    @given(ratio=st.floats(0.0, 0.999), total=st.floats(0, 1e3))
    def test_probability_range(self, ratio, total):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            p = tt.survival_pulsed(ratio, 1.0, total)
        assert 0.0 <= p <= 1.0


class TestZenoTimes:
    def test_variance(self):
        assert tt.zeno_time_variance(HBAR) == 1.0
        assert tt.zeno_time_variance(6.9e-24) == pytest.approx(1.5284e-11, rel=1e-4)
        assert tt.zeno_time_variance(1e-23) == pytest.approx(1.0546e-11, rel=1e-4)

    def test_variance_eigenstate(self):
        with pytest.raises(DomainError):
            tt.zeno_time_variance(0.0)

    def test_geometric(self):
        assert tt.zeno_time_geometric(1.0, 1.0) == 1.0
        assert tt.zeno_time_geometric(4.0, 1.0) == 2.0
        with pytest.raises(DomainError):
            tt.zeno_time_geometric(0.0, 1.0)

    def test_weak_operating_point(self):
        e = EnergyTriple.from_gaps(6.9e-24, 6.9e-24)
        assert tt.zeno_time_weak(e) == pytest.approx(2.1614e-11, rel=1e-4)

    def test_weak_unit_gaps(self):
        assert tt.zeno_time_weak(EnergyTriple.from_gaps(HBAR, HBAR)) == pytest.approx(math.sqrt(2))

    def test_weak_without_dissipation(self):
        with pytest.raises(DomainError):
            tt.zeno_time_weak(EnergyTriple(h_i=1.0, h_f=1.0, h_0=0.0))

    def test_weak_via_geometric_chain(self):
        e = EnergyTriple.from_gaps(2e-24, 9e-24)
        gamma = decay_gamma(e)
        tau_m = 1e-4 / gamma
        tau_l = tt.dwell_closed(gamma, window(tau_m), COTH)
        assert tt.zeno_time_geometric(tau_l, tau_m) == pytest.approx(tt.zeno_time_weak(e), rel=1e-7)

    def test_dispatch_priority(self):
        e = EnergyTriple.from_gaps(6.9e-24, 6.9e-24)
        assert tt.zeno_time(tt.ZenoInputs(delta_h=1e-23, energies=e))[0] == "zeno_time_weak"
        assert tt.zeno_time(tt.ZenoInputs(delta_h=HBAR)) == ("zeno_time_variance", 1.0)
        assert tt.zeno_time(tt.ZenoInputs(tau_l=4.0, tau_m=1.0)) == ("zeno_time_geometric", 2.0)

    def test_dispatch_incomplete(self):
        with pytest.raises(DomainError):
            tt.zeno_time(tt.ZenoInputs(tau_l=1.0))

    def test_inputs_nonnegative(self):
        with pytest.raises(DomainError):
            tt.ZenoInputs(delta_h=-1.0)
