import math

import numpy as np
import pytest
from scipy.linalg import expm

from weakzeno import zeno_sim as zs
from weakzeno.constants import HBAR
from weakzeno.errors import DomainError, StepSizeError
from weakzeno.numerics import solve_ode_complex
from weakzeno.tunneling_time import survival_pulsed


@pytest.fixture(scope="module")
def model():
    return zs.BathModel(n_levels=16, delta_e=1e-26, coupling=1e-25)


class TestBathModel:
    def test_levels_skip_reference(self):
        m = zs.BathModel(n_levels=3, delta_e=1.0, coupling=1.0)
        assert m.levels.tolist() == [-3, -2, -1, 1, 2, 3]
        assert m.dimension == 7

    def test_spread_and_zeno_time(self, model):
        assert model.energy_spread == pytest.approx(1e-25 * math.sqrt(32))
        assert model.zeno_time == pytest.approx(HBAR / (1e-25 * math.sqrt(32)))

    def test_spread_matches_hamiltonian_variance(self, model):
        h = model.hamiltonian()
        psi = np.zeros(model.dimension)
        psi[0] = 1.0
        mean = psi @ h @ psi
        var = psi @ h @ h @ psi - mean**2
        assert math.sqrt(var) == pytest.approx(model.energy_spread, rel=1e-12)

    def test_uncoupled(self):
        m = zs.BathModel(n_levels=2, delta_e=1e-26, coupling=0.0)
        assert m.zeno_time == math.inf
        assert m.max_dt() == pytest.approx(0.1 * HBAR / 2e-26)

    def test_invalid(self):
        with pytest.raises(DomainError):
            zs.BathModel(n_levels=0, delta_e=1.0, coupling=1.0)
        with pytest.raises(DomainError):
            zs.BathModel(n_levels=2, delta_e=-1.0, coupling=1.0)

    def test_golden_rule_construction(self):
        m = zs.BathModel.for_target_gamma(1e9, n_levels=32)
        assert math.pi * m.coupling**2 / (HBAR * m.delta_e) == pytest.approx(1e9)
        with pytest.raises(DomainError):
            zs.BathModel.for_target_gamma(0.0)


class TestRhs:
    def test_shape_checked(self, model):
        with pytest.raises(DomainError):
            zs.bath_rhs(0.0, np.zeros(3, complex), model)

    def test_initial_derivative(self, model):
        y = np.zeros(model.dimension, complex)
        y[0] = 1.0
        dy = zs.bath_rhs(0.0, y, model)
        assert dy[0] == 0
        assert np.allclose(dy[1:], -1j * model.coupling / HBAR)

    def test_uncoupled_derivative_vanishes(self):
        m = zs.BathModel(n_levels=4, delta_e=1e-26, coupling=0.0)
        y = np.linspace(0, 1, m.dimension) + 0.5j
        assert np.all(zs.bath_rhs(3e-12, y, m) == 0)


class TestEvolution:
    def test_matches_matrix_exponential(self, model):
        t_end = 2 * model.zeno_time
        traj = zs.evolve_bath(model, t_end, model.max_dt() / 2, keep_amplitudes=True)
        psi0 = np.zeros(model.dimension, complex)
        psi0[0] = 1.0
        exact = expm(-1j * model.hamiltonian() * t_end / HBAR) @ psi0
        # interaction picture: bath amplitudes carry exp(+i E_n t / hbar)
        phases = np.exp(1j * model.levels * model.delta_e * t_end / HBAR)
        assert traj.amplitudes[-1, 0] == pytest.approx(exact[0], abs=1e-9)
        assert np.allclose(traj.amplitudes[-1, 1:], exact[1:] * phases, atol=1e-9)

    def test_norm_conserved(self, model):
        traj = zs.evolve_bath(model, 3 * model.zeno_time, model.max_dt())
        assert np.max(np.abs(traj.norm - 1)) < 1e-8

    def test_symmetric_ladder(self, model):
        traj = zs.evolve_bath(model, model.zeno_time, model.max_dt(), keep_amplitudes=True)
        final = traj.amplitudes[-1, 1:]
        # populations mirror under n -> -n
        assert np.allclose(np.abs(final), np.abs(final[::-1]), atol=1e-12)

    def test_time_reversal(self, model):
        t_end = model.zeno_time
        dt = model.max_dt()
        traj = zs.evolve_bath(model, t_end, dt, keep_amplitudes=True)

        def backward(s, y):
            return -zs.bath_rhs(t_end - s, y, model)

        _, states = solve_ode_complex(backward, traj.amplitudes[-1], 0.0, t_end, dt)
        assert abs(states[-1, 0] - 1.0) < 1e-6
        assert np.max(np.abs(states[-1, 1:])) < 1e-6

    def test_step_halving_fourth_order(self, model):
        t_end = 3 * model.zeno_time
        base = model.max_dt()
        a = [zs.evolve_bath(model, t_end, base / k).a0[-1] for k in (1, 2, 4)]
        assert abs(a[0] - a[1]) / abs(a[1] - a[2]) == pytest.approx(16, abs=2)

    def test_uncoupled_stays(self):
        m = zs.BathModel(n_levels=1, delta_e=1e-26, coupling=0.0)
        traj = zs.evolve_bath(m, 1e-9, m.max_dt())
        assert np.all(traj.p_survival == 1.0)

    def test_step_too_large(self, model):
        with pytest.raises(StepSizeError) as info:
            zs.evolve_bath(model, model.zeno_time, 10 * model.max_dt())
        assert info.value.suggested_dt == pytest.approx(model.max_dt())

    def test_negative_time(self, model):
        with pytest.raises(DomainError):
            zs.evolve_bath(model, -1.0, model.max_dt())


class TestFits:
    def test_short_time_quadratic(self, model):
        traj = zs.evolve_bath(model, 0.05 * model.zeno_time, 1e-4 * model.zeno_time)
        fit = zs.short_time_exponent(traj)
        assert fit.slope == pytest.approx(2.0, abs=0.05)
        assert fit.r_squared > 0.999

    def test_short_time_needs_samples(self, model):
        traj = zs.evolve_bath(model, 0.05 * model.zeno_time, 0.01 * model.zeno_time)
        with pytest.raises(ValueError, match="samples"):
            zs.short_time_exponent(traj)

    def test_synthetic_quadratic(self):
        t = np.linspace(0, 1e-3, 200)
        traj = zs.AmplitudeTrajectory(t, np.sqrt(1 - 5.0 * t**2) + 0j, 5.0 * t**2)
        fit = zs.short_time_exponent(traj)
        assert fit.slope == pytest.approx(2.0, abs=1e-6)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-9)

    def test_synthetic_exponential_slope_one(self):
        t = np.linspace(0, 1e-3, 200)
        p = np.exp(-t)
        traj = zs.AmplitudeTrajectory(t, np.sqrt(p) + 0j, 1 - p)
        assert zs.short_time_exponent(traj).slope == pytest.approx(1.0, abs=1e-3)

    def test_synthetic_decay_rate(self):
        t = np.linspace(0, 5e-9, 500)
        traj = zs.AmplitudeTrajectory(t, np.exp(-1e9 * t) + 0j, 1 - np.exp(-2e9 * t))
        assert zs.fit_decay_rate(traj, (1e-9, 4e-9)).gamma == pytest.approx(1e9, rel=1e-6)

    def test_uncoupled_rate_zero(self):
        m = zs.BathModel(n_levels=2, delta_e=1e-26, coupling=0.0)
        traj = zs.evolve_bath(m, 1e-9, m.max_dt())
        assert zs.fit_decay_rate(traj, (0.0, 1e-9)).gamma == 0.0

    def test_exponential_regime_dense_bath(self):
        m = zs.BathModel.for_target_gamma(1e9, n_levels=256)
        traj = zs.evolve_bath(m, 4e-9, m.max_dt())
        window = zs.default_decay_window(traj)
        decay = zs.fit_decay_rate(traj, window)
        # golden rule: |a_0| decays at pi H^2 / (hbar dE), P at twice that
        assert decay.gamma == pytest.approx(1e9, rel=0.1)
        assert decay.fit.r_squared > 0.99

    def test_fit_window_validation(self, model):
        traj = zs.evolve_bath(model, model.zeno_time, model.max_dt())
        with pytest.raises(ValueError):
            zs.fit_decay_rate(traj, (1.0, 0.5))
        with pytest.raises(ValueError):
            zs.fit_decay_rate(traj, (0.0, 10 * model.zeno_time))

    def test_default_window_none_on_plateau(self, model):
        traj = zs.evolve_bath(model, 0.1 * model.zeno_time, model.max_dt())
        assert zs.default_decay_window(traj) is None


class TestRepeatedMeasurement:
    def test_schedule(self):
        s = zs.MeasurementSchedule.from_pulses(1.0, 10)
        assert s.n_pulses == 10
        with pytest.raises(DomainError):
            zs.MeasurementSchedule(1.0, 2.0)
        with pytest.raises(DomainError):
            zs.MeasurementSchedule(1.0, 0.0)

    def test_single_trivial(self, model):
        assert zs.survival_single(model, 0.0, model.max_dt()) == 1.0

    def test_single_short_interval(self, model):
        tau = 0.005 * model.zeno_time
        expected = 1 - 2 * model.n_levels * (model.coupling * tau / HBAR) ** 2
        assert 1 - zs.survival_single(model, tau, model.max_dt()) == pytest.approx(1 - expected, rel=0.01)

    def test_one_pulse_is_single_evolution(self, model):
        total = 0.7 * model.zeno_time
        schedule = zs.MeasurementSchedule.from_pulses(total, 1)
        assert zs.survival_repeated(model, schedule, model.max_dt()) == zs.survival_single(model, total, model.max_dt())

    def test_zeno_ordering(self, model):
        total = 0.5 * model.zeno_time
        values = [
            zs.survival_repeated(model, zs.MeasurementSchedule.from_pulses(total, n), model.max_dt())
            for n in (1, 2, 4, 8, 16)
        ]
        assert values == sorted(values)
        assert len(set(values)) == len(values)

    @pytest.mark.parametrize("periods", [1, 5])
    def test_matches_pulsed_formula(self, model, periods):
        tau_z = model.zeno_time
        tau_m = 0.05 * tau_z
        total = periods * tau_z
        sim = zs.survival_repeated(model, zs.MeasurementSchedule(total, tau_m), model.max_dt())
        assert sim == pytest.approx(survival_pulsed(tau_m, tau_z, total), rel=0.05)
