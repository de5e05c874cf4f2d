"""Reference level coupled to a ladder of bath levels, and pulsed measurement.

One excitation is shared between a reference atom (amplitude ``a_0``) and
``2N`` bath atoms at detunings ``n dE`` for ``n = -N..-1, 1..N``, each coupled
with the same real constant ``H``. In the interaction picture

    da_0/dt = -i (H/hbar) sum_n a_n exp(-i n dE t / hbar)
    da_n/dt = -i (H/hbar) a_0 exp(+i n dE t / hbar)

For a dense ladder the reference amplitude decays exponentially after a
quadratic start; projective measurements that reset the state to the
reference level slow the decay down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from weakzeno.constants import HBAR
from weakzeno.errors import DomainError, StepSizeError
from weakzeno.numerics import FitResult, fit_line, solve_ode_complex

# step limits as fractions of the fastest phase and coupling time scales
PHASE_STEP_FRACTION = 0.1
COUPLING_STEP_FRACTION = 0.01


@dataclass(frozen=True)
class BathModel:
    """Bath ladder of half-width ``n_levels``; ``delta_e`` and ``coupling`` in J."""

    n_levels: int
    delta_e: float
    coupling: float

    def __post_init__(self):
        if int(self.n_levels) != self.n_levels or self.n_levels < 1:
            raise DomainError("n_levels must be a positive integer")
        if self.delta_e < 0 or self.coupling < 0:
            raise DomainError("delta_e and coupling must be non-negative")

    @classmethod
    def for_target_gamma(
        cls, gamma: float, n_levels: int = 64, bandwidth_factor: float = 20.0
    ) -> BathModel:
        """Desk-scale model whose reference level decays at roughly ``gamma``.

        The bandwidth ``N dE`` is ``bandwidth_factor * hbar * gamma`` and the
        coupling follows the golden-rule estimate ``gamma = pi H^2 / (hbar dE)``.
        """
        if not gamma > 0:
            raise DomainError("target gamma must be positive")
        delta_e = bandwidth_factor * HBAR * gamma / n_levels
        coupling = math.sqrt(gamma * HBAR * delta_e / math.pi)
        return cls(n_levels=n_levels, delta_e=delta_e, coupling=coupling)

    @property
    def dimension(self) -> int:
        return 2 * self.n_levels + 1

    @property
    def levels(self) -> np.ndarray:
        """Ladder indices of the bath amplitudes, in vector order after a_0."""
        n = np.arange(1, self.n_levels + 1)
        return np.concatenate([-n[::-1], n])

    @property
    def energy_spread(self) -> float:
        """Energy uncertainty of the reference state, H sqrt(2N)."""
        return self.coupling * math.sqrt(2 * self.n_levels)

    @property
    def zeno_time(self) -> float:
        """hbar / energy_spread (infinite without coupling)."""
        spread = self.energy_spread
        return HBAR / spread if spread > 0 else math.inf

    def max_dt(self) -> float:
        """Largest step accepted by :func:`evolve_bath`."""
        limits = [math.inf]
        if self.delta_e > 0:
            limits.append(PHASE_STEP_FRACTION * HBAR / (self.n_levels * self.delta_e))
        if self.coupling > 0:
            limits.append(COUPLING_STEP_FRACTION * self.zeno_time)
        return min(limits)

    def hamiltonian(self) -> np.ndarray:
        """Schroedinger-picture matrix in joules, reference level at energy 0."""
        h = np.zeros((self.dimension, self.dimension))
        h[1:, 1:] = np.diag(self.levels * self.delta_e)
        h[0, 1:] = self.coupling
        h[1:, 0] = self.coupling
        return h


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Reference amplitude and bath population over time.

    ``amplitudes`` holds the full state (rows = samples) when requested.
    """

    times: np.ndarray
    a0: np.ndarray
    bath_norm: np.ndarray
    amplitudes: np.ndarray | None = None

    @property
    def p_survival(self) -> np.ndarray:
        return np.abs(self.a0) ** 2

    @property
    def norm(self) -> np.ndarray:
        return self.p_survival + self.bath_norm


@dataclass(frozen=True)
class MeasurementSchedule:
    """Projective measurements every ``tau_m`` over a total time ``total_t``."""

    total_t: float
    tau_m: float

    def __post_init__(self):
        if not self.tau_m > 0:
            raise DomainError("tau_m must be positive")
        if self.n_pulses < 1:
            raise DomainError("schedule holds no complete measurement interval")

    @classmethod
    def from_pulses(cls, total_t: float, n_pulses: int) -> MeasurementSchedule:
        return cls(total_t=total_t, tau_m=total_t / n_pulses)

    @property
    def n_pulses(self) -> int:
        # tolerate T/tau_m landing a hair below an integer
        return math.floor(self.total_t / self.tau_m * (1 + 1e-12))


class DecayFit(NamedTuple):
    gamma: float
    fit: FitResult


def bath_rhs(t: float, amplitudes: np.ndarray, model: BathModel) -> np.ndarray:
    """Interaction-picture time derivative of the amplitude vector."""
    amplitudes = np.asarray(amplitudes)
    if amplitudes.shape != (model.dimension,):
        raise DomainError(
            f"amplitude vector has shape {amplitudes.shape}, expected ({model.dimension},)"
        )
    return _make_rhs(model)(t, amplitudes)


def _make_rhs(model: BathModel):
    omegas = model.levels * (model.delta_e / HBAR)
    g = model.coupling / HBAR
    out = np.empty(model.dimension, dtype=complex)

    def rhs(t, y):
        phase = np.exp(-1j * omegas * t)
        out[0] = -1j * g * np.dot(y[1:], phase)
        out[1:] = (-1j * g * y[0]) * phase.conj()
        return out.copy()

    return rhs


def evolve_bath(
    model: BathModel, t_end: float, dt: float, keep_amplitudes: bool = False
) -> AmplitudeTrajectory:
    """RK4 evolution from the reference state ``a_0 = 1`` up to ``t_end``.

    Raises:
        StepSizeError: if ``dt`` exceeds :meth:`BathModel.max_dt`; the
            exception carries the largest admissible step.
    """
    if t_end < 0:
        raise DomainError("t_end must be non-negative")
    limit = model.max_dt()
    if dt > limit * (1 + 1e-9):
        raise StepSizeError(
            f"dt={dt:.4g} s is too coarse for this bath; use dt <= {limit:.4g} s", limit
        )
    y0 = np.zeros(model.dimension, dtype=complex)
    y0[0] = 1.0
    times, states = solve_ode_complex(_make_rhs(model), y0, 0.0, t_end, dt)
    bath_norm = np.sum(np.abs(states[:, 1:]) ** 2, axis=1)
    return AmplitudeTrajectory(
        times=times,
        a0=states[:, 0].copy(),
        bath_norm=bath_norm,
        amplitudes=states if keep_amplitudes else None,
    )


def survival_single(model: BathModel, tau_m: float, dt: float) -> float:
    """Probability |a_0(tau_m)|^2 of still finding the reference level."""
    if tau_m < 0:
        raise DomainError("tau_m must be non-negative")
    if tau_m == 0 or model.coupling == 0:
        return 1.0
    traj = evolve_bath(model, tau_m, min(dt, tau_m))
    return float(traj.p_survival[-1])


def survival_repeated(model: BathModel, schedule: MeasurementSchedule, dt: float) -> float:
    """Survival after ``n_pulses`` projective measurements.

    Each measurement resets the state to the reference level, so every
    interval repeats the same evolution.
    """
    return survival_single(model, schedule.tau_m, dt) ** schedule.n_pulses


def short_time_exponent(
    traj: AmplitudeTrajectory, lo: float = 1e-8, hi: float = 1e-3, min_samples: int = 10
) -> FitResult:
    """Log-log slope of the decay probability 1 - P against t.

    Only samples with ``lo <= 1 - P <= hi`` enter the fit; a slope of 2
    marks the quadratic short-time regime, 1 an exponential one.

    Raises:
        ValueError: if fewer than ``min_samples`` samples lie in the window.
    """
    loss = 1.0 - traj.p_survival
    mask = (traj.times > 0) & (loss >= lo) & (loss <= hi)
    if np.count_nonzero(mask) < min_samples:
        raise ValueError(
            f"only {np.count_nonzero(mask)} samples with {lo:g} <= 1-P <= {hi:g}; "
            "refine dt or extend the trajectory"
        )
    return fit_line(np.log(traj.times[mask]), np.log(loss[mask]))


def fit_decay_rate(traj: AmplitudeTrajectory, window: tuple[float, float]) -> DecayFit:
    """Amplitude decay constant from a straight-line fit of ln P over ``window``."""
    t0, t1 = window
    if not t0 < t1:
        raise ValueError("window must satisfy t0 < t1")
    if t0 < traj.times[0] or t1 > traj.times[-1]:
        raise ValueError("window extends beyond the trajectory")
    mask = (traj.times >= t0) & (traj.times <= t1)
    p = traj.p_survival[mask]
    if p.size < 2:
        raise ValueError("fewer than two samples in the window")
    if np.any(p <= 1e-12):
        raise ValueError("survival probability drops below 1e-12 inside the window")
    fit = fit_line(traj.times[mask], np.log(p))
    return DecayFit(gamma=-0.5 * fit.slope, fit=fit)


def default_decay_window(traj: AmplitudeTrajectory, upper: float = 0.8, lower: float = 0.05):
    """Window from where P first falls below ``upper`` to where it first falls below ``lower``.

    The lower cut keeps the fit clear of the residual plateau a finite
    bandwidth leaves behind (of order (hbar gamma / (N dE))^2). Returns ``None`` when the trajectory never leaves the upper plateau.
    """
    p = traj.p_survival
    below_upper = np.nonzero(p < upper)[0]
    if below_upper.size == 0:
        return None
    start = below_upper[0]
    below_lower = np.nonzero(p[start:] < lower)[0]
    stop = start + below_lower[0] if below_lower.size else p.size - 1
    if stop - start < 2:
        return None
    return float(traj.times[start]), float(traj.times[stop])
