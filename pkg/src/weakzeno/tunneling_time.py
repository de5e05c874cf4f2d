"""Weak dwell time, survival probabilities and Zeno time scales.

The dwell time is the pre/post-selected survival integral

    tau_D = int_{t_i}^{t_f} exp(-g (t - t_i)) (1 - exp(-2 g (t_f - t)))
                                             / (1 - exp(-2 g (t_f - t_i))) dt

whose antiderivative gives ``tanh(g T / 2) / g`` with ``T = t_f - t_i``.
The weak Zeno time is instead derived from the closed form
``coth(g T / 2) / g``; the two are reciprocal up to ``1/g**2`` and both are
offered through :class:`DwellForm`.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from weakzeno.constants import HBAR
from weakzeno.dissipation import EnergyTriple
from weakzeno.errors import DomainError, DomainWarning
from weakzeno.numerics import DEFAULT_TOL, ToleranceSpec, integrate


@dataclass(frozen=True)
class MeasurementWindow:
    t_i: float
    t_f: float

    def __post_init__(self):
        if not self.t_f > self.t_i:
            raise DomainError(f"need t_f > t_i, got [{self.t_i!r}, {self.t_f!r}]")

    @classmethod
    def of_length(cls, tau_m: float) -> MeasurementWindow:
        return cls(0.0, tau_m)

    @property
    def tau_m(self) -> float:
        return self.t_f - self.t_i


class DwellForm(enum.Enum):
    PAPER_COTH = "paper-coth"
    DERIVED_TANH = "derived-tanh"


@dataclass(frozen=True)
class ZenoInputs:
    """Any subset of the quantities that define a Zeno time."""

    delta_h: float | None = None
    tau_l: float | None = None
    tau_m: float | None = None
    energies: EnergyTriple | None = None

    def __post_init__(self):
        for name in ("delta_h", "tau_l", "tau_m"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise DomainError(f"{name} must be non-negative")


def _check_gamma(gamma: float) -> None:
    if gamma < 0 or math.isnan(gamma):
        raise DomainError(f"decay constant must be non-negative, got {gamma!r}")


def _unit_integrand(u: float, g: float) -> float:
    # integrand on the unit window u = (t - t_i)/T, with g = gamma*T
    if g == 0:
        return 1.0 - u
    return math.exp(-g * u) * math.expm1(-2 * g * (1.0 - u)) / math.expm1(-2 * g)


def dwell_integrand(t: float, gamma: float, w: MeasurementWindow) -> float:
    """Integrand of the weak dwell time at instant ``t`` in the window.

    Falls back to the linear ramp ``(t_f - t)/(t_f - t_i)`` when
    ``gamma * tau_m`` is zero.
    """
    _check_gamma(gamma)
    if not w.t_i <= t <= w.t_f:
        raise DomainError(f"t={t!r} outside the measurement window")
    return _unit_integrand((t - w.t_i) / w.tau_m, gamma * w.tau_m)


def dwell_weak_numeric(
    gamma: float, w: MeasurementWindow, tol: ToleranceSpec = DEFAULT_TOL
) -> float:
    """Weak dwell time by adaptive quadrature of :func:`dwell_integrand`.

    The integral is taken on the unit window and rescaled by ``tau_m`` so the
    tolerance is independent of the time unit.
    """
    _check_gamma(gamma)
    g = gamma * w.tau_m
    if g == 0:
        return 0.5 * w.tau_m
    return w.tau_m * integrate(lambda u: _unit_integrand(u, g), 0.0, 1.0, tol)


def dwell_closed(gamma: float, w: MeasurementWindow, form: DwellForm = DwellForm.PAPER_COTH) -> float:
    """Closed-form weak dwell time.

    ``PAPER_COTH`` gives ``coth(gamma T/2)/gamma`` and is the form from which
    the weak Zeno time follows; ``DERIVED_TANH`` gives ``tanh(gamma T/2)/gamma``,
    the exact value of the dwell integral, with limit ``T/2`` at ``gamma = 0``.

    Raises:
        DomainError: for ``PAPER_COTH`` at ``gamma * T = 0`` (pole).
    """
    _check_gamma(gamma)
    x = 0.5 * gamma * w.tau_m
    if form is DwellForm.DERIVED_TANH:
        if x == 0:
            return 0.5 * w.tau_m
        return math.tanh(x) / gamma
    if x == 0:
        raise DomainError("coth form of the dwell time diverges at gamma * tau_m = 0")
    return 1.0 / (math.tanh(x) * gamma)


def energy_variance(mean_h: float, mean_h_sq: float) -> float:
    """Energy uncertainty sqrt(<H^2> - <H>^2).

    Negative variances within 1e-12 of ``<H^2>`` are rounding and clamp to 0.
    """
    var = mean_h_sq - mean_h * mean_h
    if var < 0:
        if -var > 1e-12 * max(abs(mean_h_sq), mean_h * mean_h):
            raise DomainError(f"negative energy variance {var!r}")
        return 0.0
    return math.sqrt(var)


def survival_short(delta_h: float, t: float) -> float:
    """Short-time survival 1 - (delta_h t / hbar)^2.

    Values leaving [0, 1] are clamped and reported with a :class:`DomainWarning`;
    the boundary ``delta_h t = hbar`` itself is flagged as well.
    """
    if t < 0:
        raise DomainError("t must be non-negative")
    r = delta_h * t / HBAR
    p = 1.0 - r * r
    if r >= 1:
        warnings.warn(
            f"short-time expansion invalid at delta_h*t/hbar = {r:.3g}", DomainWarning, stacklevel=2
        )
    return min(1.0, max(0.0, p))


def _check_pulse_args(tau_m: float, tau_z: float, total_t: float) -> None:
    if tau_m < 0 or total_t < 0:
        raise DomainError("tau_m and total_t must be non-negative")
    if not tau_z > 0:
        raise DomainError("tau_z must be positive")
    if tau_m >= tau_z:
        raise DomainError(f"pulsed survival needs tau_m < tau_z, got {tau_m!r} >= {tau_z!r}")


def survival_pulsed(tau_m: float, tau_z: float, total_t: float) -> float:
    """Survival under pulses every ``tau_m``: [1 - (tau_m/tau_z)^2]^(T/tau_m).

    The exponent is real; ``tau_m = 0`` returns the frozen limit 1.
    """
    _check_pulse_args(tau_m, tau_z, total_t)
    if tau_m == 0:
        return 1.0
    r = tau_m / tau_z
    # divide first: T/tau_m can overflow while log1p(-r^2) underflows to 0
    return math.exp(total_t * (math.log1p(-r * r) / tau_m))


def survival_pulsed_integer(tau_m: float, tau_z: float, total_t: float) -> tuple[float, float]:
    """Survival after ``floor(T/tau_m)`` whole pulses.

    Returns:
        ``(probability, remainder)`` where ``remainder`` is the unmeasured
        time left after the last pulse.
    """
    _check_pulse_args(tau_m, tau_z, total_t)
    if not tau_m > 0:
        raise DomainError("integer pulse mode needs tau_m > 0")
    n = math.floor(total_t / tau_m * (1 + 1e-12))
    r = tau_m / tau_z
    return (1.0 - r * r) ** n, max(0.0, total_t - n * tau_m)


def survival_exponential(tau_m: float, tau_z: float, total_t: float) -> float:
    """Continuum limit exp(-T tau_m / tau_z^2) of the pulsed survival."""
    if tau_m < 0 or total_t < 0:
        raise DomainError("tau_m and total_t must be non-negative")
    if not tau_z > 0:
        raise DomainError("tau_z must be positive")
    return math.exp(-total_t * tau_m / tau_z**2)


def zeno_time_variance(delta_h: float) -> float:
    """hbar / delta_h."""
    if not delta_h > 0:
        raise DomainError("zero energy spread: an eigenstate has no finite Zeno time")
    return HBAR / delta_h


def zeno_time_geometric(tau_l: float, tau_m: float) -> float:
    """Geometric mean of lifetime and measurement interval."""
    if not (tau_l > 0 and tau_m > 0):
        raise DomainError("tau_l and tau_m must be positive")
    return math.sqrt(tau_l * tau_m)


def zeno_time_weak(e: EnergyTriple) -> float:
    """Weak Zeno time sqrt(2) hbar / sqrt((H_i-H_f)(H_i-H_0)) = sqrt(2)/gamma."""
    if e.gap_f == 0:
        raise DomainError("h_i == h_f: no dissipation, weak Zeno time undefined")
    return math.sqrt(2.0) * HBAR / math.sqrt(e.gap_f * e.gap_0)


def zeno_time(inputs: ZenoInputs) -> tuple[str, float]:
    """Pick the Zeno time formula the inputs support.

    Priority: energy triple, then energy spread, then lifetime and interval.

    Returns:
        ``(formula name, seconds)``.
    """
    if inputs.energies is not None:
        return "zeno_time_weak", zeno_time_weak(inputs.energies)
    if inputs.delta_h is not None:
        return "zeno_time_variance", zeno_time_variance(inputs.delta_h)
    if inputs.tau_l is not None and inputs.tau_m is not None:
        return "zeno_time_geometric", zeno_time_geometric(inputs.tau_l, inputs.tau_m)
    raise DomainError("need energies, delta_h, or both tau_l and tau_m")

