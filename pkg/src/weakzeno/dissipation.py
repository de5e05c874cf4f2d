"""Retarded (Caldirola-Montaldi) Schroedinger dynamics with a chronon.

Energies are scalar levels in joules: ``h_i`` the initial (pre-selected)
level, ``h_f`` the final (post-selected) level and ``h_0`` the ground level
that is subtracted to keep the ground state stable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from weakzeno.constants import HBAR
from weakzeno.errors import DomainError, DomainWarning


@dataclass(frozen=True)
class EnergyTriple:
    h_i: float
    h_f: float
    h_0: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.h_i, self.h_f, self.h_0)):
            raise DomainError("energies must be finite")
        if not self.h_i > self.h_0:
            raise DomainError(f"need h_i > h_0, got h_i={self.h_i!r}, h_0={self.h_0!r}")
        if self.h_i < self.h_f:
            raise DomainError(f"need h_i >= h_f, got h_i={self.h_i!r}, h_f={self.h_f!r}")

    @classmethod
    def from_gaps(cls, gap_f: float, gap_0: float, h_i: float = 0.0) -> EnergyTriple:
        """Build from the gaps ``h_i - h_f`` and ``h_i - h_0``."""
        return cls(h_i=h_i, h_f=h_i - gap_f, h_0=h_i - gap_0)

    @property
    def gap_f(self) -> float:
        return self.h_i - self.h_f

    @property
    def gap_0(self) -> float:
        return self.h_i - self.h_0

    def scaled(self, factor: float) -> EnergyTriple:
        return EnergyTriple(self.h_i * factor, self.h_f * factor, self.h_0 * factor)


@dataclass(frozen=True)
class DissipationResult:
    """Chronon, decay constant and effective phase rate for one triple.

    Attributes:
        delta: chronon in seconds.
        gamma: amplitude decay constant in 1/s.
        omega_eff: phase rate in rad/s, (H_i-H_0)/hbar minus the cubic
            chronon correction.
    """

    delta: float
    gamma: float
    omega_eff: float

    @property
    def zero_dissipation(self) -> bool:
        return self.delta == 0.0


def chronon_delta(e: EnergyTriple) -> float:
    """Chronon fixed by the final level: hbar/(H_i-H_0) * sqrt((H_i-H_f)/(H_i-H_0)).

    Returns 0 when ``h_i == h_f`` (no dissipation).
    """
    return HBAR / e.gap_0 * math.sqrt(e.gap_f / e.gap_0)


def decay_gamma_from_delta(h_i: float, h_0: float, delta: float) -> float:
    """Decay constant (H_i-H_0)^2 delta / hbar^2."""
    if not h_i > h_0:
        raise DomainError("need h_i > h_0")
    if delta < 0:
        raise DomainError("chronon must be non-negative")
    return (h_i - h_0) ** 2 * delta / HBAR**2


def decay_gamma(e: EnergyTriple) -> float:
    """Decay constant sqrt((H_i-H_f)(H_i-H_0)) / hbar, in 1/s."""
    return math.sqrt(e.gap_f * e.gap_0) / HBAR


def alpha_exact(h_i: float, h_0: float, delta: float) -> complex:
    """Exact rate ln(1 + i (H_i-H_0) delta/hbar) / delta (principal branch).

    Real part is the decay rate, imaginary part the oscillation rate of
    ``psi(t) = exp(-alpha t) psi(0)``.
    """
    if delta == 0:
        raise DomainError(
            "alpha_exact is singular at delta = 0; use the limit i*(h_i - h_0)/hbar"
        )
    if delta < 0:
        raise DomainError("chronon must be non-negative")
    x = (h_i - h_0) * delta / HBAR
    # log1p keeps the real part accurate for small x
    return complex(0.5 * math.log1p(x * x), math.atan(x)) / delta


def _series_argument(h_i: float, h_0: float, delta: float) -> float:
    x = (h_i - h_0) * delta / HBAR
    if abs(x) >= 1:
        warnings.warn(
            f"series argument (H_i-H_0)*delta/hbar = {x:.3g} is outside |x| < 1",
            DomainWarning,
            stacklevel=3,
        )
    return x


def alpha_series(h_i: float, h_0: float, delta: float) -> complex:
    """Third-order Taylor expansion of :func:`alpha_exact`.

    ``alpha * delta = i x + x**2 / 2 - i x**3 / 3`` with
    ``x = (H_i-H_0) delta / hbar``; the remainder is bounded by ``x**4``
    for ``x <= 0.5``. Warns with :class:`DomainWarning` for ``|x| >= 1``.
    """
    x = _series_argument(h_i, h_0, delta)
    w = (h_i - h_0) / HBAR
    return complex(0.5 * w * x, w * (1.0 - x * x / 3.0))


def alpha_series_printed(h_i: float, h_0: float, delta: float) -> complex:
    """The cubic rate with the coefficients used by the dissipation chain.

    ``i w + w**2 delta - i w**3 delta**2`` with ``w = (H_i-H_0)/hbar``. Its
    real part is :func:`decay_gamma_from_delta` by construction and its
    imaginary part the phase rate of :func:`effective_evolution`. These
    coefficients are not those of the Taylor series of the logarithm (the
    quadratic and cubic terms are 2x and 3x too large), see :func:`alpha_series`.
    """
    _series_argument(h_i, h_0, delta)
    w = (h_i - h_0) / HBAR
    return complex(w * w * delta, w - w**3 * delta**2)


def effective_evolution(e: EnergyTriple, delta: float, t: float) -> tuple[float, float]:
    """Phase (rad) and decay factor of the truncated evolution at time ``t``.

    phase = [(H_i-H_0)/hbar - (H_i-H_0)^3 delta^2/hbar^3] t,
    decay = exp(-gamma t) with gamma = (H_i-H_0)^2 delta/hbar^2.
    """
    if t < 0:
        raise DomainError("t must be non-negative")
    w = e.gap_0 / HBAR
    return (w - w**3 * delta**2) * t, math.exp(-w * w * delta * t)


def dissipation(e: EnergyTriple) -> DissipationResult:
    """Chronon, decay constant and phase rate with the chronon set by ``h_f``."""
    delta = chronon_delta(e)
    w = e.gap_0 / HBAR
    return DissipationResult(
        delta=delta,
        gamma=decay_gamma(e),
        omega_eff=w - w**3 * delta**2,
    )


def frequency_shift(e: EnergyTriple, delta: float) -> float:
    """(H_f-H_0)/hbar implied by the chronon: w [1 - (w delta)^2]."""
    w = e.gap_0 / HBAR
    return w * (1.0 - (w * delta) ** 2)

