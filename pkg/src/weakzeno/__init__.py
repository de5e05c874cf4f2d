"""Weak-measurement dwell times and quantum Zeno time scales in dissipative systems."""

from weakzeno.constants import EV, HBAR, K_B
from weakzeno.dissipation import EnergyTriple, decay_gamma
from weakzeno.errors import DomainError, DomainWarning
from weakzeno.tunneling_time import DwellForm, MeasurementWindow, zeno_time_weak

__all__ = [
    "EV",
    "HBAR",
    "K_B",
    "DomainError",
    "DomainWarning",
    "DwellForm",
    "EnergyTriple",
    "MeasurementWindow",
    "decay_gamma",
    "zeno_time_weak",
]
__version__ = "0.1.0"
