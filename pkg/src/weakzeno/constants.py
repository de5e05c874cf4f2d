"""Physical constants (CODATA 2018, exact SI definitions) and unit conversion."""

from scipy import constants as _c

HBAR = _c.hbar  # J s
K_B = _c.k  # J / K
EV = _c.eV  # J
PICO = 1e-12

# unit symbol -> (quantity kind, factor to SI)
_UNITS = {
    "J": ("energy", 1.0),
    "eV": ("energy", EV),
    "K": ("energy", K_B),
    "s": ("time", 1.0),
    "ps": ("time", PICO),
    # "11/s" reads as 11 per second; the spelled-out form needs a space, "3e9 1/s"
    " 1/s": ("rate", 1.0),
    "/s": ("rate", 1.0),
    "s^-1": ("rate", 1.0),
}


def kelvin_to_joules(temperature: float) -> float:
    return K_B * temperature


def ev_to_joules(energy: float) -> float:
    return EV * energy


def parse_quantity(text: str, kind: str) -> float:
    """Parse ``<number><unit>`` into SI units.

    Bare numbers are taken as already being in the SI unit of ``kind``.
    Energies accept J, eV and K (converted with E = k_B T); times accept
    s and ps; rates accept ``/s``, ``s^-1`` and a
    space-separated ``1/s``.

    Raises:
        ValueError: if the number is malformed or the unit does not
            belong to ``kind``.
    """
    s = text.strip()
    # longest suffix first so "/s" wins over "s"
    for symbol in sorted(_UNITS, key=len, reverse=True):
        if s.endswith(symbol):
            number = s[: -len(symbol)].strip()
            unit_kind, factor = _UNITS[symbol]
            if not number:
                break
            if unit_kind != kind:
                raise ValueError(f"unit {symbol!r} is not a valid {kind} unit in {text!r}")
            return float(number) * factor
    return float(s)
