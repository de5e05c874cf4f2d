"""Asymmetric quartic double well and its Gaussian trial ground state.

In the reduced coordinate ``xi = x/a`` the potential is

    V(xi) = V0 xi^2 (xi^2 - A xi + B),   V0 = m omega0^2 a^2 / 2,

and in units of ``hbar omega0`` the Hamiltonian reads

    K = beta^2/2 [ -beta^-4 d^2/dxi^2 + xi^2 (xi^2 - A xi + B) ],
    beta^2 = m omega0 a^2 / hbar.

The trial state is the ground state of the harmonic approximation at the
left minimum, a Gaussian of width parameter ``nu = sqrt(B) beta^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from weakzeno.constants import HBAR
from weakzeno.errors import DomainError
from weakzeno.numerics import ToleranceSpec, find_root, integrate
from weakzeno.tunneling_time import zeno_time_weak
from weakzeno.dissipation import EnergyTriple

TUNNELING_BETA_SQ_THRESHOLD = 0.0645

# tight enough that root-found extrema agree with the closed form to ~1e-14
_ROOT_TOL = ToleranceSpec(abs_tol=1e-14, rel_tol=1e-15, max_subdivisions=500)
_QUAD_TOL = ToleranceSpec(abs_tol=1e-300, rel_tol=1e-12, max_subdivisions=2000)
_TRUNCATION_SIGMAS = 10.0


@dataclass(frozen=True)
class DoubleWellParams:
    """Physical parameters of the quartic well.

    Attributes:
        m: mass in kg.
        omega0: angular frequency in rad/s.
        a: length scale in m.
        A, B: dimensionless shape coefficients; two minima need 9A^2 > 32B.
    """

    m: float
    omega0: float
    a: float
    A: float = 14.0
    B: float = 45.0

    def __post_init__(self):
        if not (self.m > 0 and self.omega0 > 0 and self.a > 0):
            raise DomainError("m, omega0 and a must be positive")
        if not (self.A > 0 and self.B > 0):
            raise DomainError("A and B must be positive")
        if not 9 * self.A**2 > 32 * self.B:
            raise DomainError(
                f"9A^2 = {9 * self.A**2:g} <= 32B = {32 * self.B:g}: no double-well structure"
            )

    @classmethod
    def from_scaled(
        cls, A: float = 14.0, B: float = 45.0, beta_sq: float = 1.0, v0: float = 1.0, a: float = 1.0
    ) -> DoubleWellParams:
        """Parameters realising a given ``beta^2`` and ``V0`` (joules) at length ``a``."""
        if not (beta_sq > 0 and v0 > 0):
            raise DomainError("beta_sq and v0 must be positive")
        # V0 = hbar omega0 beta^2 / 2  and  beta^2 = m omega0 a^2 / hbar
        omega0 = 2.0 * v0 / (HBAR * beta_sq)
        m = beta_sq * HBAR / (omega0 * a * a)
        return cls(m=m, omega0=omega0, a=a, A=A, B=B)

    @property
    def v0(self) -> float:
        return 0.5 * self.m * self.omega0**2 * self.a**2

    @property
    def beta_sq(self) -> float:
        return self.m * self.omega0 * self.a**2 / HBAR

    @property
    def nu(self) -> float:
        return math.sqrt(self.B) * self.beta_sq

    @property
    def energy_unit(self) -> float:
        """hbar omega0, the joule value of one unit of K."""
        return HBAR * self.omega0


@dataclass(frozen=True)
class DoubleWellDerived:
    v0: float
    beta_sq: float
    nu: float
    xi0: float
    xi1: float
    xi2: float
    epsilon: float
    k0: float

    @classmethod
    def of(cls, p: DoubleWellParams) -> DoubleWellDerived:
        xi0, xi1, xi2 = extrema_closed(p.A, p.B)
        return cls(
            v0=p.v0,
            beta_sq=p.beta_sq,
            nu=p.nu,
            xi0=xi0,
            xi1=xi1,
            xi2=xi2,
            epsilon=asymmetry_epsilon(p),
            k0=ground_energy_k0(p.beta_sq, p.B),
        )


@dataclass(frozen=True)
class BiasSpec:
    """Asymmetry energy (signed, J) and tunneling element (J) of a biased well."""

    epsilon0: float
    tunneling_element: float = 0.0

    def __post_init__(self):
        if self.tunneling_element < 0:
            raise DomainError("tunneling element must be non-negative")

    @classmethod
    def slightly_biased(cls, tunneling_element: float) -> BiasSpec:
        """Bias equal in magnitude to the tunneling element."""
        return cls(epsilon0=tunneling_element, tunneling_element=tunneling_element)


def shape(xi, A: float, B: float):
    """Dimensionless profile xi^2 (xi^2 - A xi + B); accepts arrays."""
    return xi * xi * (xi * xi - A * xi + B)


def shape_slope(xi, A: float, B: float):
    return xi * (4 * xi * xi - 3 * A * xi + 2 * B)


def shape_curvature(xi, A: float, B: float):
    return 12 * xi * xi - 6 * A * xi + 2 * B


def potential(xi, p: DoubleWellParams):
    """V(xi) in joules."""
    return p.v0 * shape(xi, p.A, p.B)


def potential_k(xi, p: DoubleWellParams):
    """V(xi) in units of hbar omega0."""
    return 0.5 * p.beta_sq * shape(xi, p.A, p.B)


def extrema_closed(A: float, B: float) -> tuple[float, float, float]:
    """Left minimum, barrier top and right minimum in units of ``a``."""
    disc = 9 * A * A - 32 * B
    if not disc > 0:
        raise DomainError(f"9A^2 - 32B = {disc:g} <= 0: no double-well structure")
    root = math.sqrt(disc)
    return 0.0, (3 * A - root) / 8, (3 * A + root) / 8


def extrema_numeric(A: float, B: float, tol: ToleranceSpec = _ROOT_TOL) -> tuple[float, float, float]:
    """Extrema located by bracketed root finding on dV/dxi.

    Away from the origin dV/dxi = V0 xi q(xi) with q = 4 xi^2 - 3A xi + 2B.
    q(0) = 2B > 0 and q is smallest at 3A/8, which splits the two roots.
    """
    def q(xi):
        return 4 * xi * xi - 3 * A * xi + 2 * B

    vertex = 3 * A / 8
    if q(vertex) >= 0:
        raise DomainError("no double-well structure")
    hi = vertex + 1.0
    while q(hi) <= 0:
        hi = vertex + 2 * (hi - vertex)
    return 0.0, find_root(q, 0.0, vertex, tol), find_root(q, vertex, hi, tol)


def ground_state_density(xi, nu: float):
    """Normalised Gaussian density sqrt(nu/pi) exp(-nu xi^2)."""
    if not nu > 0:
        raise DomainError("nu must be positive")
    return math.sqrt(nu / math.pi) * np.exp(-nu * np.asarray(xi) ** 2)


def ground_energy_k0(beta_sq: float, B: float) -> float:
    """<K> in the centred Gaussian: sqrt(B)/2 + 3/(8 beta^2 B)."""
    if not (beta_sq > 0 and B > 0):
        raise DomainError("beta_sq and B must be positive")
    return 0.5 * math.sqrt(B) + 3.0 / (8.0 * beta_sq * B)


def ground_energy_quadrature(p: DoubleWellParams, center: float = 0.0) -> float:
    """<K> in the Gaussian centred at ``center``, by numerical quadrature.

    Kinetic part uses -psi psi'' with the Gaussian's analytic second
    derivative; the range is truncated at |xi - center| <= 10/sqrt(nu).
    """
    nu, beta_sq = p.nu, p.beta_sq
    norm = math.sqrt(nu / math.pi)
    half_width = _TRUNCATION_SIGMAS / math.sqrt(nu)

    def density(y):
        return norm * math.exp(-nu * y * y)

    def kinetic(y):
        # -psi * psi'' = (nu - nu^2 y^2) |psi|^2
        return (nu - nu * nu * y * y) * density(y)

    def pot(y):
        return shape(center + y, p.A, p.B) * density(y)

    t_kin = integrate(kinetic, -half_width, half_width, _QUAD_TOL)
    t_pot = integrate(pot, -half_width, half_width, _QUAD_TOL)
    return 0.5 * beta_sq * (t_kin / beta_sq**2 + t_pot)


def displaced_energy(center: float, p: DoubleWellParams) -> float:
    """<K> in the Gaussian displaced to ``center``, in closed form.

    K0' = K0 + beta^2/2 c^2 (c^2 - A c + B) + 3/(2 sqrt(B)) c (c - A/2).
    """
    c = center
    return (
        ground_energy_k0(p.beta_sq, p.B)
        + 0.5 * p.beta_sq * shape(c, p.A, p.B)
        + 1.5 / math.sqrt(p.B) * c * (c - 0.5 * p.A)
    )


def asymmetry_epsilon(p: DoubleWellParams) -> float:
    """V(xi2) - V(xi0) in joules; negative when the right well is lower."""
    _, _, xi2 = extrema_closed(p.A, p.B)
    return p.v0 * shape(xi2, p.A, p.B)


def bias_coefficient(A: float, B: float) -> float:
    """c in h = eps (1 - c / beta^2), from the variance coupling at xi2."""
    _, _, xi2 = extrema_closed(A, B)
    s = shape(xi2, A, B) / xi2  # xi2 (xi2^2 - A xi2 + B)
    if s == 0:
        raise DomainError("degenerate wells: bias coefficient undefined")
    return -(3.0 / math.sqrt(B)) * (xi2 - 0.5 * A) / s


def bias_h(p: DoubleWellParams) -> float:
    """Energy difference (K0'(xi2) - K0) hbar omega0 in joules."""
    _, _, xi2 = extrema_closed(p.A, p.B)
    k_shift = displaced_energy(xi2, p) - ground_energy_k0(p.beta_sq, p.B)
    return k_shift * p.energy_unit


def tunneling_condition(beta_sq: float) -> bool:
    """True when beta^2 exceeds the tunneling threshold 0.0645 (strict)."""
    if not beta_sq > 0:
        raise DomainError("beta_sq must be positive")
    return beta_sq > TUNNELING_BETA_SQ_THRESHOLD


def switching_energies(bias: BiasSpec, k0_energy: float = 0.0) -> EnergyTriple:
    """Levels for a transition from the metastable well into the lower one.

    H_i is the metastable level and H_0 = H_f = H_i - |eps0|.
    """
    gap = abs(bias.epsilon0)
    return EnergyTriple(h_i=k0_energy, h_f=k0_energy - gap, h_0=k0_energy - gap)


def zeno_time_switching(bias: BiasSpec) -> float:
    """sqrt(2) hbar / |eps0|."""
    if bias.epsilon0 == 0:
        raise DomainError("zero asymmetry energy: switching Zeno time undefined")
    return math.sqrt(2.0) * HBAR / abs(bias.epsilon0)


def switching_zeno_via_weak(bias: BiasSpec) -> float:
    """The same time through the general weak Zeno formula."""
    return zeno_time_weak(switching_energies(bias))


def curve(p_A: float, p_B: float, xi_min: float = -1.0, xi_max: float = 9.0, points: int = 201):
    """Samples (xi, V/V0) for plotting the potential profile."""
    xi = np.linspace(xi_min, xi_max, points)
    return xi, shape(xi, p_A, p_B)
