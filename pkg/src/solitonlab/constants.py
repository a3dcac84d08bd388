"""Physical constants, Planck-scale quantities and the SI/natural unit contract.

Values are CODATA 2018 and embedded as literals so that every derived number
in the package is reproducible regardless of the installed scipy version.
"""

from dataclasses import dataclass
from enum import Enum
import math

from .errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 299792458.0  # m/s, exact
    h: float = 6.62607015e-34  # J s, exact
    m_e: float = 9.1093837015e-31  # kg
    e_charge: float = 1.602176634e-19  # C, exact
    G: float = 6.67430e-11  # m^3 / (kg s^2)
    epsilon_0: float = 8.8541878128e-12  # F/m

    def __post_init__(self):
        for name in ("c", "h", "m_e", "e_charge", "G", "epsilon_0"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")

    @property
    def hbar(self):
        return self.h / (2.0 * math.pi)

    @property
    def coulomb_e2(self):
        """e^2/(4 pi eps0): the Gaussian-unit e^2 expressed in SI (J m)."""
        return self.e_charge**2 / (4.0 * math.pi * self.epsilon_0)

    def as_dict(self):
        return {
            "c": self.c,
            "h": self.h,
            "hbar": self.hbar,
            "m_e": self.m_e,
            "e_charge": self.e_charge,
            "G": self.G,
            "epsilon_0": self.epsilon_0,
        }


CODATA2018 = PhysicalConstants()


def _check_mass(mass):
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}")


def compton_cutoff(mass, const=CODATA2018):
    """Waveguide cutoff frequency f_o = m c^2 / h in Hz."""
    _check_mass(mass)
    return mass * const.c**2 / const.h


def waveguide_width(mass, const=CODATA2018):
    """Guide width w = c / (2 f_o) = h / (2 m c), half the Compton wavelength."""
    _check_mass(mass)
    return const.h / (2.0 * mass * const.c)


def planck_length(const=CODATA2018):
    return math.sqrt(const.hbar * const.G / const.c**3)


def planck_mass(const=CODATA2018):
    return math.sqrt(const.hbar * const.c / const.G)


class UnitMode(str, Enum):
    SI = "SI"
    NATURAL = "Natural"


# (length, time, mass) exponents of the quantities the solvers exchange
DIMENSIONS = {
    "length": (1, 0, 0),
    "time": (0, 1, 0),
    "mass": (0, 0, 1),
    "velocity": (1, -1, 0),
    "frequency": (0, -1, 0),
    "wavenumber": (-1, 0, 0),
    "energy": (2, -2, 1),
    "momentum": (1, -1, 1),
    "action": (2, -1, 1),
}


@dataclass(frozen=True)
class UnitSystem:
    """Two-mode unit contract.

    In natural mode hbar = m = c = 1 with m the reference mass (the electron by
    default), so lengths are in reduced Compton wavelengths hbar/(m c) and
    times in hbar/(m c^2).
    """

    mode: UnitMode = UnitMode.NATURAL
    mass: float = CODATA2018.m_e
    const: PhysicalConstants = CODATA2018

    def scale(self, quantity):
        """SI value of one natural unit of ``quantity``."""
        try:
            lx, tx, mx = DIMENSIONS[quantity]
        except KeyError:
            raise DomainError(f"unknown quantity {quantity!r}") from None
        length = self.const.hbar / (self.mass * self.const.c)
        time = self.const.hbar / (self.mass * self.const.c**2)
        return length**lx * time**tx * self.mass**mx

    def to_natural(self, value, quantity):
        return value / self.scale(quantity)

    def to_si(self, value, quantity):
        return value * self.scale(quantity)
