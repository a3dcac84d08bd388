"""Circular Bohr orbits and the phase-accordance route to their quantization.

Orbit quantities are SI; the Coulomb coupling e^2 of the Gaussian-unit force
balance m v^2 r = e^2 is carried as e^2 / (4 pi eps0).  The phase relations
are written with c = 1, velocities as fractions of c.
"""

from dataclasses import dataclass
import math

import numpy as np

from .constants import CODATA2018, compton_cutoff
from .dispersion import clock_frequency, wave_frequency
from .errors import DomainError

EV = CODATA2018.e_charge  # J per eV


@dataclass(frozen=True)
class BohrOrbit:
    n: int
    r: float  # m
    v_e: float  # m/s
    E: float  # J
    M: float  # J s
    T: float  # s

    @property
    def beta(self):
        return self.v_e / CODATA2018.c

    @property
    def kinetic(self):
        return 0.5 * CODATA2018.m_e * self.v_e**2


def orbit_from_n(n, const=CODATA2018, mass=None):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"quantum number must be a positive integer, got {n!r}")
    n = int(n)
    m = const.m_e if mass is None else mass
    e2 = const.coulomb_e2
    hbar = const.hbar
    v = e2 / (n * hbar)
    r = n * n * hbar * hbar / (m * e2)
    return BohrOrbit(
        n=n,
        r=r,
        v_e=v,
        E=-m * e2 * e2 / (2.0 * hbar * hbar * n * n),
        M=n * hbar,
        T=2.0 * math.pi * r / v,
    )


def force_balance_residual(r, v_e, const=CODATA2018, mass=None):
    """(m v^2 r - e^2) / e^2, zero when the centrifugal and Coulomb forces balance."""
    m = const.m_e if mass is None else mass
    e2 = const.coulomb_e2
    return (m * v_e * v_e * r - e2) / e2


@dataclass(frozen=True)
class PhasePair:
    phi_clock: float  # cycles
    phi_wave: float  # cycles
    z: float
    v: float


def _check_open_velocity(v):
    if not 0.0 < v < 1.0:
        raise DomainError("velocity must satisfy 0 < v < 1 (units of c)")


def phase_accordance(v, z_samples, f_o=1.0):
    """Internal clock phase and guided-wave phase met by the corpuscle at z.

    Clock route: f_clock * t with t = z / v.  Wave route: the lab-frame wave
    f_wave (t - z / V_phase), V_phase = 1 / v, evaluated at the same event.
    """
    _check_open_velocity(v)
    f_clock = float(clock_frequency(f_o, v))
    f_wave = float(wave_frequency(f_o, v))
    v_phase = 1.0 / v
    pairs = []
    for z in np.asarray(z_samples, dtype=float).ravel():
        t = z / v
        pairs.append(PhasePair(phi_clock=f_clock * t, phi_wave=f_wave * (t - z / v_phase),
                               z=float(z), v=float(v)))
    return pairs


def extra_arc_time(v, T):
    """Extra time tau = T v^2 / (1 - v^2) for the wave pattern to catch up."""
    if not 0.0 <= v < 1.0:
        raise DomainError("velocity must satisfy 0 <= v < 1 (units of c)")
    if not T > 0:
        raise DomainError("period must be positive")
    return T * v * v / (1.0 - v * v)


def extra_arc_residual(v, T, tau):
    """Relative mismatch of V_phase tau = (tau + T) v with V_phase = 1/v."""
    lhs = tau / v
    rhs = (tau + T) * v
    return (lhs - rhs) / rhs


def quantization_number(v, T, f_o):
    """Clock cycles f_o sqrt(1 - v^2) tau accumulated over the extra arc."""
    _check_open_velocity(v)
    return f_o * math.sqrt(1.0 - v * v) * extra_arc_time(v, T)


def orbit_quantization(orbit, const=CODATA2018):
    return quantization_number(orbit.v_e / const.c, orbit.T, compton_cutoff(const.m_e, const))


def bohr_table(n_values, const=CODATA2018):
    """Rows of n, r, v/c, E (eV), M/hbar and the phase-accordance N."""
    rows = []
    for n in n_values:
        o = orbit_from_n(n, const)
        rows.append({
            "n": o.n,
            "r": o.r,
            "v_over_c": o.v_e / const.c,
            "E_eV": o.E / const.e_charge,
            "M_over_hbar": o.M / const.hbar,
            "N_quantization": orbit_quantization(o, const),
        })
    return rows
