"""Closed-form waveguide kinematics in normalized units (c = 1, f_o = 1 by default).

A corpuscle zigzagging at light speed between the guide walls at angle phi
advances along the guide at v = sin(phi).  Its internal clock runs at
f_o * sqrt(1 - v^2), the guided wave at f_o / sqrt(1 - v^2), and the phase
velocity of the wave is 1/v.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError


def _check_velocity(v):
    v = np.asarray(v, dtype=float)
    if np.any(v < 0) or np.any(v >= 1) or np.any(~np.isfinite(v)):
        raise DomainError("velocity must satisfy 0 <= v < 1 (units of c)")
    return v


def lorentz_gamma(v):
    v = _check_velocity(v)
    return 1.0 / np.sqrt(1.0 - v * v)


def clock_frequency(f_o, v):
    v = _check_velocity(v)
    return f_o * np.sqrt(1.0 - v * v)


def wave_frequency(f_o, v):
    v = _check_velocity(v)
    return f_o / np.sqrt(1.0 - v * v)


@dataclass(frozen=True)
class KinematicState:
    """Relativistic state of the zigzagging corpuscle; frequencies in units of f_o.

    ``v_phase`` is ``math.inf`` at rest: the wave then oscillates in phase along
    the whole guide.
    """

    v: float
    gamma: float
    f_clock: float
    f_wave: float
    phi: float
    v_phase: float

    @property
    def f_zigzag(self):
        return self.f_clock

    @property
    def v_group(self):
        return self.v


def zigzag_state(v):
    v = float(_check_velocity(v))
    return KinematicState(
        v=v,
        gamma=float(lorentz_gamma(v)),
        f_clock=float(clock_frequency(1.0, v)),
        f_wave=float(wave_frequency(1.0, v)),
        phi=math.asin(v),
        v_phase=math.inf if v == 0.0 else 1.0 / v,
    )


def kg_frequency(k, f_o=1.0):
    """Klein-Gordon branch f = sqrt(f_o^2 + k^2), k in cycles per unit length."""
    if not f_o > 0:
        raise DomainError("f_o must be positive")
    k = np.asarray(k, dtype=float)
    return np.sqrt(f_o * f_o + k * k)


def schrodinger_frequency(k, f_o=1.0, include_rest=True):
    """Parabolic low-velocity branch f_o + k^2/(2 f_o), or k^2/(2 f_o) without rest."""
    if not f_o > 0:
        raise DomainError("f_o must be positive")
    k = np.asarray(k, dtype=float)
    kinetic = k * k / (2.0 * f_o)
    return f_o + kinetic if include_rest else kinetic


def clock_branch(k_clock, f_o=1.0):
    """Clock frequency plotted against its own wavenumber.

    A wave at wavenumber k has group velocity v = k/f and clock frequency
    f_o^2/f; the clock phase advances along the guide at k_clock = f_clock/v
    = f_o^2/k.  Eliminating k gives f_clock = f_o k_clock / sqrt(k_clock^2 + f_o^2),
    which starts at zero and approaches f_o from below.
    """
    if not f_o > 0:
        raise DomainError("f_o must be positive")
    k_clock = np.abs(np.asarray(k_clock, dtype=float))
    return f_o * k_clock / np.sqrt(k_clock * k_clock + f_o * f_o)


@dataclass(frozen=True)
class DispersionCurve:
    k_samples: np.ndarray
    f_kg: np.ndarray
    f_schrod: np.ndarray
    f_clock_branch: np.ndarray

    def columns(self):
        return {
            "k": self.k_samples,
            "f_kg": self.f_kg,
            "f_schrod": self.f_schrod,
            "f_clock": self.f_clock_branch,
        }


def dispersion_table(k_min, k_max, n_points, f_o=1.0):
    if n_points < 2:
        raise DomainError("n_points must be at least 2")
    if not k_min < k_max:
        raise DomainError("k_min must be smaller than k_max")
    k = np.linspace(k_min, k_max, int(n_points))
    return DispersionCurve(
        k_samples=k,
        f_kg=kg_frequency(k, f_o),
        f_schrod=schrodinger_frequency(k, f_o, include_rest=True),
        f_clock_branch=clock_branch(k, f_o),
    )
