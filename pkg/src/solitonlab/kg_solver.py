"""Leapfrog evolver for the 1+1D Klein-Gordon equation

    u_tt - c^2 u_zz + (2 pi f_o)^2 u = 0

on a periodic grid, plus the evanescent (below-cutoff) response.

Frequencies f_o, f_drive and wavenumbers k are plain (cycles per unit), so
that a plane wave cos(2 pi k z) oscillates at sqrt(f_o^2 + (c k)^2).
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError
from .grid import Grid1D


@dataclass(frozen=True)
class RealField1D:
    """Two consecutive time levels of a real field; ``u_prev`` lies at t - dt."""

    grid: Grid1D
    u: np.ndarray
    u_prev: np.ndarray
    t: float
    dt: float


def _coefficients(grid, f_o, dt, c):
    courant = c * dt / grid.dz
    omega_dt = 2.0 * math.pi * f_o * dt
    return courant * courant, omega_dt * omega_dt


def check_cfl(grid, f_o, dt, c=1.0):
    if not dt > 0:
        raise ConfigurationError("dt must be positive")
    if c * dt > grid.dz:
        raise ConfigurationError(
            f"CFL violated: c*dt = {c * dt:g} exceeds dz = {grid.dz:g}"
        )
    a, b = _coefficients(grid, f_o, dt, c)
    # highest grid mode: 1 - 2a - b/2 must stay above -1
    if 4.0 * a + b >= 4.0:
        raise ConfigurationError("time step unstable once the mass term is included")


def _apply_operator(grid, u, f_o, c):
    lap = (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / grid.dz**2
    return c * c * lap - (2.0 * math.pi * f_o) ** 2 * u


def initial_field(grid, u0, f_o, dt, v0=None, c=1.0):
    """Field at t = 0 with u_prev from a second-order Taylor start."""
    grid.require_power_of_two()
    check_cfl(grid, f_o, dt, c)
    u0 = np.asarray(u0, dtype=float)
    v0 = np.zeros_like(u0) if v0 is None else np.asarray(v0, dtype=float)
    u_prev = u0 - dt * v0 + 0.5 * dt * dt * _apply_operator(grid, u0, f_o, c)
    return RealField1D(grid, u0.copy(), u_prev, 0.0, dt)


def plane_wave(grid, k, f_o, dt, c=1.0):
    return initial_field(grid, np.cos(2.0 * math.pi * k * grid.z), f_o, dt, c=c)


def evolve_kg(field, f_o, dt, steps, c=1.0):
    if not math.isclose(dt, field.dt, rel_tol=0, abs_tol=0):
        raise ConfigurationError("dt differs from the time step the field was started with")
    check_cfl(field.grid, f_o, dt, c)
    a, b = _coefficients(field.grid, f_o, dt, c)
    u, u_prev = kernels.leapfrog(field.u, field.u_prev, a, b, int(steps))
    return replace(field, u=u, u_prev=u_prev, t=field.t + steps * dt)


def reverse(field):
    """Swap the two time levels; evolving the result runs time backwards."""
    return replace(field, u=field.u_prev.copy(), u_prev=field.u.copy(), t=-field.t)


def energy(field, f_o, c=1.0):
    """Discrete energy between the two stored levels.

    Consistent with int[(u_t)^2 + c^2 (u_z)^2 + w_o^2 u^2] dz and conserved by
    the leapfrog scheme to rounding error.
    """
    g, u, up = field.grid, field.u, field.u_prev
    dz, dt = g.dz, field.dt
    ut = (u - up) / dt
    grad = (np.roll(u, -1) - u) * (np.roll(up, -1) - up) / dz**2
    w = 2.0 * math.pi * f_o
    return float(np.sum(ut * ut + c * c * grad + w * w * u * up) * dz)


def probe_series(field, f_o, dt, steps, probe=0, c=1.0):
    check_cfl(field.grid, f_o, dt, c)
    a, b = _coefficients(field.grid, f_o, dt, c)
    u, u_prev, series = kernels.leapfrog_probe(field.u, field.u_prev, a, b, int(steps), int(probe))
    return replace(field, u=u, u_prev=u_prev, t=field.t + steps * dt), series


def measure_frequency(series, dt, t0=0.0):
    """Oscillation frequency from linearly interpolated zero crossings.

    Crossing times are fitted against their index; the slope is a half period.
    """
    s = np.asarray(series, dtype=float)
    idx = np.nonzero(np.signbit(s[:-1]) != np.signbit(s[1:]))[0]
    if idx.size < 3:
        raise DomainError("too few zero crossings to measure a frequency")
    frac = s[idx] / (s[idx] - s[idx + 1])
    times = t0 + (idx + 1 + frac) * dt  # series[j] sits at t0 + (j + 1) dt
    half_period = np.polyfit(np.arange(idx.size), times, 1)[0]
    return 1.0 / (2.0 * half_period)


def measured_dispersion(k, f_o=1.0, points_per_wavelength=256, courant=0.5,
                        periods=50, c=1.0):
    """Leapfrog frequency of a standing plane wave cos(2 pi k z).

    The periodic domain holds one wavelength; the run lasts at least ``periods`` oscillations.
    """
    if k > 0:
        grid = Grid1D(0.0, 1.0 / k, int(points_per_wavelength))
        dt = courant * grid.dz / c
    else:
        # uniform field: the time step alone sets the error, (w_o dt)^2 / 24
        grid = Grid1D(0.0, 1.0, 16)
        dt = 2e-3 / (2.0 * math.pi * f_o)
    field = plane_wave(grid, k, f_o, dt, c)
    f_expected = math.sqrt(f_o * f_o + (c * k) ** 2)
    steps = int(math.ceil(periods / (f_expected * dt))) + 2
    _, series = probe_series(field, f_o, dt, steps, probe=0, c=c)
    return measure_frequency(series, dt)


def evanescent_decay_rate(f_drive, f_o, c=1.0):
    """Spatial decay rate 2 pi sqrt(f_o^2 - f_drive^2) / c of a below-cutoff drive."""
    if not 0 < f_drive < f_o:
        raise DomainError("evanescent regime requires 0 < f_drive < f_o")
    return 2.0 * math.pi * math.sqrt(f_o * f_o - f_drive * f_drive) / c


@dataclass(frozen=True)
class DrivenResponse:
    z: np.ndarray
    amplitude: np.ndarray
    fit_window: tuple
    decay_rate: float


def driven_decay(f_drive, f_o=1.0, c=1.0, length=6.4, n=1024, source_width=0.1,
                 sponge_width=1.6, sponge_strength=20.0, ramp_time=40.0,
                 settle_time=20.0, fit_window=(0.4, 2.0)):
    """Drive a localized source below cutoff and fit the steady decay of its field.

    The source sits just right of z = 0 and ramps up smoothly; a damping sponge
    fills the right end of the periodic domain, so it also guards the source's
    left side.  The steady amplitude at each z comes from a lock-in average over
    whole drive periods, and the decay rate from a least-squares line through
    log(amplitude) on ``fit_window`` (distances from the source centre).
    """
    if not 0 < f_drive < f_o:
        raise DomainError("evanescent regime requires 0 < f_drive < f_o")
    grid = Grid1D(0.0, length, n)
    z, dz = grid.z, grid.dz
    dt = 0.5 * dz / c
    check_cfl(grid, f_o, dt, c)
    w_d = 2.0 * math.pi * f_drive
    w_o = 2.0 * math.pi * f_o
    z_src = 2.0 * source_width
    source = np.exp(-0.5 * ((z - z_src) / source_width) ** 2)
    s = np.clip((z - (length - sponge_width)) / sponge_width, 0.0, 1.0)
    sigma = sponge_strength * s * s
    damp_plus = 1.0 + 0.5 * sigma * dt
    damp_minus = 1.0 - 0.5 * sigma * dt

    period = 1.0 / f_drive
    n_avg = int(round(4 * period / dt))
    steps = int(math.ceil((ramp_time + settle_time) / dt))
    u_prev = np.zeros(n)
    u = np.zeros(n)
    acc = np.zeros(n, dtype=complex)
    t_avg_start = (steps - n_avg) * dt
    for step in range(steps):
        t = step * dt
        ramp = math.sin(0.5 * math.pi * min(t / ramp_time, 1.0)) ** 2
        lap = (np.roll(u, -1) - 2.0 * u + np.roll(u, 1)) / dz**2
        force = c * c * lap - w_o * w_o * u + ramp * math.sin(w_d * t) * source
        u_next = (2.0 * u - damp_minus * u_prev + dt * dt * force) / damp_plus
        u_prev, u = u, u_next
        if t >= t_avg_start:
            acc += u * np.exp(-1j * w_d * (t + dt))
    amplitude = 2.0 * np.abs(acc) / n_avg
    lo, hi = fit_window
    sel = (z - z_src >= lo) & (z - z_src <= hi)
    slope = np.polyfit(z[sel] - z_src, np.log(amplitude[sel]), 1)[0]
    return DrivenResponse(z=z, amplitude=amplitude, fit_window=(lo, hi), decay_rate=-slope)
