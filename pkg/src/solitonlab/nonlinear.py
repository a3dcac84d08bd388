"""Periodic spectral evolvers for three nonlinear wave equations.

nls  i u_t + u_zz + 2|u|^2 u = 0                      (Strang split step)
gp   i hbar phi_t = -(hbar^2/2m) phi_zz + (V + g|phi|^2 [+ m c^2]) phi
                                                       (Strang split step)
nlq  i hbar psi_t = -(hbar^2/2m) psi_zz + V psi + (hbar^2/2m) (|psi|_zz/|psi|) psi
                                                       (dealiased RK4)

The last term of ``nlq`` is minus the quantum potential, so the modulus obeys
pressureless transport: the phase follows the classical Hamilton-Jacobi
equation and a sech envelope neither spreads nor changes shape.
"""

from dataclasses import dataclass, field as dc_field, replace
import math

import numpy as np
from scipy import fft

from . import kernels
from .errors import ConfigurationError, NumericalAbort
from .grid import Grid1D

EQUATIONS = ("nls", "gp", "nlq")
NORM_DRIFT_LIMIT = 1e-6
RK4_IMAGINARY_LIMIT = 2.0 * math.sqrt(2.0)  # |z| bound of RK4 stability on the imaginary axis


@dataclass(frozen=True)
class ComplexField1D:
    grid: Grid1D
    u: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.grid.require_power_of_two()
        u = np.asarray(self.u, dtype=complex)
        if u.shape != (self.grid.n,):
            raise ConfigurationError("field samples do not match the grid")
        object.__setattr__(self, "u", u)


@dataclass(frozen=True)
class ConservedSet:
    norm: float
    momentum: float
    energy: float


def breather_exact(a, v, z0, z, t):
    """a exp[i v z/2 + i (a^2 - v^2/4) t] sech[a (z - v t - z0)]"""
    z = np.asarray(z, dtype=float)
    phase = 0.5 * v * z + (a * a - 0.25 * v * v) * t
    return a * np.exp(1j * phase) / np.cosh(a * (z - v * t - z0))


def sech_field(grid, a=1.0, v=0.0, z0=0.0, amplitude=None, wavenumber=None, periodic=False):
    """amplitude * sech(a (z - z0)) * exp(i wavenumber z).

    Defaults give the NLS breather at t = 0 (amplitude a, wavenumber v/2).
    ``periodic`` sums the periodic images of the envelope so that the modulus
    is smooth across the wrap; the plane-wave factor must then fit the period.
    """
    amplitude = a if amplitude is None else amplitude
    wavenumber = 0.5 * v if wavenumber is None else wavenumber
    z = grid.z
    if periodic:
        period = grid.z_max - grid.z_min
        cycles = wavenumber * period / (2.0 * math.pi)
        if abs(cycles - round(cycles)) > 1e-9:
            raise ConfigurationError("wavenumber does not fit a whole number of cycles in the period")
        images = int(math.ceil(40.0 / (abs(a) * period))) + 1
        envelope = sum(1.0 / np.cosh(a * (z - z0 + m * period)) for m in range(-images, images + 1))
    else:
        envelope = 1.0 / np.cosh(a * (z - z0))
    return ComplexField1D(grid, amplitude * np.exp(1j * wavenumber * z) * envelope)


def gaussian_field(grid, width=1.0, z0=0.0, wavenumber=0.0, amplitude=1.0):
    u = amplitude * np.exp(-0.5 * ((grid.z - z0) / width) ** 2 + 1j * wavenumber * grid.z)
    return ComplexField1D(grid, u)


def _spectral_dz(u, k):
    return np.fft.ifft(1j * k * np.fft.fft(u))


def _potential_samples(V, grid):
    if V is None:
        return np.zeros(grid.n)
    if callable(V):
        return np.asarray(V(grid.z), dtype=float)
    return np.asarray(V, dtype=float)


def _linear_force(V):
    """(force, center) when V is the analytic ramp -F (z - center), else None."""
    if getattr(V, "analytic", None) == "linear":
        return float(V.params["force"]), float(V.params["center"])
    return None


def norm(field):
    return float(field.grid.integrate(np.abs(field.u) ** 2))


def centroid(field):
    rho = np.abs(field.u) ** 2
    return float(np.sum(field.grid.z * rho) / np.sum(rho))


def second_moment(field):
    rho = np.abs(field.u) ** 2
    z = field.grid.z
    zc = np.sum(z * rho) / np.sum(rho)
    return float(np.sum((z - zc) ** 2 * rho) / np.sum(rho))


def conserved_set(field, equation, V=None, g=0.0, mass=1.0, hbar=1.0, rest_energy=0.0):
    """Norm, momentum Im int u* u_z and the equation's Hamiltonian.

    ``rest_energy`` is the m c^2 offset of the gp equation when it is kept.
    """
    if equation not in EQUATIONS:
        raise ConfigurationError(f"unknown equation {equation!r}")
    grid, u = field.grid, field.u
    ramp = _linear_force(V)
    if ramp:
        # differentiate the periodic factor of the tilted field, then restore the tilt
        q = ramp[0] * field.t / hbar
        tilt = np.exp(1j * q * (grid.z - ramp[1]))
        u_z = tilt * (_spectral_dz(u / tilt, grid.k) + 1j * q * u / tilt)
    else:
        u_z = _spectral_dz(u, grid.k)
    rho = np.abs(u) ** 2
    n = grid.integrate(rho)
    momentum = grid.integrate(np.imag(np.conj(u) * u_z))
    grad2 = np.abs(u_z) ** 2
    if equation == "nls":
        energy = grid.integrate(grad2 - rho * rho)
    else:
        v = _potential_samples(V, grid)
        kinetic = hbar * hbar / (2.0 * mass) * grad2
        if equation == "gp":
            energy = grid.integrate(kinetic + (v + rest_energy) * rho + 0.5 * g * rho * rho)
        else:
            r_z = _spectral_dz(np.abs(u), grid.k).real
            energy = grid.integrate(kinetic - hbar * hbar / (2.0 * mass) * r_z**2 + v * rho)
    return ConservedSet(norm=float(n), momentum=float(momentum), energy=float(energy))


def _check_norm(u, grid, n0, t):
    if n0 == 0:
        return
    drift = abs(grid.integrate(np.abs(u) ** 2) - n0) / n0
    if drift > NORM_DRIFT_LIMIT:
        raise NumericalAbort(
            f"norm drift {drift:.3e} exceeds {NORM_DRIFT_LIMIT:g} at t = {t:g}",
            {"norm_drift": drift, "t": t},
        )


def _strang(field, dt, steps, half_linear, offset, coef, check_every):
    """Strang splitting with the inner linear half steps fused.

    ``half_linear`` multiplies the spectrum for dt/2; the nonlinear step
    rotates each sample by offset + coef |u|^2 over a full dt.
    """
    grid = field.grid
    u = field.u.copy()
    n0 = grid.integrate(np.abs(u) ** 2)
    full_linear = half_linear * half_linear
    offset = np.ascontiguousarray(offset, dtype=float)
    done = 0
    while done < steps:
        chunk = min(check_every, steps - done)
        u_hat = fft.fft(u) * half_linear
        for i in range(chunk):
            u = fft.ifft(u_hat, overwrite_x=True)
            kernels.phase_rotate(u, offset, coef)
            u_hat = fft.fft(u)
            u_hat *= half_linear if i == chunk - 1 else full_linear
        u = fft.ifft(u_hat, overwrite_x=True)
        done += chunk
        _check_norm(u, grid, n0, field.t + done * dt)
    return replace(field, u=u, t=field.t + steps * dt)


def evolve_nls(u0, dt, steps, check_every=1000):
    half = np.exp(-0.5j * u0.grid.k**2 * dt)
    return _strang(u0, dt, int(steps), half, np.zeros(u0.grid.n), 2.0 * dt, check_every)


def evolve_gp(phi0, V=None, g=0.0, include_rest=False, dt=1e-3, steps=1, mass=1.0,
              hbar=1.0, c=1.0, check_every=1000):
    """Gross-Pitaevskii evolution; ``include_rest`` keeps the m c^2 phase rotation."""
    grid = phi0.grid
    if _linear_force(V):
        raise ConfigurationError("gp needs a periodic potential; use periodic_ramp for a ramp")
    v = _potential_samples(V, grid)
    if include_rest:
        v = v + mass * c * c
    half = np.exp(-0.25j * hbar * grid.k**2 * dt / mass)
    return _strang(phi0, dt, int(steps), half, -v * dt / hbar, -g * dt / hbar, check_every)


def gp_nls_map(g):
    """Scaling that turns gp (hbar = m = 1, V = 0, g < 0) into nls.

    phi(z, t) = u(z, t/2) / sqrt(-g); returns (amplitude factor, time factor).
    """
    if not g < 0:
        raise ConfigurationError("the gp to nls map needs an attractive coupling g < 0")
    return 1.0 / math.sqrt(-g), 0.5


def locked_coupling(a, amplitude, mass=1.0, hbar=1.0):
    """g for which g|A sech(az)|^2 equals -Q of sech(az) up to a constant."""
    return -(hbar * a) ** 2 / (mass * amplitude**2)


@dataclass
class NLQDiagnostics:
    underflow_fraction: float = 0.0
    norm_drift: float = 0.0
    history: list = dc_field(default_factory=list)


def dealias_mask(grid, fraction=2.0 / 3.0):
    """Fourier modes kept by the nlq evolver (two-thirds rule by default)."""
    k = np.abs(grid.k)
    return k <= fraction * k.max()


def _underflow_fraction(u, eps_rel):
    r = np.abs(u)
    peak = r.max()
    if peak == 0.0:
        return 0.0
    active = np.nonzero(r > 1e-3 * peak)[0]
    hull = r[active[0]:active[-1] + 1]
    return float(np.count_nonzero(hull < eps_rel * peak)) / hull.size


def evolve_nlq(psi0, V=None, dt=1e-3, steps=1, eps=1e-8, mass=1.0, hbar=1.0,
               check_every=100, diagnostics=None):
    """Evolve the quantum-potential-cancelling equation by classical RK4.

    The added term is evaluated as (hbar^2/2m) |psi|_zz * psi / R_reg with
    R_reg = max(|psi|, eps * max|psi|), so away from the floor it is exactly
    the phase-carrying second derivative of the modulus and cancels the
    modulus part of the dispersion inside every stage.  Splitting the two
    apart (split step or integrating factor) destroys that cancellation and
    is unstable.  Products are dealiased with the two-thirds rule; the state
    is projected onto the retained modes at the start.

    A linear ramp V = -F (z - c) has no periodic samples.  It is carried
    exactly by evolving chi = exp(-i F t (z - c) / hbar) psi, whose kinetic
    term uses the shifted wavenumber k + F t / hbar.
    """
    grid = psi0.grid
    ramp = _linear_force(V)
    force, center = ramp if ramp else (0.0, 0.0)
    v = np.zeros(grid.n) if ramp else _potential_samples(V, grid)
    keep = dealias_mask(grid)
    c_kin = hbar / (2.0 * mass)
    steps = int(steps)
    q_max = abs(force) * max(abs(psi0.t), abs(psi0.t + steps * dt)) / hbar
    stiff = dt * c_kin * float(np.max((np.abs(grid.k[keep]) + q_max) ** 2))
    if stiff > RK4_IMAGINARY_LIMIT:
        raise ConfigurationError(
            f"dt = {dt:g} is outside the RK4 stability interval for this grid "
            f"(dt * hbar/2m * k_max^2 = {stiff:.3g} > {RK4_IMAGINARY_LIMIT:.3g})"
        )
    kr2 = (2.0 * np.pi * fft.rfftfreq(grid.n, d=grid.dz)) ** 2
    n = grid.n
    lin_rest = np.where(keep, -1j * c_kin * grid.k**2, 0.0)

    def linear(t):
        if not force:
            return lin_rest
        return np.where(keep, -1j * c_kin * (grid.k + force * t / hbar) ** 2, 0.0)

    def tilt(t):
        return np.exp(1j * force * t * (grid.z - center) / hbar)

    def rhs(u_hat, t):
        lin = linear(t)
        u = fft.ifft(u_hat)
        r = np.abs(u)
        peak = r.max()
        if peak == 0.0:
            return lin * u_hat
        r_zz = fft.irfft(-kr2 * fft.rfft(r), n=n)
        r_reg = np.maximum(r, eps * peak)
        nl = fft.fft(-1j * (c_kin * r_zz / r_reg + v / hbar) * u)
        nl[~keep] = 0.0
        return lin * u_hat + nl

    t0 = psi0.t
    u_hat = fft.fft(psi0.u / tilt(t0) if force else psi0.u)
    u_hat[~keep] = 0.0
    n0 = grid.integrate(np.abs(psi0.u) ** 2)
    diag = diagnostics if diagnostics is not None else NLQDiagnostics()
    for s in range(steps):
        t = t0 + s * dt
        k1 = rhs(u_hat, t)
        k2_ = rhs(u_hat + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = rhs(u_hat + 0.5 * dt * k2_, t + 0.5 * dt)
        k4 = rhs(u_hat + dt * k3, t + dt)
        u_hat = u_hat + (dt / 6.0) * (k1 + 2.0 * (k2_ + k3) + k4)
        if (s + 1) % check_every == 0 or s == steps - 1:
            u = fft.ifft(u_hat)
            t = t0 + (s + 1) * dt
            if not np.all(np.isfinite(u)):
                raise NumericalAbort(f"non-finite field at t = {t:g}", {"t": t})
            frac = _underflow_fraction(u, eps)
            diag.underflow_fraction = max(diag.underflow_fraction, frac)
            if frac > 0.1:
                raise NumericalAbort(
                    f"modulus below the floor on {frac:.1%} of the active support at t = {t:g}",
                    {"underflow_fraction": frac, "t": t},
                )
            if n0 > 0:
                diag.norm_drift = float(abs(grid.integrate(np.abs(u) ** 2) - n0) / n0)
            _check_norm(u, grid, n0, t)
    t_end = t0 + steps * dt
    u = fft.ifft(u_hat)
    return replace(psi0, u=u * tilt(t_end) if force else u, t=t_end)


def evolve(equation, field, dt, steps, V=None, g=0.0, include_rest=False, eps=1e-8,
           mass=1.0, hbar=1.0):
    if equation == "nls":
        return evolve_nls(field, dt, steps)
    if equation == "gp":
        return evolve_gp(field, V, g, include_rest, dt, steps, mass, hbar)
    if equation == "nlq":
        return evolve_nlq(field, V, dt, steps, eps, mass, hbar)
    raise ConfigurationError(f"unknown equation {equation!r}")
