"""Polar decomposition psi = R exp(iS/hbar), the quantum potential
Q = -(hbar^2/2m) R''/R, and the residuals of the two real equations that
the decomposition turns the Schrodinger equation into.

Nodes (|psi| below ``floor`` times its maximum) leave the phase undefined;
those points are masked and carry NaN rather than an interpolated value.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

DEFAULT_FLOOR = 1e-8


@dataclass(frozen=True)
class PolarField:
    z: np.ndarray
    R: np.ndarray
    S: np.ndarray  # action; NaN where masked
    mask: np.ndarray  # True where the phase is undefined
    hbar: float = 1.0

    @property
    def dz(self):
        return self.z[1] - self.z[0]


def _runs(valid):
    """(start, stop) index pairs of consecutive True entries."""
    edges = np.diff(np.concatenate(([0], valid.astype(np.int8), [0])))
    return zip(np.nonzero(edges == 1)[0], np.nonzero(edges == -1)[0])


def decompose(psi, z, hbar=1.0, floor=DEFAULT_FLOOR):
    psi = np.asarray(psi, dtype=complex)
    R = np.abs(psi)
    mask = R < floor * R.max() if R.max() > 0 else np.ones(R.shape, dtype=bool)
    S = np.full(R.shape, np.nan)
    phase = np.angle(psi)
    for start, stop in _runs(~mask):
        S[start:stop] = np.unwrap(phase[start:stop])
    return PolarField(z=np.asarray(z, dtype=float), R=R, S=hbar * S, mask=mask, hbar=hbar)


def recompose(polar):
    phase = np.where(polar.mask, 0.0, polar.S / polar.hbar)
    return polar.R * np.exp(1j * phase)


def second_derivative(f, dz, order=2, periodic=False):
    """Central second derivative; non-periodic end points come back NaN.

    ``order`` is 2, 4 or ``"spectral"`` (periodic samples only).
    """
    f = np.asarray(f, dtype=float)
    if order == "spectral":
        if not periodic:
            raise ConfigurationError("spectral derivatives need periodic samples")
        k = 2.0 * np.pi * np.fft.fftfreq(f.size, d=dz)
        return np.fft.ifft(-(k * k) * np.fft.fft(f)).real
    if order == 2:
        out = (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / dz**2
        width = 1
    elif order == 4:
        out = (-np.roll(f, -2) + 16.0 * np.roll(f, -1) - 30.0 * f
               + 16.0 * np.roll(f, 1) - np.roll(f, 2)) / (12.0 * dz**2)
        width = 2
    else:
        raise ConfigurationError(f"unsupported derivative order {order!r}")
    if not periodic:
        out[:width] = np.nan
        out[-width:] = np.nan
    return out


def first_derivative(f, dz, periodic=False, axis=-1):
    f = np.asarray(f, dtype=float)
    out = (np.roll(f, -1, axis=axis) - np.roll(f, 1, axis=axis)) / (2.0 * dz)
    if not periodic:
        idx = [slice(None)] * f.ndim
        idx[axis] = [0, -1]
        out[tuple(idx)] = np.nan
    return out


def quantum_potential(R, dz, mass=1.0, hbar=1.0, order=2, periodic=False,
                      floor=DEFAULT_FLOOR):
    """-(hbar^2/2m) R''/R, NaN where R falls below ``floor`` * max(R)."""
    R = np.asarray(R, dtype=float)
    d2 = second_derivative(R, dz, order=order, periodic=periodic)
    small = R < floor * R.max()
    with np.errstate(divide="ignore", invalid="ignore"):
        Q = -(hbar * hbar / (2.0 * mass)) * d2 / R
    Q[small] = np.nan
    return Q


def sech_quantum_potential(a, z, mass=1.0, hbar=1.0):
    az = a * np.asarray(z, dtype=float)
    sech2 = 1.0 / np.cosh(az) ** 2
    return -(hbar * hbar * a * a / (2.0 * mass)) * (np.tanh(az) ** 2 - sech2)


def sech_quantum_potential_product_form(a, z, mass=1.0, hbar=1.0):
    """The same closed form written as -(hbar^2 a^2/2m)(sinh^2 - 1) sech^2."""
    az = a * np.asarray(z, dtype=float)
    return -(hbar * hbar * a * a / (2.0 * mass)) * (np.sinh(az) ** 2 - 1.0) / np.cosh(az) ** 2


@dataclass(frozen=True)
class QuantumPotentialProfile:
    z: np.ndarray
    Q: np.ndarray


def sech_profile(a=1.0, z_max=6.0, n=1201, mass=1.0, hbar=1.0, normalized=True):
    """Closed-form Q for R = sech(az); normalised divides by hbar^2 a^2/2m."""
    z = np.linspace(-z_max, z_max, n)
    q = sech_quantum_potential(a, z, mass, hbar)
    if normalized:
        q = q / (hbar * hbar * a * a / (2.0 * mass))
    return QuantumPotentialProfile(z=z, Q=q)


def _stack(history):
    if len(history) < 3:
        raise ConfigurationError("residuals need at least three time levels")
    R = np.stack([p.R for p in history])
    S = np.stack([p.S for p in history])
    mask = np.stack([p.mask for p in history])
    # spatial unwrapping starts afresh at every level; join the levels in time
    S = history[0].hbar * np.unwrap(np.nan_to_num(S / history[0].hbar), axis=0)
    S[mask] = np.nan
    return R, S, mask


def _potential_values(V, z):
    if V is None:
        return np.zeros_like(z)
    if callable(V):
        return V(z)
    return np.asarray(V, dtype=float)


def hamilton_jacobi_residual(history, dt, V=None, mass=1.0, rest_energy=0.0,
                             order=2, floor=DEFAULT_FLOOR):
    """S_t + S_z^2/2m + rest_energy + V + Q at the interior time levels.

    ``history`` is a sequence of PolarField at uniform spacing ``dt``.  The
    result has one row per interior level; NaN marks masked or edge points.
    """
    R, S, _ = _stack(history)
    z = history[0].z
    dz = history[0].dz
    hbar = history[0].hbar
    S_t = (S[2:] - S[:-2]) / (2.0 * dt)
    S_z = first_derivative(S[1:-1], dz)
    Q = np.stack([quantum_potential(r, dz, mass, hbar, order=order, floor=floor)
                  for r in R[1:-1]])
    return S_t + S_z**2 / (2.0 * mass) + rest_energy + _potential_values(V, z) + Q


def continuity_residual(history, dt, mass=1.0):
    """d(R^2)/dt + d(R^2 S_z/m)/dz at the interior time levels."""
    R, S, _ = _stack(history)
    dz = history[0].dz
    rho = R * R
    rho_t = (rho[2:] - rho[:-2]) / (2.0 * dt)
    flux = rho[1:-1] * first_derivative(S[1:-1], dz) / mass
    return rho_t + first_derivative(flux, dz)


def velocity_field(polar, mass=1.0):
    """Bohmian velocity S_z/m, for diagnostic streamline plots only."""
    return first_derivative(polar.S, polar.dz) / mass


@dataclass(frozen=True)
class CancellationReport:
    profile: str
    max_deviation: float  # max |Q + N| with N the nonlinear term written as a potential
    hj_difference: float  # max |(HJ with Q and -Q) - (classical HJ)|
    closed_form_error: float | None  # finite-difference Q against the sech closed form
    note: str


def cancellation_check(a, V=None, z=None, mass=1.0, hbar=1.0, profile="sech", R=None,
                       S=None, floor=DEFAULT_FLOOR):
    """Check that the nonlinear term cancels Q pointwise.

    The nonlinear term (hbar^2/2m)(d^2|psi|/dz^2)/|psi| is evaluated with the
    same stencil as Q.  ``profile`` is "sech", "gaussian", or "custom" with
    ``R`` supplied.  The phase ``S`` (default zero) and potential only enter
    the Hamilton-Jacobi comparison.
    """
    if z is None:
        z = np.linspace(-10.0 / a, 10.0 / a, 20001)
    z = np.asarray(z, dtype=float)
    dz = z[1] - z[0]
    if profile == "sech":
        R = 1.0 / np.cosh(a * z)
    elif profile == "gaussian":
        R = np.exp(-0.5 * (a * z) ** 2)
    elif R is None:
        raise ConfigurationError("custom profile needs R")
    R = np.asarray(R, dtype=float)
    S = np.zeros_like(z) if S is None else np.asarray(S, dtype=float)

    Q = quantum_potential(R, dz, mass, hbar, floor=floor)
    d2 = second_derivative(R, dz)
    with np.errstate(divide="ignore", invalid="ignore"):
        N = (hbar * hbar / (2.0 * mass)) * d2 / R
    N[np.isnan(Q)] = np.nan
    v = _potential_values(V, z)
    kinetic = first_derivative(S, dz) ** 2 / (2.0 * mass)
    hj_quantum = kinetic + v + Q + N
    hj_classical = kinetic + v
    valid = ~np.isnan(hj_quantum)

    closed = None
    if profile == "sech":
        closed = float(np.nanmax(np.abs(Q - sech_quantum_potential(a, z, mass, hbar))))
    note = ("the added term equals -Q for any modulus profile, so the cancellation "
            "does not single out sech")
    return CancellationReport(
        profile=profile,
        max_deviation=float(np.nanmax(np.abs(Q + N))),
        hj_difference=float(np.max(np.abs(hj_quantum[valid] - hj_classical[valid]))),
        closed_form_error=closed,
        note=note,
    )
