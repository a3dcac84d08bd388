"""Second-moment widths of pulse envelopes and the narrow-band ambiguity function.

Widths use the density |u|^2 / N in position and the discrete spectral
density |U(k)|^2 in angular wavenumber, so that the Gaussian exp(-x^2/2)
attains dx * dk = 1/2.  The ambiguity function of a unit-energy pulse is

    chi(tau, f) = int u(t) u*(t - tau) exp(i 2 pi f t) dt

sampled at delays that are whole multiples of the sample spacing.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigurationError, DomainError
from .grid import Grid1D

SHAPES = ("gaussian", "sech", "rectangular", "custom")
VOLUME_TOLERANCE = 1e-3


@dataclass(frozen=True)
class PulseProfile:
    grid: Grid1D
    samples: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        u = np.asarray(self.samples, dtype=complex)
        if u.shape != (self.grid.n,):
            raise ConfigurationError("pulse samples do not match the grid")
        if not np.all(np.isfinite(u)):
            raise DomainError("pulse samples must be finite")
        object.__setattr__(self, "samples", u)

    @property
    def energy(self):
        return float(np.sum(np.abs(self.samples) ** 2) * self.grid.dz)

    def normalized(self):
        e = self.energy
        if not e > 0:
            raise DomainError("cannot normalise a zero pulse")
        return PulseProfile(self.grid, self.samples / math.sqrt(e), self.label)


def gaussian_pulse(grid, width=1.0, center=0.0, chirp=0.0):
    """exp(-(x - center)^2 / (2 width^2) + i chirp (x - center)^2)."""
    x = grid.z - center
    return PulseProfile(grid, np.exp(-0.5 * (x / width) ** 2 + 1j * chirp * x * x), "gaussian")


def sech_pulse(grid, width=1.0, center=0.0):
    return PulseProfile(grid, 1.0 / np.cosh((grid.z - center) / width), "sech")


def rectangular_pulse(grid, duration=1.0, center=0.0):
    """Unit samples on duration / dz consecutive points starting at center - duration/2."""
    count = int(round(duration / grid.dz))
    if count < 1 or count > grid.n:
        raise DomainError("rectangular pulse must span between 1 and n samples")
    first = int(round((center - 0.5 * duration - grid.z_min) / grid.dz))
    u = np.zeros(grid.n)
    u[max(first, 0):max(first, 0) + count] = 1.0
    return PulseProfile(grid, u, "rectangular")


def hermite_functions(x, n_max):
    """Orthonormal Hermite functions h_0..h_n_max at x (stable recurrence)."""
    x = np.asarray(x, dtype=float)
    h = np.empty((n_max + 1, x.size))
    h[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        h[1] = math.sqrt(2.0) * x * h[0]
    for j in range(2, n_max + 1):
        h[j] = math.sqrt(2.0 / j) * x * h[j - 1] - math.sqrt((j - 1) / j) * h[j - 2]
    return h


def hermite_pulse(grid, coefficients, width=1.0, center=0.0):
    coefficients = np.asarray(coefficients, dtype=complex)
    h = hermite_functions((grid.z - center) / width, coefficients.size - 1)
    return PulseProfile(grid, coefficients @ h, "custom")


def random_hermite_pulse(grid, rng, max_order=8, width_range=(0.5, 2.0), shift=2.0):
    order = int(rng.integers(0, max_order + 1))
    coeffs = rng.normal(size=order + 1) + 1j * rng.normal(size=order + 1)
    width = float(rng.uniform(*width_range))
    return hermite_pulse(grid, coeffs, width, float(rng.uniform(-shift, shift)))


@dataclass(frozen=True)
class Widths:
    delta_x: float
    delta_k: float
    divergent: bool  # exact delta_k is infinite; delta_k is the grid-limited value

    @property
    def product(self):
        return self.delta_x * self.delta_k


def _spectral_tail(power, k, k_max):
    """Share of the k^2-weighted spectrum in the upper half of the band."""
    weighted = power * k * k
    total = weighted.sum()
    return float(weighted[np.abs(k) > 0.5 * k_max].sum() / total) if total > 0 else 0.0


def moment_widths(pulse):
    u = pulse.samples
    rho = np.abs(u) ** 2
    norm = rho.sum()
    if not norm > 0:
        raise DomainError("moment widths of a zero pulse are undefined")
    x = pulse.grid.z
    mean_x = np.sum(x * rho) / norm
    var_x = np.sum((x - mean_x) ** 2 * rho) / norm
    k = pulse.grid.k
    power = np.abs(np.fft.fft(u)) ** 2
    mean_k = np.sum(k * power) / power.sum()
    var_k = np.sum((k - mean_k) ** 2 * power) / power.sum()
    divergent = pulse.label == "rectangular" or _spectral_tail(power, k, np.abs(k).max()) > 1e-6
    return Widths(delta_x=float(math.sqrt(var_x)), delta_k=float(math.sqrt(var_k)),
                  divergent=bool(divergent))


def uncertainty_product(pulse):
    return moment_widths(pulse).product


def chirped_gaussian_product(chirp):
    """Closed form for exp(-x^2/2 + i c x^2): (1/2) sqrt(1 + 4 c^2)."""
    return 0.5 * math.sqrt(1.0 + 4.0 * chirp * chirp)


SECH_PRODUCT = math.pi / 6.0  # sqrt(pi^2/12 * 1/3) for sech(x)


@dataclass(frozen=True)
class AmbiguitySurface:
    delay_axis: np.ndarray
    doppler_axis: np.ndarray
    magnitude: np.ndarray  # |chi|, shape (n_delay, n_doppler)
    volume: float  # lattice sum of |chi|^2 dtau df
    warning: bool  # lattice runs past the record or misses part of the volume

    def rows(self):
        """Long-format (tau, fd, magnitude) rows, delay-major."""
        for i, tau in enumerate(self.delay_axis):
            for j, fd in enumerate(self.doppler_axis):
                yield float(tau), float(fd), float(self.magnitude[i, j])


def _shifted_conj(u, m):
    """conj(u(t - m dt)) with zero fill outside the record."""
    out = np.zeros_like(u)
    if m >= 0:
        out[m:] = np.conj(u[:u.size - m])
    else:
        out[:m] = np.conj(u[-m:])
    return out


def ambiguity_surface(pulse, n_delay=None, n_doppler=None, oversample=1):
    """|chi| on delays m dt, |m| <= (n_delay - 1)/2, and Doppler bins of a
    length oversample * n FFT (the n_doppler lowest |f|, ordered).

    The defaults span every delay with overlap and the whole Doppler band, on
    which the lattice sum of |chi|^2 equals the squared pulse energy exactly.
    """
    p = pulse.normalized()
    u, dt, n = p.samples, p.grid.dz, p.grid.n
    n_delay = 2 * n - 1 if n_delay is None else int(n_delay)
    if n_delay < 1 or n_delay % 2 == 0:
        raise ConfigurationError("n_delay must be a positive odd count")
    n_fft = int(oversample) * n
    if n_fft < n:
        raise ConfigurationError("oversample must be at least 1")
    n_doppler = n_fft if n_doppler is None else int(n_doppler)
    if not 1 <= n_doppler <= n_fft:
        raise ConfigurationError("n_doppler must lie between 1 and the FFT length")

    freqs = np.fft.fftfreq(n_fft, d=dt)
    order = np.argsort(np.abs(freqs), kind="stable")[:n_doppler]
    order = order[np.argsort(freqs[order], kind="stable")]
    half = (n_delay - 1) // 2
    shifts = np.arange(-half, half + 1)
    t = p.grid.z
    mag = np.empty((n_delay, n_doppler))
    for row, m in enumerate(shifts):
        prod = u * _shifted_conj(u, int(m))
        # sum_t prod(t) exp(+i 2 pi f t): inverse FFT, referenced to t[0]
        spec = np.fft.ifft(prod, n=n_fft) * n_fft * dt
        spec *= np.exp(2j * np.pi * freqs * t[0])
        mag[row] = np.abs(spec[order])
    df = 1.0 / (n_fft * dt)
    volume = float(np.sum(mag**2) * dt * df)
    # rows past the record are identically zero; a truncated lattice loses volume
    warning = half >= n or abs(volume - 1.0) > VOLUME_TOLERANCE
    return AmbiguitySurface(delay_axis=shifts * dt, doppler_axis=freqs[order], magnitude=mag,
                            volume=volume, warning=bool(warning))


def ambiguity_value(pulse, delay_samples, doppler):
    """chi at one delay (a whole number of samples) and any Doppler frequency."""
    p = pulse.normalized()
    u, dt, t = p.samples, p.grid.dz, p.grid.z
    prod = u * _shifted_conj(u, int(delay_samples))
    return complex(np.sum(prod * np.exp(2j * np.pi * doppler * t)) * dt)
