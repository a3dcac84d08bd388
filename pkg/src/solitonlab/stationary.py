"""Time-independent Schrodinger problems in units where hbar and m default to 1.

Scattering uses exact 2x2 propagators of (psi, psi') across each constant
segment, so evanescent and propagating segments are handled by one formula
and every propagator has unit determinant.  Bound states come from a
fourth-order finite-difference Hamiltonian (symmetric, five-diagonal) with
hard walls at the domain ends, or from a Fourier Hamiltonian on a periodic grid.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import linalg, sparse
from scipy.sparse import linalg as sparse_linalg

from .errors import ConfigurationError, DomainError
from .grid import Grid1D
from .potentials import PotentialSpec  # noqa: F401  (re-exported)


def wkb_wavenumber(E, V, mass=1.0, hbar=1.0):
    """Local wavenumber sqrt(2m(E - V))/hbar.

    Below the potential the result is purely imaginary, 1j * kappa, with
    kappa the evanescent decay rate.
    """
    q = 2.0 * mass * (E - V)
    if q >= 0:
        return complex(math.sqrt(q) / hbar, 0.0)
    return complex(0.0, math.sqrt(-q) / hbar)


def group_velocity(E, V, mass=1.0):
    if E < V:
        raise DomainError("group velocity is undefined below the potential")
    return math.sqrt(2.0 * (E - V) / mass)


@dataclass(frozen=True)
class ScatteringResult:
    energy: float
    R_prob: float
    T_prob: float
    r: complex
    t: complex


def _propagator(q, width):
    """Map (psi, psi') across a segment where psi'' = -q psi."""
    if q > 0:
        k = math.sqrt(q)
        c, s = math.cos(k * width), math.sin(k * width)
        return np.array([[c, s / k], [-k * s, c]])
    if q < 0:
        kappa = math.sqrt(-q)
        c, s = math.cosh(kappa * width), math.sinh(kappa * width)
        return np.array([[c, s / kappa], [kappa * s, c]])
    return np.array([[1.0, width], [0.0, 1.0]])


def _q(E, V, mass, hbar):
    return 2.0 * mass * (E - V) / hbar**2


def _require_piecewise(potential):
    if not potential.is_piecewise:
        raise ConfigurationError("scattering needs a piecewise-constant potential")


def transfer_matrix(potential, E, mass=1.0, hbar=1.0):
    """Product of segment propagators across the interior segments."""
    _require_piecewise(potential)
    total = np.eye(2)
    for z0, z1, v in potential.segments[1:-1]:
        total = _propagator(_q(E, v, mass, hbar), z1 - z0) @ total
    return total


def _lead_wavenumbers(potential, E, mass, hbar):
    q_left = _q(E, potential.segments[0][2], mass, hbar)
    q_right = _q(E, potential.segments[-1][2], mass, hbar)
    if q_left <= 0 or q_right <= 0:
        raise DomainError("energy must exceed the potential in both asymptotic leads")
    return math.sqrt(q_left), math.sqrt(q_right)


def solve_scattering(potential, E, mass=1.0, hbar=1.0):
    """Reflection and transmission of a unit wave incident from the left."""
    _require_piecewise(potential)
    k_l, k_r = _lead_wavenumbers(potential, E, mass, hbar)
    (p11, p12), (p21, p22) = transfer_matrix(potential, E, mass, hbar)
    # left of the barrier psi = e^{ik_l z} + r e^{-ik_l z}, right of it t e^{ik_r z}
    a = p11 + 1j * k_l * p12
    b = p11 - 1j * k_l * p12
    c = p21 + 1j * k_l * p22
    d = p21 - 1j * k_l * p22
    r = (1j * k_r * a - c) / (d - 1j * k_r * b)
    t = a + r * b
    return ScatteringResult(
        energy=float(E),
        R_prob=float(abs(r) ** 2),
        T_prob=float(k_r / k_l * abs(t) ** 2),
        r=complex(r),
        t=complex(t),
    )


def scattering_wavefunction(potential, E, z, mass=1.0, hbar=1.0):
    """Stationary scattering state (unit incident amplitude) sampled at ``z``."""
    res = solve_scattering(potential, E, mass, hbar)
    k_l, k_r = _lead_wavenumbers(potential, E, mass, hbar)
    segs = potential.segments
    z = np.asarray(z, dtype=float)
    psi = np.empty(z.shape, dtype=complex)

    z_left = segs[0][1]
    z_right = segs[-1][0]
    left = z < z_left
    x = z[left] - z_left
    psi[left] = np.exp(1j * k_l * x) + res.r * np.exp(-1j * k_l * x)
    right = z >= z_right
    psi[right] = res.t * np.exp(1j * k_r * (z[right] - z_right))

    state = np.array([1.0 + res.r, 1j * k_l * (1.0 - res.r)])
    for z0, z1, v in segs[1:-1]:
        q = _q(E, v, mass, hbar)
        inside = (z >= z0) & (z < z1)
        for i in np.nonzero(inside)[0]:
            psi[i] = (_propagator(q, z[i] - z0) @ state)[0]
        state = _propagator(q, z1 - z0) @ state
    return psi


def born_density(psi, dz):
    """|psi|^2 normalised to unit trapezoidal integral."""
    rho = np.abs(np.asarray(psi)) ** 2
    norm = np.trapezoid(rho, dx=dz)
    if not norm > 0:
        raise DomainError("cannot normalise an identically zero wavefunction")
    return rho / norm


@dataclass(frozen=True)
class BoundStates:
    energies: np.ndarray
    states: np.ndarray  # shape (n_found, n_grid)
    z: np.ndarray
    complete: bool  # False when fewer bound states than requested were found

    @property
    def n_found(self):
        return len(self.energies)


def _fd4_hamiltonian_band(v, dz, mass, hbar):
    """Lower band storage of -(hbar^2/2m) D2 + V with a 4th-order D2.

    Odd reflection through the walls turns the -30 of the first and last
    row into -29, which keeps the matrix symmetric.
    """
    n = v.size
    scale = hbar * hbar / (24.0 * mass * dz * dz)
    band = np.zeros((3, n))
    band[0] = 30.0 * scale + v
    band[0, 0] -= scale
    band[0, -1] -= scale
    band[1, :-1] = -16.0 * scale
    band[2, :-2] = scale
    return band


def _normalise_sign(states, dz):
    for row in states:
        row /= math.sqrt(np.sum(row * row) * dz)
        lead = np.nonzero(np.abs(row) > 1e-3 * np.abs(row).max())[0][0]
        if row[lead] < 0:
            row *= -1.0
    return states


def solve_bound_states(potential, n_states, n_grid=2048, mass=1.0, hbar=1.0,
                       method="fd4", walls=False):
    """Lowest eigenpairs of -(hbar^2/2m) psi'' + V psi = E psi.

    ``method="fd4"`` samples ``n_grid`` interior points between hard walls at
    the domain ends; ``method="fourier"`` uses a periodic grid of ``n_grid``
    points and a spectral kinetic operator.  Unless ``walls`` is set, states
    whose energy reaches the lower of the two boundary potential values are
    box artifacts and are dropped, which may leave ``complete`` False.
    """
    if potential.domain is None:
        raise ConfigurationError("bound-state problems need a finite domain")
    if n_states < 1:
        raise DomainError("n_states must be at least 1")
    z_min, z_max = potential.domain
    if method == "fd4":
        dz = (z_max - z_min) / (n_grid + 1)
        z = z_min + dz * np.arange(1, n_grid + 1)
        v = potential(z)
        band = _fd4_hamiltonian_band(v, dz, mass, hbar)
        count = min(n_states, n_grid)
        if count < n_grid // 4:
            # shift-invert below the spectrum: a banded LU instead of a full reduction
            h = sparse.diags([band[2, :-2], band[1, :-1], band[0], band[1, :-1], band[2, :-2]],
                             [-2, -1, 0, 1, 2], format="csc")
            energies, vecs = sparse_linalg.eigsh(h, k=count, sigma=v.min() - 1.0, which="LM",
                                                 v0=np.ones(n_grid), tol=0)
            order = np.argsort(energies)
            energies, vecs = energies[order], vecs[:, order]
        else:
            energies, vecs = linalg.eig_banded(band, lower=True, select="i",
                                               select_range=(0, count - 1))
    elif method == "fourier":
        grid = Grid1D(z_min, z_max, n_grid)
        z, dz = grid.z, grid.dz
        v = potential(z)
        column = np.fft.ifft(hbar * hbar * grid.k**2 / (2.0 * mass)).real
        h = linalg.circulant(column) + np.diag(v)
        count = min(n_states, n_grid)
        energies, vecs = linalg.eigh(h, subset_by_index=(0, count - 1))
    else:
        raise ConfigurationError(f"unknown bound-state method {method!r}")

    if not walls:
        ceiling = min(potential(np.array([z_min]))[0], potential(np.array([z_max]))[0])
        keep = energies < ceiling
        energies, vecs = energies[keep], vecs[:, keep]
    states = _normalise_sign(np.ascontiguousarray(vecs.T), dz)
    return BoundStates(energies=energies, states=states, z=z,
                       complete=len(energies) >= n_states)
