"""Hidden-phase barrier scattering.

Each corpuscle carries a zigzag phase theta, uniform on [0, 2 pi).  The
outcome at a barrier is a deterministic function of theta (the phase-window
rule): it is transmitted iff theta / 2 pi < T, with T the wave-mechanical
transmission probability.  All randomness lives in theta, which is drawn
from Philox4x32-10 keyed by the 64-bit seed.  Sample i of a stream is a pure
function of (seed, stream, i), so any partition of the index range over
workers gives the same ensemble.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import enum
import math

import numpy as np

from . import kernels
from .errors import DomainError
from .stationary import solve_scattering

PRNG = "philox4x32-10"
RULE_VERSION = "phase-window/1"
TWO_PI = 2.0 * math.pi


class Outcome(enum.Enum):
    REFLECT = "reflect"
    TRANSMIT = "transmit"


@dataclass(frozen=True)
class CorpuscleState:
    theta: float  # hidden zigzag phase
    v: float = 0.0  # longitudinal speed, fraction of c

    def __post_init__(self):
        if not 0.0 <= self.theta < TWO_PI:
            raise DomainError(f"theta = {self.theta!r} outside [0, 2 pi)")
        if not 0.0 <= self.v < 1.0:
            raise DomainError(f"v = {self.v!r} outside [0, 1)")


def seed_key(seed):
    """Split a 64-bit seed into the two 32-bit Philox key words."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise DomainError("seed must be an unsigned 64-bit integer")
    return seed & 0xFFFFFFFF, seed >> 32


def sample_thetas(seed, n, stream=0, start=0):
    """theta_i = 2 pi u_i for i in [start, start + n); u has 53 random bits."""
    k0, k1 = seed_key(seed)
    return kernels.uniforms(k0, k1, int(stream), int(start), int(n)) * TWO_PI


def sample_phase(seed, n, v=0.0, stream=0):
    if n < 1:
        raise DomainError("n must be at least 1")
    return [CorpuscleState(float(t), v) for t in sample_thetas(seed, n, stream)]


def _check_probability(wave_T):
    if not 0.0 <= wave_T <= 1.0:
        raise DomainError(f"transmission probability {wave_T!r} outside [0, 1]")


def scatter_decision(state, wave_T):
    _check_probability(wave_T)
    return Outcome.TRANSMIT if state.theta / TWO_PI < wave_T else Outcome.REFLECT


def count_transmitted(seed, wave_T, n, stream=0, start=0, threads=1):
    """Number of transmissions among samples [start, start + n)."""
    _check_probability(wave_T)
    k0, k1 = seed_key(seed)
    threads = max(1, min(int(threads), n // 100_000 + 1))
    bounds = np.linspace(start, start + n, threads + 1).astype(np.int64)
    chunks = list(zip(bounds[:-1], bounds[1:]))

    def work(chunk):
        lo, hi = chunk
        return kernels.count_phase_window(k0, k1, int(stream), int(lo), int(hi - lo), float(wave_T))

    if threads == 1:
        return int(work(chunks[0]))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return int(sum(pool.map(work, chunks)))


def wilson_interval(successes, n, z=1.96):
    if n == 0:
        return 0.0, 1.0
    p = successes / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class EnsembleResult:
    n_samples: int
    n_reflected: int
    n_transmitted: int
    wave_R: float
    wave_T: float
    seed: int
    energy: float
    ci_95: tuple  # Wilson interval for the transmitted fraction
    prng: str = PRNG
    rule_version: str = RULE_VERSION

    @property
    def t_hat(self):
        return self.n_transmitted / self.n_samples

    @property
    def sigma(self):
        """Binomial standard error of t_hat under the wave probability."""
        return math.sqrt(self.wave_T * (1.0 - self.wave_T) / self.n_samples)

    def within(self, k_sigma=5.0):
        return abs(self.t_hat - self.wave_T) <= k_sigma * self.sigma

    def to_dict(self):
        return {
            "energy": self.energy,
            "n_samples": self.n_samples,
            "n_reflected": self.n_reflected,
            "n_transmitted": self.n_transmitted,
            "t_hat": self.t_hat,
            "wave_R": self.wave_R,
            "wave_T": self.wave_T,
            "ci_95": list(self.ci_95),
            "seed": self.seed,
            "prng": self.prng,
            "rule_version": self.rule_version,
        }


def ensemble_scatter(E, barrier, n, seed, threads=1, mass=1.0, hbar=1.0, stream=0):
    if n < 1:
        raise DomainError("n must be at least 1")
    wave = solve_scattering(barrier, E, mass, hbar)
    # the decision uses T; R = 1 - T up to rounding for any barrier
    hits = count_transmitted(seed, wave.T_prob, n, stream=stream, threads=threads)
    return EnsembleResult(
        n_samples=int(n),
        n_reflected=int(n - hits),
        n_transmitted=hits,
        wave_R=wave.R_prob,
        wave_T=wave.T_prob,
        seed=int(seed),
        energy=float(E),
        ci_95=wilson_interval(hits, n),
    )


def transmit_measure(wave_T, n_grid=4096, decide=None):
    """Lebesgue measure (fraction of [0, 2 pi)) of the Transmit set.

    Scans a uniform theta grid for changes of decision and refines every
    change by bisection to adjacent doubles, so the result does not depend
    on sampling.  ``decide(theta) -> bool`` defaults to the phase-window rule.
    """
    if decide is None:
        _check_probability(wave_T)

        def decide(theta):
            return theta / TWO_PI < wave_T

    # close the scan on the last double below 2 pi so that every cell is checked
    grid = np.append(np.linspace(0.0, TWO_PI, n_grid + 1)[:-1], np.nextafter(TWO_PI, 0.0))
    flags = [bool(decide(t)) for t in grid]
    length = 0.0
    start = 0.0 if flags[0] else None
    for i in range(1, grid.size):
        if flags[i] == flags[i - 1]:
            continue
        lo, hi = grid[i - 1], grid[i]
        while True:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if bool(decide(mid)) == flags[i - 1]:
                lo = mid
            else:
                hi = mid
        if flags[i]:
            start = hi
        else:
            length += hi - start
            start = None
    if start is not None:
        length += TWO_PI - start
    return length / TWO_PI


def transverse_position(state, width):
    """Diagnostic: transverse offset w/2 sin(theta) inside a guide of width ``width``."""
    return 0.5 * width * math.sin(state.theta)


@dataclass(frozen=True)
class ConvergenceStudy:
    sizes: tuple
    rms_error: tuple
    slope: float


def convergence_study(wave_T, sizes=(1_000, 10_000, 100_000, 1_000_000), n_seeds=64,
                      base_seed=0):
    """RMS |t_hat - T| over independent seeds at each ensemble size, and the
    slope of log(rms) against log(n)."""
    _check_probability(wave_T)
    rms = []
    for n in sizes:
        errs = [count_transmitted(base_seed + s, wave_T, n) / n - wave_T for s in range(n_seeds)]
        rms.append(math.sqrt(float(np.mean(np.square(errs)))))
    slope = float(np.polyfit(np.log(sizes), np.log(rms), 1)[0])
    return ConvergenceStudy(sizes=tuple(int(s) for s in sizes), rms_error=tuple(rms), slope=slope)
