"""Declarative 1D potentials: piecewise-constant segments or a named analytic form."""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ConfigurationError

ANALYTIC_FORMS = {
    # form: (parameter defaults, builder of V(z))
    "zero": ({}, lambda z, p: np.zeros_like(z)),
    "harmonic": (
        {"omega": 1.0, "mass": 1.0, "center": 0.0},
        lambda z, p: 0.5 * p["mass"] * p["omega"] ** 2 * (z - p["center"]) ** 2,
    ),
    "linear": (
        {"force": 1.0, "center": 0.0},
        lambda z, p: -p["force"] * (z - p["center"]),
    ),
    "periodic_ramp": (
        {"force": 1.0, "center": 0.0, "period": 2.0 * math.pi, "half_width": None, "edge": 1.0},
        lambda z, p: _periodic_ramp(z, p),
    ),
}


def _log_cosh(x):
    return np.logaddexp(x, -x) - math.log(2.0)


def _periodic_ramp(z, p):
    """-F (z - center) on |z - center| < half_width, returning smoothly over the
    rest of the period so that V and all its derivatives are periodic."""
    period = p["period"]
    a = p["half_width"] if p["half_width"] is not None else 0.25 * period
    d = p["edge"]
    if not 0 < a < 0.5 * period:
        raise ConfigurationError("periodic ramp needs 0 < half_width < period / 2")
    x = np.mod(z - p["center"] + 0.5 * period, period) - 0.5 * period
    # force profile: +1 inside, -c outside, zero mean over the period
    c = a / (0.5 * period - a)
    inner = 0.5 * d * (_log_cosh((x + a) / d) - _log_cosh((x - a) / d))
    return -p["force"] * ((1.0 + c) * inner - c * x)


@dataclass(frozen=True)
class PotentialSpec:
    """Either ``segments`` ((z_start, z_end, V), contiguous, ordered) or ``analytic``.

    For scattering the first and last segment are the asymptotic leads and
    extend to minus and plus infinity.
    """

    segments: tuple = ()
    analytic: str | None = None
    params: dict = field(default_factory=dict)
    domain: tuple | None = None

    def __post_init__(self):
        if self.analytic is None:
            segs = tuple(tuple(float(x) for x in s) for s in self.segments)
            if not segs:
                raise ConfigurationError("potential needs segments or an analytic form")
            for i, (z0, z1, v) in enumerate(segs):
                if len(segs[i]) != 3:
                    raise ConfigurationError(f"segment {i} must be (z_start, z_end, V)")
                if not z1 > z0:
                    raise ConfigurationError(f"segment {i} has zero or negative width")
                if not math.isfinite(v):
                    raise ConfigurationError(f"segment {i} has a non-finite potential")
                if i and not z0 == segs[i - 1][1]:
                    raise ConfigurationError(
                        f"segment {i} starts at {z0} but segment {i - 1} ends at {segs[i - 1][1]}"
                    )
            object.__setattr__(self, "segments", segs)
            if self.domain is None:
                object.__setattr__(self, "domain", (segs[0][0], segs[-1][1]))
        else:
            if self.analytic not in ANALYTIC_FORMS:
                raise ConfigurationError(f"unknown analytic potential {self.analytic!r}")
            defaults = ANALYTIC_FORMS[self.analytic][0]
            unknown = set(self.params) - set(defaults)
            if unknown:
                raise ConfigurationError(
                    f"unknown parameter(s) {sorted(unknown)} for {self.analytic!r} potential"
                )
            object.__setattr__(self, "params", {**defaults, **self.params})
        if self.domain is not None:
            lo, hi = (float(x) for x in self.domain)
            if not hi > lo:
                raise ConfigurationError("potential domain must have z_max > z_min")
            object.__setattr__(self, "domain", (lo, hi))

    @property
    def is_piecewise(self):
        return self.analytic is None

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if self.analytic is not None:
            return ANALYTIC_FORMS[self.analytic][1](z, self.params)
        edges = np.array([s[1] for s in self.segments[:-1]])
        values = np.array([s[2] for s in self.segments])
        return values[np.searchsorted(edges, z, side="right")]

    def to_dict(self):
        if self.analytic is None:
            return {"segments": [list(s) for s in self.segments]}
        out = {"analytic": self.analytic, "params": dict(self.params)}
        if self.domain is not None:
            out["domain"] = list(self.domain)
        return out

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigurationError("potential must be a JSON object")
        allowed = {"segments", "analytic", "params", "domain"}
        unknown = set(data) - allowed
        if unknown:
            raise ConfigurationError(f"unknown potential key(s): {sorted(unknown)}")
        if "segments" in data:
            return cls(segments=tuple(tuple(s) for s in data["segments"]),
                       domain=data.get("domain"))
        return cls(analytic=data.get("analytic"), params=dict(data.get("params", {})),
                   domain=data.get("domain"))


def rectangular_barrier(height, width, lead=5.0, start=0.0):
    return PotentialSpec(segments=(
        (start - lead, start, 0.0),
        (start, start + width, height),
        (start + width, start + width + lead, 0.0),
    ))


def potential_step(height, lead=5.0):
    return PotentialSpec(segments=((-lead, 0.0, 0.0), (0.0, lead, height)))


def harmonic(omega=1.0, mass=1.0, center=0.0, domain=(-10.0, 10.0)):
    return PotentialSpec(analytic="harmonic",
                         params={"omega": omega, "mass": mass, "center": center},
                         domain=domain)


def linear_ramp(force, center=0.0, domain=None):
    return PotentialSpec(analytic="linear", params={"force": force, "center": center},
                         domain=domain)


def periodic_ramp(force, domain, half_width=None, edge=1.0):
    """Linear ramp -F z over the middle of a periodic domain centred on its midpoint."""
    lo, hi = domain
    return PotentialSpec(analytic="periodic_ramp",
                         params={"force": force, "center": 0.5 * (lo + hi), "period": hi - lo,
                                 "half_width": half_width, "edge": edge},
                         domain=domain)


def zero(domain=None):
    return PotentialSpec(analytic="zero", domain=domain)
