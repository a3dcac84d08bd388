"""Strict JSON run configurations.

A schema is a nested dict whose leaves are ``Field`` objects.  Loading
rejects duplicate keys, unknown keys and type mismatches, naming the JSON
path of the offending entry, and fills every omitted leaf with its default.
"""

from dataclasses import dataclass
import json

from .errors import ConfigurationError

_KIND_TYPES = {
    "float": (int, float),
    "int": (int,),
    "bool": (bool,),
    "str": (str,),
    "object": (dict,),
    "floats": (list,),
}


@dataclass(frozen=True)
class Field:
    kind: str
    default: object = None
    nullable: bool = False
    choices: tuple = ()

    def check(self, value, path):
        if value is None:
            if self.nullable:
                return None
            raise ConfigurationError(f"{path}: expected {self.kind}, got null")
        ok = isinstance(value, _KIND_TYPES[self.kind])
        if self.kind in ("float", "int") and isinstance(value, bool):
            ok = False
        if not ok:
            raise ConfigurationError(
                f"{path}: expected {self.kind}, got {type(value).__name__} {value!r}"
            )
        if self.kind == "floats":
            for i, item in enumerate(value):
                if isinstance(item, bool) or not isinstance(item, (int, float)):
                    raise ConfigurationError(f"{path}[{i}]: expected float, got {item!r}")
            return [float(item) for item in value]
        if self.kind == "float":
            value = float(value)
        if self.choices and value not in self.choices:
            raise ConfigurationError(f"{path}: {value!r} is not one of {list(self.choices)}")
        return value


SOLITON = {
    "equation": Field("str", "nls", choices=("nls", "gp", "nlq")),
    "grid": {
        "zmin": Field("float", -40.0),
        "zmax": Field("float", 40.0),
        "n": Field("int", 2048),
    },
    "init": {
        "profile": Field("str", "sech", choices=("sech", "gaussian")),
        "a": Field("float", 1.0),
        "v": Field("float", 0.0),
        "z0": Field("float", 0.0),
        "amplitude": Field("float", None, nullable=True),
        "wavenumber": Field("float", None, nullable=True),
        "width": Field("float", 1.0),
        "periodic": Field("bool", False),
    },
    "potential": Field("object", None, nullable=True),
    "g": Field("float", 0.0),
    "dt": Field("float", 1e-3),
    "t_end": Field("float", 1.0),
    "snapshot_every": Field("int", 0),
    "eps": Field("float", 1e-8),
    "include_rest": Field("bool", False),
    "mass": Field("float", 1.0),
    "hbar": Field("float", 1.0),
    "seed": Field("int", None, nullable=True),
}

BOHM_RUN = {
    "grid": {
        "zmin": Field("float", -20.0),
        "zmax": Field("float", 20.0),
        "n": Field("int", 1024),
    },
    "init": {
        "width": Field("float", 1.0),
        "z0": Field("float", 0.0),
        "k0": Field("float", 1.0),
    },
    "potential": Field("object", None, nullable=True),
    "dt": Field("float", 1e-3),
    "levels": Field("int", 5),
    "mass": Field("float", 1.0),
    "hbar": Field("float", 1.0),
    "order": Field("int", 2, choices=(2, 4)),
}

KG = {
    "k": Field("floats", [0.5, 1.0, 2.0, 3.0, 4.0]),
    "f_o": Field("float", 1.0),
    "points_per_wavelength": Field("int", 256),
    "courant": Field("float", 0.5),
    "periods": Field("int", 50),
    "energy_steps": Field("int", 10000),
    "steps": Field("int", 1000),
    "snapshot_every": Field("int", 100),
    "f_drive": Field("float", 0.5),
}

DISPERSION = {
    "kmin": Field("float", -3.0),
    "kmax": Field("float", 3.0),
    "n": Field("int", 601),
    "f_o": Field("float", 1.0),
}

SCATTER = {
    "potential": Field("object", None, nullable=True),
    "E": Field("float", 0.5),
    "n_points": Field("int", 1001),
    "mass": Field("float", 1.0),
    "hbar": Field("float", 1.0),
}

BOUND = {
    "potential": Field("object", None, nullable=True),
    "n_states": Field("int", 3),
    "n_grid": Field("int", 2048),
    "method": Field("str", "fd4", choices=("fd4", "fourier")),
    "mass": Field("float", 1.0),
    "hbar": Field("float", 1.0),
}

BOHM_QP = {
    "profile": Field("str", "sech", choices=("sech", "gaussian")),
    "a": Field("float", 1.0),
    "z_max": Field("float", 6.0),
    "n": Field("int", 1201),
    "normalized": Field("bool", True),
    "order": Field("int", 2, choices=(2, 4)),
    "mass": Field("float", 1.0),
    "hbar": Field("float", 1.0),
}

ZIGZAG = {
    "potential": Field("object", None, nullable=True),
    "E": Field("float", 0.5),
    "n": Field("int", 100_000),
    "stream": Field("int", 0),
    "mass": Field("float", 1.0),
    "hbar": Field("float", 1.0),
    "seed": Field("int", None, nullable=True),
}

AMBIGUITY = {
    "shape": Field("str", "sech", choices=("gaussian", "sech", "rectangular")),
    "width": Field("float", 1.0),
    "duration": Field("float", 2.0),
    "chirp": Field("float", 0.0),
    "zmin": Field("float", -8.0),
    "zmax": Field("float", 8.0),
    "n": Field("int", 128),
    "n_delay": Field("int", None, nullable=True),
    "n_doppler": Field("int", None, nullable=True),
    "oversample": Field("int", 1),
}

BOHR = {"n": Field("str", "1..10")}

SCHEMAS = {
    "constants": {},
    "dispersion": DISPERSION,
    "kg": KG,
    "stationary-scatter": SCATTER,
    "stationary-bound": BOUND,
    "bohm-qp": BOHM_QP,
    "bohm-run": BOHM_RUN,
    "soliton": SOLITON,
    "zigzag": ZIGZAG,
    "ambiguity": AMBIGUITY,
    "bohr": BOHR,
    "repro": {},
}
ALIASES = {"soliton": {"eq": "equation"}}


def _reject_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ConfigurationError(f"duplicate key {key!r}")
        out[key] = value
    return out


def parse_json(text, source="<config>"):
    try:
        return json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            f"{source}:{exc.lineno}:{exc.colno}: malformed JSON ({exc.msg})"
        ) from None


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc.strerror}") from None
    return parse_json(text, str(path))


def defaults(schema):
    return {key: defaults(f) if isinstance(f, dict) else _copy(f.default)
            for key, f in schema.items()}


def _copy(value):
    return list(value) if isinstance(value, list) else value


def resolve(data, schema, aliases=None, path="$"):
    """Validate ``data`` against ``schema`` and return it with defaults filled in."""
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: expected object, got {type(data).__name__}")
    data = dict(data)
    for alias, target in (aliases or {}).items():
        if alias in data:
            if target in data:
                raise ConfigurationError(f"{path}: both {alias!r} and {target!r} given")
            data[target] = data.pop(alias)
    unknown = sorted(set(data) - set(schema))
    if unknown:
        raise ConfigurationError(f"{path}: unknown key {unknown[0]!r}")
    out = {}
    for key, spec in schema.items():
        sub = f"{path}.{key}"
        if isinstance(spec, dict):
            out[key] = resolve(data.get(key, {}), spec, None, sub)
        elif key in data:
            out[key] = spec.check(data[key], sub)
        else:
            out[key] = _copy(spec.default)
    return out


def load_config(path, kind):
    """Read, validate and default-fill a configuration of the given kind."""
    return resolve(read_json(path), SCHEMAS[kind], ALIASES.get(kind))
