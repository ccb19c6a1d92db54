"""JSON configuration documents with unit-suffixed quantities.

Quantities are either plain numbers (already SI; angular frequencies in rad/s)
or strings ``"<number> <unit>"``. Hz-family units are ordinary frequencies and
are converted to angular frequency (x 2 pi). The pseudo-unit ``wm`` means
"multiples of the mechanical angular frequency" and is meant for rates and
detunings, e.g. ``"0.08 wm"``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import fields, replace
from pathlib import Path

from ..errors import ConfigError
from ..physics import SystemConfig
from .scenarios import DEFAULT_BASELINE, Axis, BaselineParameters, Observable

TWO_PI = 2.0 * math.pi

UNITS = {
    "frequency": {
        "rad/s": 1.0, "Hz": TWO_PI, "kHz": TWO_PI * 1e3, "MHz": TWO_PI * 1e6,
        "GHz": TWO_PI * 1e9, "THz": TWO_PI * 1e12,
    },
    "power": {"W": 1.0, "mW": 1e-3, "uW": 1e-6, "nW": 1e-9},
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9, "pm": 1e-12},
    "mass": {"kg": 1.0, "g": 1e-3, "mg": 1e-6, "ug": 1e-9, "ng": 1e-12, "pg": 1e-15},
    "temperature": {"K": 1.0, "mK": 1e-3, "uK": 1e-6},
    "dimensionless": {},
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z/]*)\s*$")

MECHANICAL_FIELDS = {
    "omega_m": "frequency", "quality_factor": "dimensionless", "mass": "mass", "temperature": "temperature",
}
OPTICAL_FIELDS = {
    "drive_wavelength": "length", "kappa_c": "frequency", "drive_power": "power",
    "cavity_length": "length", "delta_c": "frequency",
}
MICROWAVE_FIELDS = {
    "omega_w": "frequency", "kappa_w": "frequency", "drive_power": "power",
    "gap": "length", "mu": "dimensionless", "delta_w": "frequency",
}
# Document key -> BaselineParameters attribute, per section.
_BASELINE_KEYS = {
    "mechanical": {k: k for k in MECHANICAL_FIELDS},
    "optical": {
        "drive_wavelength": "drive_wavelength", "kappa_c": "kappa_c", "drive_power": "optical_power",
        "cavity_length": "cavity_length", "delta_c": "delta_c",
    },
    "microwave_defaults": {
        "omega_w": "omega_w", "kappa_w": "kappa_w", "drive_power": "microwave_power",
        "gap": "gap", "mu": "mu", "delta_w": "delta_w",
    },
}


def parse_quantity(value, dimension: str, omega_m: float | None = None, where: str = "value") -> float:
    """Convert a number or ``"<number> <unit>"`` string to an SI float."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{where}: expected a number or unit string, got {value!r}")
    m = _QUANTITY.match(value)
    if not m:
        raise ConfigError(f"{where}: cannot parse quantity {value!r}")
    number, unit = float(m.group(1)), m.group(2)
    if not unit:
        return number
    if unit == "wm":
        if dimension != "frequency":
            raise ConfigError(f"{where}: 'wm' only applies to frequencies, not {dimension}")
        if omega_m is None:
            raise ConfigError(f"{where}: 'wm' needs the mechanical frequency")
        return number * omega_m
    table = UNITS[dimension]
    if unit not in table:
        raise ConfigError(f"{where}: unit {unit!r} is not a {dimension} unit (allowed: {sorted(table)})")
    return number * table[unit]


def load_document(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return doc


def _section(doc, name) -> dict:
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"{name} must be an object")
    return sec


def baseline_from_document(doc: dict, base: BaselineParameters = DEFAULT_BASELINE) -> BaselineParameters:
    """Apply the ``mechanical``, ``optical`` and ``microwave_defaults`` sections to ``base``."""
    specs = {"mechanical": MECHANICAL_FIELDS, "optical": OPTICAL_FIELDS, "microwave_defaults": MICROWAVE_FIELDS}
    mech = _section(doc, "mechanical")
    omega_m = base.omega_m
    if "omega_m" in mech:
        omega_m = parse_quantity(mech["omega_m"], "frequency", where="mechanical.omega_m")
    updates = {}
    for name, spec in specs.items():
        sec = _section(doc, name)
        for key, val in sec.items():
            if key not in spec:
                raise ConfigError(f"{name}.{key}: unknown field (allowed: {sorted(spec)})")
            updates[_BASELINE_KEYS[name][key]] = parse_quantity(val, spec[key], omega_m, f"{name}.{key}")
    return replace(base, **updates)


def system_config_from_document(doc: dict, base: BaselineParameters = DEFAULT_BASELINE) -> SystemConfig:
    """Full network from a document with an explicit ``microwaves`` list.

    Entries may omit fields; they fall back to ``microwave_defaults``. Missing
    ``pair_id``/``sign`` follow the ``[pair1(+), pair1(-), ...]`` ordering and a
    missing ``delta_w`` becomes ``sign * microwave_defaults.delta_w``.
    """
    baseline = baseline_from_document(doc, base)
    items = doc.get("microwaves")
    if not isinstance(items, list) or not items:
        raise ConfigError("microwaves must be a non-empty list")
    cavities = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise ConfigError(f"microwaves[{i}] must be an object")
        extra = set(item) - set(MICROWAVE_FIELDS) - {"pair_id", "sign"}
        if extra:
            raise ConfigError(f"microwaves[{i}]: unknown fields {sorted(extra)}")
        sign = item.get("sign", 1 if i % 2 == 0 else -1)
        pair_id = item.get("pair_id", i // 2 + 1)
        if not isinstance(sign, int) or not isinstance(pair_id, int):
            raise ConfigError(f"microwaves[{i}]: sign and pair_id must be integers")
        cav = baseline.cavity(baseline.omega_w, sign * baseline.delta_w, pair_id, sign)
        vals = {
            key: parse_quantity(item[key], dim, baseline.omega_m, f"microwaves[{i}].{key}")
            for key, dim in MICROWAVE_FIELDS.items()
            if key in item
        }
        cavities.append(replace(cav, **vals))
    return SystemConfig(baseline.mechanical(), baseline.optical(), tuple(cavities))


def sweep_from_document(doc: dict) -> tuple[Axis, list[Observable] | None]:
    """``sweep`` section for custom scenarios: axis plus optional cavity pairs."""
    sec = _section(doc, "sweep")
    if "axis" not in sec:
        raise ConfigError("sweep.axis is required for a custom scenario")
    try:
        axis = Axis(
            name=str(sec["axis"]),
            start=float(sec.get("min", -1.0)),
            stop=float(sec.get("max", 1.0)),
            points=int(sec.get("points", 101)),
            spacing=str(sec.get("spacing", "linear")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"sweep: {exc}") from exc
    problems = axis.violations()
    if problems:
        raise ConfigError("; ".join(problems))
    observables = None
    if "observables" in sec:
        observables = []
        for pair in sec["observables"]:
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) for x in pair)):
                raise ConfigError(f"sweep.observables entries must be [i, j] cavity numbers, got {pair!r}")
            observables.append(Observable(f"w{pair[0]}/w{pair[1]}", pair[0], pair[1]))
    return axis, observables


def config_to_document(config: SystemConfig) -> dict:
    """Plain-SI JSON document that reloads to an identical config."""
    def asdict(obj):
        return {f.name: getattr(obj, f.name) for f in fields(obj)}

    return {
        "mechanical": asdict(config.mech),
        "optical": asdict(config.optical),
        "microwaves": [asdict(mw) for mw in config.microwaves],
    }

